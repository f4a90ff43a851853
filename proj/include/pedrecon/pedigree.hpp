#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "pedrecon/error.hpp"

namespace pedrecon {

struct IndividualId {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const IndividualId&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, IndividualId id) {
  return os << id.value;
}

enum class Sex { Male, Female, Unknown };

inline char sex_code(Sex s) {
  switch (s) {
    case Sex::Male:
      return 'M';
    case Sex::Female:
      return 'F';
    default:
      return 'U';
  }
}

struct Individual {
  IndividualId id;
  Sex sex = Sex::Unknown;
  int generation = 1;  // 1 = extant, larger = older
  std::optional<IndividualId> father;
  std::optional<IndividualId> mother;

  bool is_founder() const { return !father && !mother; }
};

// Meioses between two individuals. Disconnected pairs get kInfinity, and
// two infinite distances compare equal.
using Distance = std::uint32_t;
inline constexpr Distance kInfinity = std::numeric_limits<Distance>::max();

// Extant-to-ancestor path, stored from the extant end upwards.
struct InheritancePath {
  std::vector<IndividualId> nodes;

  std::size_t length() const { return nodes.empty() ? 0 : nodes.size() - 1; }
};

// Individuals linked child -> (father, mother). Generations are numbered
// backwards in time: generation 1 is the extant set.
class PedigreeGraph {
 public:
  // Adds an individual with a fresh sequential id.
  IndividualId add(Sex sex, int generation,
                   std::optional<IndividualId> father = std::nullopt,
                   std::optional<IndividualId> mother = std::nullopt) {
    Individual ind{IndividualId{next_id_}, sex, generation, father, mother};
    insert(ind);
    return ind.id;
  }

  // Inserts with a caller-chosen id. Parents may be inserted later; call
  // validate() once the graph is complete.
  void insert(const Individual& ind) {
    if (ind.id.value == 0) throw Error("individual id 0 is reserved");
    if (individuals_.contains(ind.id))
      throw Error("duplicate individual id " + std::to_string(ind.id.value));
    if (ind.generation < 1)
      throw Error("generation must be positive for id " +
                  std::to_string(ind.id.value));
    if (ind.father.has_value() != ind.mother.has_value())
      throw Error("individual " + std::to_string(ind.id.value) +
                  " has exactly one recorded parent");
    individuals_.emplace(ind.id, ind);
    if (ind.father) children_[*ind.father].push_back(ind.id);
    if (ind.mother) children_[*ind.mother].push_back(ind.id);
    next_id_ = std::max(next_id_, ind.id.value + 1);
  }

  void set_parents(IndividualId child, IndividualId father,
                   IndividualId mother) {
    Individual& c = mutable_at(child);
    if (!c.is_founder())
      throw Error("individual " + std::to_string(child.value) +
                  " already has parents");
    c.father = father;
    c.mother = mother;
    children_[father].push_back(child);
    children_[mother].push_back(child);
  }

  void set_sex(IndividualId id, Sex sex) { mutable_at(id).sex = sex; }

  bool contains(IndividualId id) const { return individuals_.contains(id); }

  const Individual& at(IndividualId id) const {
    auto it = individuals_.find(id);
    if (it == individuals_.end())
      throw Error("unknown individual id " + std::to_string(id.value));
    return it->second;
  }

  const std::vector<IndividualId>& children(IndividualId id) const {
    static const std::vector<IndividualId> kNone;
    auto it = children_.find(id);
    return it == children_.end() ? kNone : it->second;
  }

  std::vector<IndividualId> parents(IndividualId id) const {
    const Individual& ind = at(id);
    if (ind.is_founder()) return {};
    return {*ind.father, *ind.mother};
  }

  std::size_t size() const { return individuals_.size(); }
  IndividualId next_id() const { return IndividualId{next_id_}; }

  // Ids in ascending order.
  std::vector<IndividualId> ids() const {
    std::vector<IndividualId> out;
    out.reserve(individuals_.size());
    for (const auto& [id, _] : individuals_) out.push_back(id);
    return out;
  }

  std::vector<IndividualId> generation(int g) const {
    std::vector<IndividualId> out;
    for (const auto& [id, ind] : individuals_)
      if (ind.generation == g) out.push_back(id);
    return out;
  }

  std::vector<IndividualId> extant() const { return generation(1); }

  int height() const {
    int h = 0;
    for (const auto& [_, ind] : individuals_) h = std::max(h, ind.generation);
    return h;
  }

  auto begin() const { return individuals_.begin(); }
  auto end() const { return individuals_.end(); }

  // Throws Error on the first violated structural invariant.
  void validate() const {
    for (const auto& [id, ind] : individuals_) {
      if (ind.is_founder()) continue;
      const std::string who = std::to_string(id.value);
      if (*ind.father == *ind.mother)
        throw Error("individual " + who + " has identical parents");
      for (IndividualId p : {*ind.father, *ind.mother}) {
        auto it = individuals_.find(p);
        if (it == individuals_.end())
          throw Error("parent " + std::to_string(p.value) + " of " + who +
                      " is missing");
        if (it->second.generation != ind.generation + 1)
          throw Error("parent " + std::to_string(p.value) + " of " + who +
                      " is not one generation older");
      }
      if (at(*ind.father).sex == Sex::Female)
        throw Error("father of " + who + " is female");
      if (at(*ind.mother).sex == Sex::Male)
        throw Error("mother of " + who + " is male");
    }
    for (const auto& [parent, _] : children_)
      if (!individuals_.contains(parent))
        throw Error("dangling parent reference " +
                    std::to_string(parent.value));
  }

  bool operator==(const PedigreeGraph& other) const {
    if (individuals_.size() != other.individuals_.size()) return false;
    for (const auto& [id, a] : individuals_) {
      auto it = other.individuals_.find(id);
      if (it == other.individuals_.end()) return false;
      const Individual& b = it->second;
      if (a.sex != b.sex || a.generation != b.generation ||
          a.father != b.father || a.mother != b.mother)
        return false;
    }
    return true;
  }

 private:
  Individual& mutable_at(IndividualId id) {
    auto it = individuals_.find(id);
    if (it == individuals_.end())
      throw Error("unknown individual id " + std::to_string(id.value));
    return it->second;
  }

  std::map<IndividualId, Individual> individuals_;
  std::map<IndividualId, std::vector<IndividualId>> children_;
  std::uint32_t next_id_ = 1;
};

// Breadth-first distances over the undirected parent/child graph.
inline std::map<IndividualId, Distance> distances_from(const PedigreeGraph& p,
                                                       IndividualId source) {
  p.at(source);
  std::map<IndividualId, Distance> dist{{source, 0}};
  std::deque<IndividualId> queue{source};
  while (!queue.empty()) {
    IndividualId u = queue.front();
    queue.pop_front();
    const Distance du = dist[u];
    auto visit = [&](IndividualId v) {
      if (dist.emplace(v, du + 1).second) queue.push_back(v);
    };
    for (IndividualId v : p.parents(u)) visit(v);
    for (IndividualId v : p.children(u)) visit(v);
  }
  return dist;
}

inline Distance shortest_distance(const PedigreeGraph& p, IndividualId i,
                                  IndividualId j) {
  p.at(j);
  auto dist = distances_from(p, i);
  auto it = dist.find(j);
  return it == dist.end() ? kInfinity : it->second;
}

inline std::set<IndividualId> extant_descendants(const PedigreeGraph& p,
                                                 IndividualId k) {
  std::set<IndividualId> out;
  std::set<IndividualId> seen{k};
  std::vector<IndividualId> stack{k};
  while (!stack.empty()) {
    IndividualId u = stack.back();
    stack.pop_back();
    if (p.at(u).generation == 1) out.insert(u);
    for (IndividualId c : p.children(u))
      if (seen.insert(c).second) stack.push_back(c);
  }
  return out;
}

// Every monotone child->parent path from `extant` up to `ancestor`.
// Exponential in the worst case; meant for small pedigrees and tests.
inline std::vector<InheritancePath> enumerate_inheritance_paths(
    const PedigreeGraph& p, IndividualId ancestor, IndividualId extant) {
  const Individual& top = p.at(ancestor);
  const Individual& bottom = p.at(extant);
  if (top.generation <= bottom.generation)
    throw Error("ancestor must be from an older generation than descendant");

  std::vector<InheritancePath> out;
  std::vector<IndividualId> path{extant};
  std::function<void(IndividualId)> climb = [&](IndividualId u) {
    if (u == ancestor) {
      out.push_back(InheritancePath{path});
      return;
    }
    if (p.at(u).generation >= top.generation) return;
    for (IndividualId parent : p.parents(u)) {
      path.push_back(parent);
      climb(parent);
      path.pop_back();
    }
  };
  climb(extant);
  return out;
}

}  // namespace pedrecon

template <>
struct std::hash<pedrecon::IndividualId> {
  std::size_t operator()(pedrecon::IndividualId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
