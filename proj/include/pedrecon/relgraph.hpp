#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pedrecon/error.hpp"
#include "pedrecon/pedigree.hpp"

namespace pedrecon {

enum class EdgeKind { Sibling, HalfSibling };

inline std::string_view to_string(EdgeKind k) {
  return k == EdgeKind::Sibling ? "sibling" : "half_sibling";
}

struct RelEdge {
  IndividualId a;  // a < b
  IndividualId b;
  EdgeKind kind;

  bool operator==(const RelEdge&) const = default;
};

// One generation's individuals with sibling / half-sibling edges. At most
// one edge per unordered pair.
class RelationshipGraph {
 public:
  RelationshipGraph() = default;
  explicit RelationshipGraph(std::vector<IndividualId> nodes) {
    for (IndividualId id : nodes) add_node(id);
  }

  void add_node(IndividualId id) { nodes_.insert(id); }

  void add_edge(IndividualId a, IndividualId b, EdgeKind kind) {
    if (a == b) throw Error("self edge on " + std::to_string(a.value));
    if (!nodes_.contains(a) || !nodes_.contains(b)) throw Error("edge endpoint not in graph");
    edges_[key(a, b)] = kind;
  }

  bool remove_edge(IndividualId a, IndividualId b) { return edges_.erase(key(a, b)) > 0; }

  std::optional<EdgeKind> edge(IndividualId a, IndividualId b) const {
    auto it = edges_.find(key(a, b));
    if (it == edges_.end()) return std::nullopt;
    return it->second;
  }

  const std::set<IndividualId>& nodes() const { return nodes_; }

  std::vector<RelEdge> edges() const {
    std::vector<RelEdge> out;
    for (const auto& [k, kind] : edges_) out.push_back({k.first, k.second, kind});
    return out;
  }

  std::size_t edge_count() const { return edges_.size(); }

  std::size_t edge_count(EdgeKind kind) const {
    return static_cast<std::size_t>(std::count_if(
        edges_.begin(), edges_.end(), [&](const auto& e) { return e.second == kind; }));
  }

  bool operator==(const RelationshipGraph&) const = default;

 private:
  static std::pair<IndividualId, IndividualId> key(IndividualId a, IndividualId b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
  }

  std::set<IndividualId> nodes_;
  std::map<std::pair<IndividualId, IndividualId>, EdgeKind> edges_;
};

// Debug dump: `id_i  id_j  kind`.
inline void write_graph_tsv(std::ostream& out, const RelationshipGraph& g) {
  for (const RelEdge& e : g.edges())
    out << e.a.value << '\t' << e.b.value << '\t' << to_string(e.kind) << '\n';
}

enum class DeletionReason {
  SiblingConflict,      // sibling component that is not a clique
  HalfSiblingConflict,  // incomplete half-sibling link between sibling cliques
  CliquePruning,        // virtual node in too many or duplicated cliques
};

inline std::string_view to_string(DeletionReason r) {
  switch (r) {
    case DeletionReason::SiblingConflict:
      return "sibling_conflict";
    case DeletionReason::HalfSiblingConflict:
      return "half_sibling_conflict";
    default:
      return "clique_pruning";
  }
}

struct Deletion {
  RelEdge edge;
  DeletionReason reason;
};

// Members sorted ascending.
using SiblingClique = std::vector<IndividualId>;

// Index-based undirected graph used by the clique routines.
class SimpleGraph {
 public:
  explicit SimpleGraph(std::size_t n = 0) : adj_(n, std::vector<bool>(n, false)) {}

  std::size_t size() const { return adj_.size(); }
  bool adjacent(std::size_t u, std::size_t v) const { return adj_[u][v]; }

  void connect(std::size_t u, std::size_t v) {
    if (u == v) return;
    adj_[u][v] = adj_[v][u] = true;
  }
  void disconnect(std::size_t u, std::size_t v) { adj_[u][v] = adj_[v][u] = false; }

  std::vector<std::size_t> neighbors(std::size_t u) const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < size(); ++v)
      if (adj_[u][v]) out.push_back(v);
    return out;
  }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (std::size_t u = 0; u < size(); ++u)
      for (std::size_t v = u + 1; v < size(); ++v) n += adj_[u][v];
    return n;
  }

 private:
  std::vector<std::vector<bool>> adj_;
};

namespace detail {

// Fixed-width bitset over the vertices of one clique search.
class VertexSet {
 public:
  explicit VertexSet(std::size_t n = 0) : words_((n + 63) / 64, 0) {}

  void set(std::size_t v) { words_[v / 64] |= std::uint64_t{1} << (v % 64); }
  void reset(std::size_t v) { words_[v / 64] &= ~(std::uint64_t{1} << (v % 64)); }
  bool test(std::size_t v) const { return (words_[v / 64] >> (v % 64)) & 1; }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  std::size_t count() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
    return n;
  }
  VertexSet operator&(const VertexSet& o) const {
    VertexSet r = *this;
    for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] &= o.words_[k];
    return r;
  }
  // Smallest member at or after `from`, or npos.
  std::size_t next(std::size_t from) const {
    for (std::size_t k = from / 64; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      if (k == from / 64) w &= ~std::uint64_t{0} << (from % 64);
      if (w) return k * 64 + static_cast<std::size_t>(__builtin_ctzll(w));
    }
    return npos;
  }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace detail

// Exact maximum clique among `allowed` vertices by branch and bound, with
// a greedy colouring of the candidates as the upper bound. Vertices are
// branched on in ascending order and only strictly larger cliques replace
// the incumbent, so ties resolve to the lexicographically smallest member
// list.
inline std::vector<std::size_t> maximum_clique(const SimpleGraph& g,
                                               const std::vector<std::size_t>& allowed) {
  using detail::VertexSet;
  const std::size_t n = g.size();
  std::vector<VertexSet> adj(n, VertexSet(n));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (g.adjacent(u, v)) adj[u].set(v);

  auto colour_bound = [&](VertexSet uncoloured) {
    std::size_t colours = 0;
    while (!uncoloured.empty()) {
      ++colours;
      VertexSet avail = uncoloured;
      for (std::size_t v = avail.next(0); v != VertexSet::npos; v = avail.next(v + 1)) {
        uncoloured.reset(v);
        for (std::size_t w = avail.next(v + 1); w != VertexSet::npos; w = avail.next(w + 1))
          if (adj[v].test(w)) avail.reset(w);
      }
    }
    return colours;
  };

  std::vector<std::size_t> best, current;
  auto expand = [&](auto&& self, VertexSet candidates) -> void {
    if (current.size() > best.size()) best = current;
    if (candidates.empty() || current.size() + colour_bound(candidates) <= best.size()) return;
    for (std::size_t v = candidates.next(0); v != VertexSet::npos; v = candidates.next(v + 1)) {
      if (current.size() + candidates.count() <= best.size()) return;
      current.push_back(v);
      self(self, candidates & adj[v]);
      current.pop_back();
      candidates.reset(v);
    }
  };
  VertexSet start(n);
  for (std::size_t v : allowed) start.set(v);
  expand(expand, start);
  return best;
}

struct CliqueEnumeration {
  std::vector<std::vector<std::size_t>> cliques;  // maximal, size >= 2, sorted
  std::vector<std::size_t> isolated;              // vertices with no edges
};

// Bron-Kerbosch with Tomita pivoting. Worst case exponential; fine for the
// small per-generation graphs it runs on.
inline CliqueEnumeration maximal_cliques(const SimpleGraph& g) {
  CliqueEnumeration out;
  std::vector<std::size_t> r;
  auto bk = [&](auto&& self, std::vector<std::size_t> p, std::vector<std::size_t> x) -> void {
    if (p.empty() && x.empty()) {
      if (r.size() >= 2) {
        auto c = r;
        std::sort(c.begin(), c.end());
        out.cliques.push_back(std::move(c));
      }
      return;
    }
    std::size_t pivot = 0;
    std::size_t best = 0;
    bool have_pivot = false;
    for (const auto* set : {&p, &x}) {
      for (std::size_t u : *set) {
        std::size_t n = 0;
        for (std::size_t v : p) n += g.adjacent(u, v);
        if (!have_pivot || n > best) {
          pivot = u;
          best = n;
          have_pivot = true;
        }
      }
    }
    std::vector<std::size_t> branch;
    for (std::size_t v : p)
      if (!g.adjacent(pivot, v)) branch.push_back(v);
    for (std::size_t v : branch) {
      std::vector<std::size_t> np, nx;
      for (std::size_t u : p)
        if (g.adjacent(v, u)) np.push_back(u);
      for (std::size_t u : x)
        if (g.adjacent(v, u)) nx.push_back(u);
      r.push_back(v);
      self(self, np, nx);
      r.pop_back();
      p.erase(std::find(p.begin(), p.end(), v));
      x.push_back(v);
    }
  };
  std::vector<std::size_t> all;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (g.neighbors(v).empty()) out.isolated.push_back(v);
    else all.push_back(v);
  }
  bk(bk, all, {});
  std::sort(out.cliques.begin(), out.cliques.end());
  return out;
}

// Greedy clique partition of the sibling-edge subgraph: repeatedly take a
// maximum clique and remove it. Sibling edges between different parts are
// deleted. Every node ends up in exactly one returned clique.
inline std::vector<SiblingClique> resolve_sibling_conflicts(RelationshipGraph& g,
                                                            std::vector<Deletion>* log = nullptr) {
  const std::vector<IndividualId> ids(g.nodes().begin(), g.nodes().end());
  std::map<IndividualId, std::size_t> index;
  for (std::size_t k = 0; k < ids.size(); ++k) index[ids[k]] = k;
  SimpleGraph sib(ids.size());
  for (const RelEdge& e : g.edges())
    if (e.kind == EdgeKind::Sibling) sib.connect(index[e.a], index[e.b]);

  std::vector<std::size_t> part(ids.size(), 0);
  std::vector<bool> taken(ids.size(), false);
  std::vector<SiblingClique> cliques;
  for (std::size_t seed = 0; seed < ids.size(); ++seed) {
    if (taken[seed]) continue;
    // Remaining nodes of seed's sibling component.
    std::vector<std::size_t> component{seed};
    std::vector<bool> in(ids.size(), false);
    in[seed] = true;
    for (std::size_t k = 0; k < component.size(); ++k)
      for (std::size_t v : sib.neighbors(component[k]))
        if (!taken[v] && !in[v]) {
          in[v] = true;
          component.push_back(v);
        }
    while (!component.empty()) {
      auto best = maximum_clique(sib, component);
      SiblingClique members;
      for (std::size_t v : best) {
        taken[v] = true;
        part[v] = cliques.size();
        members.push_back(ids[v]);
      }
      cliques.push_back(std::move(members));
      std::erase_if(component, [&](std::size_t v) { return taken[v]; });
    }
  }
  for (const RelEdge& e : g.edges()) {
    if (e.kind != EdgeKind::Sibling || part[index[e.a]] == part[index[e.b]]) continue;
    g.remove_edge(e.a, e.b);
    if (log) log->push_back({e, DeletionReason::SiblingConflict});
  }
  std::sort(cliques.begin(), cliques.end());
  return cliques;
}

// Two sibling cliques keep their half-sibling edges only when every cross
// pair carries one. Half-sibling edges inside a clique are always removed.
inline void resolve_half_sibling_conflicts(RelationshipGraph& g,
                                           const std::vector<SiblingClique>& cliques,
                                           std::vector<Deletion>* log = nullptr) {
  std::map<IndividualId, std::size_t> part;
  for (std::size_t c = 0; c < cliques.size(); ++c)
    for (IndividualId id : cliques[c]) part[id] = c;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<RelEdge>> between;
  for (const RelEdge& e : g.edges()) {
    if (e.kind != EdgeKind::HalfSibling) continue;
    const std::size_t ca = part.at(e.a), cb = part.at(e.b);
    if (ca == cb) {
      g.remove_edge(e.a, e.b);
      if (log) log->push_back({e, DeletionReason::HalfSiblingConflict});
      continue;
    }
    between[{std::min(ca, cb), std::max(ca, cb)}].push_back(e);
  }
  for (const auto& [pair, edges] : between) {
    if (edges.size() == cliques[pair.first].size() * cliques[pair.second].size()) continue;
    for (const RelEdge& e : edges) {
      g.remove_edge(e.a, e.b);
      if (log) log->push_back({e, DeletionReason::HalfSiblingConflict});
    }
  }
}

// Sibling cliques contracted to single vertices, joined where the two
// cliques are completely half-sibling connected.
struct VirtualGraph {
  std::vector<SiblingClique> cliques;  // vertex k stands for cliques[k]
  SimpleGraph graph;
};

inline VirtualGraph build_virtual_graph(const RelationshipGraph& g,
                                        const std::vector<SiblingClique>& cliques) {
  VirtualGraph vg{cliques, SimpleGraph(cliques.size())};
  std::map<IndividualId, std::size_t> part;
  for (std::size_t c = 0; c < cliques.size(); ++c)
    for (IndividualId id : cliques[c]) part[id] = c;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> counts;
  for (const RelEdge& e : g.edges()) {
    const std::size_t ca = part.at(e.a), cb = part.at(e.b);
    if (e.kind == EdgeKind::Sibling) {
      if (ca != cb) throw Error("sibling edge crosses sibling cliques");
      continue;
    }
    if (ca == cb) throw Error("half-sibling edge inside a sibling clique");
    ++counts[{std::min(ca, cb), std::max(ca, cb)}];
  }
  for (const auto& [pair, n] : counts) {
    if (n != cliques[pair.first].size() * cliques[pair.second].size())
      throw Error("incomplete half-sibling connection between sibling cliques");
    vg.graph.connect(pair.first, pair.second);
  }
  return vg;
}

namespace detail {

inline void delete_virtual_edge(RelationshipGraph& g, const VirtualGraph& vg, std::size_t u,
                                std::size_t v, std::vector<Deletion>* log) {
  for (IndividualId a : vg.cliques[u])
    for (IndividualId b : vg.cliques[v]) {
      if (g.edge(a, b) != EdgeKind::HalfSibling) continue;
      g.remove_edge(a, b);
      if (log) log->push_back({{std::min(a, b), std::max(a, b), EdgeKind::HalfSibling},
                               DeletionReason::CliquePruning});
    }
}

}  // namespace detail

// Removes virtual edges until every virtual vertex lies in at most two
// maximal cliques and no two vertices lie in the same pair of cliques;
// otherwise the clique labels cannot satisfy the half-sibling constraint.
// A vertex in three or more cliques keeps the two largest (ties by member
// order). Every round deletes at least one edge.
inline void prune_clique_membership(RelationshipGraph& g,
                                    const std::vector<SiblingClique>& cliques,
                                    std::vector<Deletion>* log = nullptr) {
  for (;;) {
    VirtualGraph vg = build_virtual_graph(g, cliques);
    CliqueEnumeration mc = maximal_cliques(vg.graph);
    std::vector<std::vector<std::size_t>> member_of(vg.graph.size());
    for (std::size_t c = 0; c < mc.cliques.size(); ++c)
      for (std::size_t v : mc.cliques[c]) member_of[v].push_back(c);

    auto by_size = [&](std::size_t a, std::size_t b) {
      if (mc.cliques[a].size() != mc.cliques[b].size())
        return mc.cliques[a].size() > mc.cliques[b].size();
      return mc.cliques[a] < mc.cliques[b];
    };
    // Drops v's virtual edges to anything outside the kept cliques.
    auto keep_only = [&](std::size_t v, const std::vector<std::size_t>& kept) {
      std::set<std::size_t> allowed;
      for (std::size_t c : kept) allowed.insert(mc.cliques[c].begin(), mc.cliques[c].end());
      bool deleted = false;
      for (std::size_t w : vg.graph.neighbors(v)) {
        if (allowed.contains(w)) continue;
        detail::delete_virtual_edge(g, vg, v, w, log);
        deleted = true;
      }
      return deleted;
    };

    bool changed = false;
    std::map<std::vector<std::size_t>, std::size_t> seen_pairs;
    for (std::size_t v = 0; v < member_of.size() && !changed; ++v) {
      auto mine = member_of[v];
      std::sort(mine.begin(), mine.end(), by_size);
      if (mine.size() >= 3) {
        changed = keep_only(v, {mine[0], mine[1]}) || keep_only(v, {mine[0]});
      } else if (mine.size() == 2) {
        auto key = member_of[v];
        std::sort(key.begin(), key.end());
        if (!seen_pairs.emplace(key, v).second) changed = keep_only(v, {mine[0]});
      }
    }
    if (!changed) return;
  }
}

using Label = std::uint32_t;

struct LabelPair {
  Label first;
  Label second;

  bool operator==(const LabelPair&) const = default;
};

// Per virtual vertex: each maximal clique gets a shared label; a vertex in
// one clique adds a fresh label, a vertex in two takes both clique labels,
// and an isolated vertex gets two fresh labels.
inline std::vector<LabelPair> label_virtual(const VirtualGraph& vg,
                                            const CliqueEnumeration& mc) {
  const std::size_t n = vg.graph.size();
  std::vector<std::vector<Label>> shared(n);
  Label next = 0;
  for (const auto& clique : mc.cliques) {
    const Label l = next++;
    for (std::size_t v : clique) shared[v].push_back(l);
  }
  std::vector<LabelPair> out(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (shared[v].size() > 2) throw Error("virtual vertex in more than two maximal cliques");
    if (shared[v].size() == 2) out[v] = {shared[v][0], shared[v][1]};
  }
  for (std::size_t v = 0; v < n; ++v)
    if (shared[v].size() == 1) out[v] = {shared[v][0], next++};
  for (std::size_t v = 0; v < n; ++v)
    if (shared[v].empty()) {
      out[v].first = next++;
      out[v].second = next++;
    }
  return out;
}

using Labeling = std::map<IndividualId, LabelPair>;

struct ResolutionResult {
  RelationshipGraph resolved;
  std::vector<SiblingClique> cliques;
  VirtualGraph virtual_graph;
  CliqueEnumeration virtual_cliques;
  Labeling labeling;
  std::vector<Deletion> deletions;
};

// Full pipeline for one generation: both conflict passes, clique pruning,
// virtual graph, labeling expanded back to the individuals.
inline ResolutionResult resolve_and_label(RelationshipGraph g) {
  ResolutionResult r;
  r.cliques = resolve_sibling_conflicts(g, &r.deletions);
  resolve_half_sibling_conflicts(g, r.cliques, &r.deletions);
  prune_clique_membership(g, r.cliques, &r.deletions);
  r.virtual_graph = build_virtual_graph(g, r.cliques);
  r.virtual_cliques = maximal_cliques(r.virtual_graph.graph);
  auto labels = label_virtual(r.virtual_graph, r.virtual_cliques);
  for (std::size_t v = 0; v < labels.size(); ++v)
    for (IndividualId id : r.virtual_graph.cliques[v]) r.labeling[id] = labels[v];
  r.resolved = std::move(g);
  return r;
}

// Every pair checked against the four labeling constraints. Empty when
// the labeling is valid for `g`.
inline std::vector<std::string> labeling_violations(const RelationshipGraph& g,
                                                    const Labeling& labeling) {
  std::vector<std::string> out;
  const std::vector<IndividualId> ids(g.nodes().begin(), g.nodes().end());
  auto shared = [](const LabelPair& x, const LabelPair& y) {
    int n = 0;
    for (Label a : {x.first, x.second})
      if (a == y.first || a == y.second) ++n;
    return n;
  };
  for (IndividualId id : ids) {
    auto it = labeling.find(id);
    if (it == labeling.end()) {
      out.push_back("node " + std::to_string(id.value) + " unlabeled");
      continue;
    }
    if (it->second.first == it->second.second)
      out.push_back("node " + std::to_string(id.value) + " has two identical labels");
  }
  if (!out.empty()) return out;
  for (std::size_t a = 0; a < ids.size(); ++a) {
    for (std::size_t b = a + 1; b < ids.size(); ++b) {
      const int n = shared(labeling.at(ids[a]), labeling.at(ids[b]));
      const auto e = g.edge(ids[a], ids[b]);
      const int want = !e ? 0 : (*e == EdgeKind::Sibling ? 2 : 1);
      if (n != want)
        out.push_back("pair " + std::to_string(ids[a].value) + "," +
                      std::to_string(ids[b].value) + " shares " + std::to_string(n) +
                      " labels, expected " + std::to_string(want));
    }
  }
  return out;
}

// One new individual per distinct label at `generation + 1`, linked as
// parents of the labeled nodes. Sexes come from 2-colouring the co-parent
// graph; components that are not bipartite stay Unknown.
inline std::map<Label, IndividualId> create_parents(PedigreeGraph& p, const Labeling& labeling,
                                                    int generation) {
  std::map<Label, std::set<Label>> mates;
  for (const auto& [_, pair] : labeling) {
    mates[pair.first].insert(pair.second);
    mates[pair.second].insert(pair.first);
  }
  std::map<Label, Sex> sex;
  for (const auto& [start, _] : mates) {
    if (sex.contains(start)) continue;
    std::vector<Label> component{start};
    sex[start] = Sex::Male;
    bool bipartite = true;
    for (std::size_t k = 0; k < component.size(); ++k) {
      const Label u = component[k];
      const Sex other = sex[u] == Sex::Male ? Sex::Female : Sex::Male;
      for (Label v : mates[u]) {
        auto [it, inserted] = sex.emplace(v, other);
        if (inserted) component.push_back(v);
        else if (it->second != other) bipartite = false;
      }
    }
    if (!bipartite)
      for (Label l : component) sex[l] = Sex::Unknown;
  }
  std::map<Label, IndividualId> created;
  for (const auto& [label, s] : sex) created[label] = p.add(s, generation + 1);
  for (const auto& [child, pair] : labeling) {
    IndividualId x = created.at(pair.first), y = created.at(pair.second);
    if (sex.at(pair.first) == Sex::Female || sex.at(pair.second) == Sex::Male) std::swap(x, y);
    p.set_parents(child, x, y);
  }
  return created;
}

}  // namespace pedrecon
