#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "pedrecon/ipp.hpp"
#include "pedrecon/pedigree.hpp"
#include "pedrecon/relgraph.hpp"
#include "pedrecon/simulator.hpp"

namespace pedrecon::testing {

inline IndividualId id(std::uint32_t v) { return IndividualId{v}; }

// The small inbred pedigree used throughout the examples: 13 and 14 are
// full siblings, 15 is their half-sibling through 10, and 1 reaches 13
// along 1-4-9-13 and 1-6-10-13.
inline PedigreeGraph inbred_family() {
  PedigreeGraph p;
  auto add = [&](std::uint32_t v, Sex s, int g, std::uint32_t f = 0, std::uint32_t m = 0) {
    Individual ind{id(v), s, g, std::nullopt, std::nullopt};
    if (f) {
      ind.father = id(f);
      ind.mother = id(m);
    }
    p.insert(ind);
  };
  add(1, Sex::Male, 4);
  add(2, Sex::Female, 4);
  add(3, Sex::Male, 3);
  add(4, Sex::Female, 3, 1, 2);
  add(5, Sex::Male, 3);
  add(6, Sex::Male, 3, 1, 2);
  add(7, Sex::Female, 3);
  add(8, Sex::Female, 3);
  add(9, Sex::Male, 2, 3, 4);
  add(10, Sex::Female, 2, 6, 7);
  add(11, Sex::Male, 2, 5, 8);
  add(12, Sex::Female, 2, 5, 8);
  add(13, Sex::Male, 1, 9, 10);
  add(14, Sex::Female, 1, 9, 10);
  add(15, Sex::Male, 1, 11, 10);
  return p;
}

// Length histogram of the brute-force path enumeration, in IppList form.
inline IppList path_histogram(const PedigreeGraph& p, IndividualId ancestor, IndividualId extant) {
  std::map<std::uint32_t, std::uint64_t> h;
  for (const InheritancePath& path : enumerate_inheritance_paths(p, ancestor, extant))
    ++h[static_cast<std::uint32_t>(path.length())];
  IppList out;
  for (auto [len, n] : h) out.push_back({len, n});
  return out;
}

// All maximal cliques (size >= 2) by subset enumeration; n <= ~16.
inline std::vector<std::vector<std::size_t>> brute_force_maximal_cliques(const SimpleGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::uint32_t> cliques;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    bool ok = true;
    for (std::size_t u = 0; u < n && ok; ++u)
      for (std::size_t v = u + 1; v < n && ok; ++v)
        if ((mask >> u & 1) && (mask >> v & 1) && !g.adjacent(u, v)) ok = false;
    if (ok) cliques.push_back(mask);
  }
  std::set<std::uint32_t> all(cliques.begin(), cliques.end());
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask : cliques) {
    if (__builtin_popcount(mask) < 2) continue;
    bool maximal = true;
    for (std::size_t v = 0; v < n && maximal; ++v)
      if (!(mask >> v & 1) && all.contains(mask | (1u << v))) maximal = false;
    if (!maximal) continue;
    std::vector<std::size_t> c;
    for (std::size_t v = 0; v < n; ++v)
      if (mask >> v & 1) c.push_back(v);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline SimpleGraph random_simple_graph(std::mt19937_64& rng, std::size_t n, double density) {
  SimpleGraph g(n);
  std::bernoulli_distribution edge(density);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (edge(rng)) g.connect(u, v);
  return g;
}

// Each pair independently gets a sibling edge, a half-sibling edge or
// nothing.
inline RelationshipGraph random_relationship_graph(std::mt19937_64& rng, std::size_t n,
                                                   double p_sib, double p_half) {
  std::vector<IndividualId> nodes;
  for (std::size_t k = 1; k <= n; ++k) nodes.push_back(id(static_cast<std::uint32_t>(k)));
  RelationshipGraph g(nodes);
  std::uniform_real_distribution<double> u(0, 1);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const double x = u(rng);
      if (x < p_sib) g.add_edge(nodes[a], nodes[b], EdgeKind::Sibling);
      else if (x < p_sib + p_half) g.add_edge(nodes[a], nodes[b], EdgeKind::HalfSibling);
    }
  return g;
}

// Random graph with exactly `m` edges (fewer if the graph is too small).
inline RelationshipGraph random_sparse_relationship_graph(std::mt19937_64& rng, std::size_t n,
                                                          std::size_t m) {
  std::vector<IndividualId> nodes;
  for (std::size_t k = 1; k <= n; ++k) nodes.push_back(id(static_cast<std::uint32_t>(k)));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) pairs.push_back({a, b});
  std::shuffle(pairs.begin(), pairs.end(), rng);
  RelationshipGraph g(nodes);
  std::bernoulli_distribution sib(0.5);
  for (std::size_t k = 0; k < std::min(m, pairs.size()); ++k)
    g.add_edge(nodes[pairs[k].first], nodes[pairs[k].second],
               sib(rng) ? EdgeKind::Sibling : EdgeKind::HalfSibling);
  return g;
}

// Whether some labeling satisfies all four constraints, by backtracking
// over canonical label assignments. Nodes without edges are skipped: two
// fresh labels always work for them.
inline bool labeling_exists(const RelationshipGraph& g) {
  std::vector<IndividualId> nodes;
  for (IndividualId v : g.nodes()) {
    bool touched = false;
    for (IndividualId w : g.nodes())
      if (w != v && g.edge(v, w)) touched = true;
    if (touched) nodes.push_back(v);
  }
  std::vector<std::pair<int, int>> assigned;
  auto want = [&](std::size_t a, std::size_t b) {
    auto e = g.edge(nodes[a], nodes[b]);
    return !e ? 0 : (*e == EdgeKind::Sibling ? 2 : 1);
  };
  // Labels 0..next-1 are in use; `next` (and next+1) are fresh.
  auto search = [&](auto&& self, std::size_t k, int next) -> bool {
    if (k == nodes.size()) return true;
    for (int x = 0; x <= next; ++x) {
      const int y_max = x == next ? next + 1 : next;
      for (int y = x + 1; y <= y_max; ++y) {
        bool ok = true;
        for (std::size_t j = 0; j < k && ok; ++j) {
          auto [p, q] = assigned[j];
          const int shared = (x == p || x == q) + (y == p || y == q);
          ok = shared == want(j, k);
        }
        if (!ok) continue;
        assigned.push_back({x, y});
        const int used = std::max(next, y + 1);
        if (self(self, k + 1, used)) return true;
        assigned.pop_back();
      }
    }
    return false;
  };
  return search(search, 0, 0);
}

// Fewest edge deletions that make the graph labelable, by trying every
// deletion set in order of size. Exponential in the edge count.
inline std::size_t minimum_deletions(const RelationshipGraph& g) {
  const std::vector<RelEdge> edges = g.edges();
  const std::size_t m = edges.size();
  for (std::size_t k = 0; k <= m; ++k) {
    std::vector<bool> pick(m, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      RelationshipGraph h = g;
      for (std::size_t e = 0; e < m; ++e)
        if (pick[e]) h.remove_edge(edges[e].a, edges[e].b);
      if (labeling_exists(h)) return k;
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return m;
}

}  // namespace pedrecon::testing
