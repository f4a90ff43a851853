#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pedrecon/error.hpp"
#include "pedrecon/io.hpp"
#include "pedrecon/ipp.hpp"
#include "pedrecon/pedigree.hpp"
#include "pedrecon/relgraph.hpp"
#include "pedrecon/stats.hpp"

namespace pedrecon {

struct ReconstructConfig {
  int max_height = 5;
  ScoringOptions scoring;
  bool keep_scores = false;  // record every pair's ScoreReport in the trace

  void validate() const {
    if (max_height < 2) throw Error("max_height must be at least 2");
    if (!(scoring.recomb_rate > 0)) throw Error("recomb_rate must be positive");
    if (scoring.min_tract_length <= 0) throw Error("min_tract_length must be positive");
  }
};

// What a classifier sees while one generation is being processed.
struct GenerationContext {
  const PedigreeGraph& pedigree;            // reconstruction so far
  const std::map<IndividualId, IppTable>& ipp;  // tables of this generation
  int generation;
};

using PairClassifier =
    std::function<ScoreReport(const GenerationContext&, IndividualId, IndividualId)>;

inline RelationshipGraph build_graph(
    const std::vector<IndividualId>& nodes,
    const std::vector<std::pair<std::pair<IndividualId, IndividualId>, RelationshipKind>>& calls) {
  RelationshipGraph g(nodes);
  for (const auto& [pair, kind] : calls) {
    if (kind == RelationshipKind::Sibling) g.add_edge(pair.first, pair.second, EdgeKind::Sibling);
    else if (kind == RelationshipKind::HalfSibling)
      g.add_edge(pair.first, pair.second, EdgeKind::HalfSibling);
  }
  return g;
}

// Individuals sharing a child are mates, not candidate siblings.
inline bool are_mates(const PedigreeGraph& p, IndividualId a, IndividualId b) {
  const auto& ca = p.children(a);
  for (IndividualId c : p.children(b))
    if (std::find(ca.begin(), ca.end(), c) != ca.end()) return true;
  return false;
}

// IBD-length tests: extant scoring at generation 1, descendant-averaged
// ancestral scoring above it. Mates are never tested.
class StatisticalClassifier {
 public:
  StatisticalClassifier(const GenomeMap& extant, ScoringOptions opt)
      : cache_(std::make_shared<EstimateCache>(extant, opt.min_tract_length)), opt_(opt) {}

  ScoreReport operator()(const GenerationContext& ctx, IndividualId a, IndividualId b) const {
    if (ctx.generation == 1) return classify_extant_estimates(cache_->get(a, b), opt_);
    if (are_mates(ctx.pedigree, a, b)) return unrelated_report();
    return classify_ancestral_pair(ctx.ipp.at(a), ctx.ipp.at(b), *cache_, opt_);
  }

  const EstimateCache& cache() const { return *cache_; }

 private:
  std::shared_ptr<const EstimateCache> cache_;
  ScoringOptions opt_;
};

// Answers with the true relationship in a known pedigree. Reconstructed
// ancestors are matched to true ones through their children.
class TruthClassifier {
 public:
  explicit TruthClassifier(const PedigreeGraph& original) : original_(&original) {}

  ScoreReport operator()(const GenerationContext& ctx, IndividualId a, IndividualId b) {
    ScoreReport r = unrelated_report();
    const Individual& x = original_->at(map_id(ctx.pedigree, a));
    const Individual& y = original_->at(map_id(ctx.pedigree, b));
    if (x.is_founder() || y.is_founder()) return r;
    int shared = 0;
    for (IndividualId px : {*x.father, *x.mother})
      if (px == *y.father || px == *y.mother) ++shared;
    if (shared == 2) r.chosen = RelationshipKind::Sibling;
    else if (shared == 1) r.chosen = RelationshipKind::HalfSibling;
    if (r.chosen != RelationshipKind::Unrelated) r.scores[static_cast<std::size_t>(r.chosen)] = 0;
    return r;
  }

 private:
  IndividualId map_id(const PedigreeGraph& r, IndividualId id) {
    if (auto it = mapping_.find(id); it != mapping_.end()) return it->second;
    if (r.at(id).generation == 1) {
      original_->at(id);
      return mapping_[id] = id;
    }
    std::set<IndividualId> candidates;
    bool first = true;
    for (IndividualId kid : r.children(id)) {
      auto ps = original_->parents(map_id(r, kid));
      std::set<IndividualId> mine(ps.begin(), ps.end());
      if (first) {
        candidates = mine;
        first = false;
      } else {
        std::set<IndividualId> keep;
        for (IndividualId c : candidates)
          if (mine.contains(c)) keep.insert(c);
        candidates = std::move(keep);
      }
    }
    if (candidates.empty())
      throw Error("reconstructed individual " + std::to_string(id.value) +
                  " matches no true ancestor");
    if (candidates.size() == 2) {
      // Both parents of a single sibship: take the one the co-parent did not.
      const Individual& kid = r.at(r.children(id).front());
      IndividualId mate = *kid.father == id ? *kid.mother : *kid.father;
      if (auto it = mapping_.find(mate); it != mapping_.end()) candidates.erase(it->second);
    }
    return mapping_[id] = *candidates.begin();
  }

  const PedigreeGraph* original_;
  std::map<IndividualId, IndividualId> mapping_;
};

struct PairScore {
  IndividualId a;
  IndividualId b;
  ScoreReport report;
};

struct GenerationTrace {
  int generation = 1;
  std::vector<IndividualId> nodes;
  RelationshipGraph before;
  RelationshipGraph after;
  std::vector<Deletion> deletions;
  std::map<IndividualId, std::pair<IndividualId, IndividualId>> parents;
  std::vector<PairScore> scores;  // only with keep_scores
};

struct ReconstructResult {
  PedigreeGraph pedigree;
  std::vector<GenerationTrace> trace;
};

// Generation-by-generation reconstruction with a pluggable pair
// classifier. Parents of generation g are created from the labeling of
// its relationship graph, and their IPP tables are merged from their
// children's.
inline ReconstructResult reconstruct_with(const std::vector<IndividualId>& extant,
                                          const ReconstructConfig& cfg,
                                          const PairClassifier& classify) {
  cfg.validate();
  if (extant.size() < 2) throw Error("reconstruction needs at least two extant individuals");
  ReconstructResult out;
  PedigreeGraph& p = out.pedigree;
  for (IndividualId id : extant) p.insert({id, Sex::Unknown, 1, std::nullopt, std::nullopt});

  std::map<IndividualId, IppTable> ipp;
  for (IndividualId id : extant) ipp.emplace(id, self_table(id));

  for (int g = 1; g < cfg.max_height; ++g) {
    GenerationTrace t;
    t.generation = g;
    t.nodes = p.generation(g);
    GenerationContext ctx{p, ipp, g};
    std::vector<std::pair<std::pair<IndividualId, IndividualId>, RelationshipKind>> calls;
    for (std::size_t a = 0; a < t.nodes.size(); ++a) {
      for (std::size_t b = a + 1; b < t.nodes.size(); ++b) {
        ScoreReport rep = classify(ctx, t.nodes[a], t.nodes[b]);
        calls.push_back({{t.nodes[a], t.nodes[b]}, rep.chosen});
        if (cfg.keep_scores) t.scores.push_back({t.nodes[a], t.nodes[b], rep});
      }
    }
    t.before = build_graph(t.nodes, calls);
    ResolutionResult res = resolve_and_label(t.before);
    t.after = res.resolved;
    t.deletions = std::move(res.deletions);
    auto created = create_parents(p, res.labeling, g);
    for (IndividualId id : t.nodes) {
      const Individual& ind = p.at(id);
      t.parents[id] = {*ind.father, *ind.mother};
    }

    std::map<IndividualId, IppTable> next;
    if (g == 1) {
      std::map<IndividualId, std::set<IndividualId>> children_of;
      for (const auto& [_, parent] : created) {
        const auto& kids = p.children(parent);
        children_of[parent] = std::set<IndividualId>(kids.begin(), kids.end());
      }
      next = init_generation2(children_of);
    } else {
      for (const auto& [_, parent] : created) {
        std::vector<const IppTable*> kids;
        for (IndividualId c : p.children(parent)) kids.push_back(&ipp.at(c));
        next.emplace(parent, merge_increment(parent, std::span<const IppTable* const>(kids)));
      }
    }
    ipp = std::move(next);
    out.trace.push_back(std::move(t));
  }
  return out;
}

inline ReconstructResult reconstruct(const GenomeMap& extant, const ReconstructConfig& cfg) {
  cfg.validate();
  if (extant.size() < 2) throw Error("reconstruction needs at least two extant individuals");
  StatisticalClassifier classifier(extant, cfg.scoring);
  std::vector<IndividualId> ids;
  for (const auto& [id, _] : extant) ids.push_back(id);
  return reconstruct_with(ids, cfg, std::cref(classifier));
}

inline nlohmann::json trace_to_json(const ReconstructConfig& cfg,
                                    const std::vector<GenerationTrace>& trace) {
  using nlohmann::json;
  auto edges = [](const RelationshipGraph& g) {
    json arr = json::array();
    for (const RelEdge& e : g.edges())
      arr.push_back({{"a", e.a.value}, {"b", e.b.value}, {"kind", to_string(e.kind)}});
    return arr;
  };
  json out;
  out["max_height"] = cfg.max_height;
  out["pairing_rule"] = cfg.scoring.pairing_rule == PairingRule::Text ? "text" : "eq4";
  out["sibling_only"] = cfg.scoring.sibling_only;
  out["recomb_rate"] = cfg.scoring.recomb_rate;
  out["min_tract_bp"] = cfg.scoring.min_tract_length;
  json gens = json::array();
  for (const GenerationTrace& t : trace) {
    json g;
    g["generation"] = t.generation;
    json nodes = json::array();
    for (IndividualId id : t.nodes) nodes.push_back(id.value);
    g["nodes"] = nodes;
    g["edges_before"] = edges(t.before);
    g["edges_after"] = edges(t.after);
    json dels = json::array();
    for (const Deletion& d : t.deletions)
      dels.push_back({{"a", d.edge.a.value},
                      {"b", d.edge.b.value},
                      {"kind", to_string(d.edge.kind)},
                      {"reason", to_string(d.reason)}});
    g["deletions"] = dels;
    json parents = json::object();
    for (const auto& [child, pp] : t.parents)
      parents[std::to_string(child.value)] = {pp.first.value, pp.second.value};
    g["parents"] = parents;
    out["generations"].push_back(g);
  }
  if (!out.contains("generations")) out["generations"] = json::array();
  return out;
}

}  // namespace pedrecon
