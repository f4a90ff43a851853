#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <ostream>
#include <string_view>
#include <vector>

#include "pedrecon/error.hpp"
#include "pedrecon/ibd.hpp"
#include "pedrecon/io.hpp"
#include "pedrecon/ipp.hpp"
#include "pedrecon/pedigree.hpp"

namespace pedrecon {

inline constexpr double kDefaultRecombRate = 1e-8;

enum class RelationshipKind { Sibling, HalfSibling, FirstCousin, FirstHalfCousin, Unrelated };

inline constexpr std::array<RelationshipKind, 4> kTestedKinds = {
    RelationshipKind::Sibling, RelationshipKind::HalfSibling, RelationshipKind::FirstCousin,
    RelationshipKind::FirstHalfCousin};

inline std::string_view to_string(RelationshipKind k) {
  switch (k) {
    case RelationshipKind::Sibling:
      return "sibling";
    case RelationshipKind::HalfSibling:
      return "half_sibling";
    case RelationshipKind::FirstCousin:
      return "first_cousin";
    case RelationshipKind::FirstHalfCousin:
      return "first_half_cousin";
    default:
      return "unrelated";
  }
}

// Meioses added on top of the inheritance paths, per haplotype pair. The
// smaller offset goes to the haplotype pair with the longer IBD estimate.
struct TestOffsets {
  unsigned t1;
  unsigned t2;
};

constexpr TestOffsets offsets(RelationshipKind k) {
  switch (k) {
    case RelationshipKind::Sibling:
      return {2, 2};
    case RelationshipKind::HalfSibling:
      return {2, 4};
    case RelationshipKind::FirstCousin:
      return {4, 4};
    case RelationshipKind::FirstHalfCousin:
      return {4, 6};
    default:
      throw Error("unrelated pairs have no test offsets");
  }
}

// IBD tract length is exponential with rate M*r.
struct MomentParams {
  double meioses = 2;
  double recomb_rate = kDefaultRecombRate;

  double expected() const { return 1.0 / (meioses * recomb_rate); }
  double variance() const { return expected() * expected(); }
};

// (estimate - E)^2 / var, which simplifies to (estimate*M*r - 1)^2.
inline double component_score(double estimate_bp, const MomentParams& m) {
  if (!(m.meioses > 0) || !(m.recomb_rate > 0))
    throw Error("meioses and recombination rate must be positive");
  if (estimate_bp < 0) throw Error("IBD estimate must be non-negative");
  const double z = estimate_bp * (m.meioses * m.recomb_rate) - 1.0;
  return z * z;
}

enum class PairingRule {
  Text,  // use the pairing with the larger summed IBD, then score it
  ScoreSum,   // score both pairings and take the larger score sum
};

struct ScoringOptions {
  double recomb_rate = kDefaultRecombRate;
  BasePair min_tract_length = kDefaultMinTract;
  PairingRule pairing_rule = PairingRule::Text;
  bool sibling_only = false;  // test only Sibling vs FirstCousin
};

// Average tract lengths of one extant pair under both haplotype pairings.
struct PairEstimates {
  std::array<double, 2> straight{0, 0};
  std::array<double, 2> crossed{0, 0};
  Pairing chosen = Pairing::Straight;
  bool any_tract = false;

  static PairEstimates from(const PairingSummaries& s) {
    PairEstimates e;
    e.straight = {s.straight[0].average_length, s.straight[1].average_length};
    e.crossed = {s.crossed[0].average_length, s.crossed[1].average_length};
    e.chosen = s.chosen;
    for (const auto* arr : {&s.straight, &s.crossed})
      for (const IbdSummary& sum : *arr)
        if (!sum.tracts.empty()) e.any_tract = true;
    return e;
  }

  const std::array<double, 2>& get(Pairing p) const {
    return p == Pairing::Straight ? straight : crossed;
  }
};

struct ScoreReport {
  // Indexed like kTestedKinds; +inf for kinds not tested.
  std::array<double, 4> scores{};
  RelationshipKind chosen = RelationshipKind::Unrelated;
  Pairing chosen_pairing = Pairing::Straight;

  double score(RelationshipKind k) const { return scores.at(static_cast<std::size_t>(k)); }
};

namespace detail {

// Score of one haplotype pairing: smaller meiosis count on the longer
// estimate.
inline double pairing_score(const std::array<double, 2>& est, double m1, double m2, double r) {
  const double big = std::max(est[0], est[1]);
  const double small = std::min(est[0], est[1]);
  return component_score(big, {m1, r}) + component_score(small, {m2, r});
}

// Returns the per-pair score and the pairing it used.
inline std::pair<double, Pairing> pair_score(const PairEstimates& e, double m1, double m2,
                                             const ScoringOptions& opt) {
  if (opt.pairing_rule == PairingRule::Text)
    return {pairing_score(e.get(e.chosen), m1, m2, opt.recomb_rate) / 2, e.chosen};
  const double s = pairing_score(e.straight, m1, m2, opt.recomb_rate);
  const double c = pairing_score(e.crossed, m1, m2, opt.recomb_rate);
  return c > s ? std::pair{c / 2, Pairing::Crossed} : std::pair{s / 2, Pairing::Straight};
}

inline bool tested(RelationshipKind k, const ScoringOptions& opt) {
  return !opt.sibling_only || k == RelationshipKind::Sibling ||
         k == RelationshipKind::FirstCousin;
}

// Minimal score wins. Exact ties go to the hypothesis with more meioses on
// the second haplotype pair: a zero estimate scores 1 under every
// hypothesis, and it is more plausible the more distant that pair is.
inline RelationshipKind pick_minimum(const std::array<double, 4>& scores) {
  constexpr std::array<RelationshipKind, 4> preference = {
      RelationshipKind::HalfSibling, RelationshipKind::Sibling,
      RelationshipKind::FirstHalfCousin, RelationshipKind::FirstCousin};
  RelationshipKind best = RelationshipKind::Unrelated;
  double best_score = std::numeric_limits<double>::infinity();
  for (RelationshipKind k : preference) {
    const double s = scores[static_cast<std::size_t>(k)];
    if (s < best_score) {
      best_score = s;
      best = k;
    }
  }
  return best;
}

}  // namespace detail

inline ScoreReport unrelated_report() {
  ScoreReport r;
  r.scores.fill(std::numeric_limits<double>::infinity());
  return r;
}

// Extant pair classification: the meiosis count on each haplotype pair is
// the offset itself.
inline ScoreReport classify_extant_estimates(const PairEstimates& e, const ScoringOptions& opt) {
  if (!e.any_tract) return unrelated_report();
  ScoreReport r = unrelated_report();
  std::array<Pairing, 4> used{};
  for (RelationshipKind k : kTestedKinds) {
    if (!detail::tested(k, opt)) continue;
    auto [t1, t2] = offsets(k);
    auto [score, pairing] = detail::pair_score(e, t1, t2, opt);
    r.scores[static_cast<std::size_t>(k)] = score;
    used[static_cast<std::size_t>(k)] = pairing;
  }
  r.chosen = detail::pick_minimum(r.scores);
  r.chosen_pairing = used[static_cast<std::size_t>(r.chosen)];
  return r;
}

inline ScoreReport classify_extant_pair(const DiploidGenome& i, const DiploidGenome& j,
                                        const ScoringOptions& opt = {}) {
  return classify_extant_estimates(
      PairEstimates::from(pairing_summaries(i, j, opt.min_tract_length)), opt);
}

// Pairwise IBD estimates between extant individuals, computed once.
class EstimateCache {
 public:
  EstimateCache() = default;

  EstimateCache(const GenomeMap& genomes, BasePair min_tract_length) {
    for (const auto& [id, _] : genomes) {
      index_.emplace(id, ids_.size());
      ids_.push_back(id);
    }
    const std::size_t n = ids_.size();
    table_.resize(n * n);
    std::size_t a = 0;
    for (auto it = genomes.begin(); it != genomes.end(); ++it, ++a) {
      std::size_t b = a + 1;
      for (auto jt = std::next(it); jt != genomes.end(); ++jt, ++b) {
        PairEstimates e =
            PairEstimates::from(pairing_summaries(it->second, jt->second, min_tract_length));
        table_[a * n + b] = e;
        table_[b * n + a] = e;
      }
    }
  }

  std::size_t index(IndividualId id) const {
    auto it = index_.find(id);
    if (it == index_.end())
      throw Error("no genome for individual " + std::to_string(id.value));
    return it->second;
  }

  const PairEstimates& get(std::size_t a, std::size_t b) const {
    return table_[a * ids_.size() + b];
  }
  const PairEstimates& get(IndividualId i, IndividualId j) const {
    return get(index(i), index(j));
  }

  const std::vector<IndividualId>& ids() const { return ids_; }

 private:
  std::vector<IndividualId> ids_;
  std::map<IndividualId, std::size_t> index_;
  std::vector<PairEstimates> table_;
};

// Ancestral pair classification: each descendant pair (i, j), i != j, is
// scored with M = compute_dis(t, k[i], l[j]) and the kind score is
// the mean over those pairs.
inline ScoreReport classify_ancestral_pair(const IppTable& k, const IppTable& l,
                                           const EstimateCache& cache,
                                           const ScoringOptions& opt = {}) {
  if (k.paths.empty() || l.paths.empty())
    throw Error("ancestral classification needs non-empty descendant sets");

  struct Term {
    const PairEstimates* estimates;
    double base;  // mean concatenated path length before the offset
  };
  std::vector<Term> terms;
  terms.reserve(k.paths.size() * l.paths.size());
  bool any_tract = false;
  for (const auto& [i, list_i] : k.paths) {
    const std::size_t ii = cache.index(i);
    for (const auto& [j, list_j] : l.paths) {
      if (i == j) continue;
      const PairEstimates& e = cache.get(ii, cache.index(j));
      any_tract = any_tract || e.any_tract;
      terms.push_back({&e, compute_dis(0, list_i, list_j)});
    }
  }
  if (!any_tract) return unrelated_report();

  ScoreReport r = unrelated_report();
  for (RelationshipKind kind : kTestedKinds) {
    if (!detail::tested(kind, opt)) continue;
    auto [t1, t2] = offsets(kind);
    double sum = 0;
    for (const Term& term : terms)
      sum += detail::pair_score(*term.estimates, term.base + t1, term.base + t2, opt).first;
    r.scores[static_cast<std::size_t>(kind)] = sum / static_cast<double>(terms.size());
  }
  r.chosen = detail::pick_minimum(r.scores);
  return r;
}

// Debug dump: `id_i  id_j  v_sib  v_half  v_cousin  v_halfcousin  chosen`.
inline void write_score_row(std::ostream& out, IndividualId i, IndividualId j,
                            const ScoreReport& r) {
  out << i.value << '\t' << j.value;
  for (double s : r.scores) out << '\t' << s;
  out << '\t' << to_string(r.chosen) << '\n';
}

}  // namespace pedrecon
