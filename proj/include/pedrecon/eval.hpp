#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include <json.hpp>

#include "pedrecon/error.hpp"
#include "pedrecon/io.hpp"
#include "pedrecon/pedigree.hpp"
#include "pedrecon/simulator.hpp"

namespace pedrecon {

struct AccuracyReport {
  double accuracy = 0;
  std::size_t pair_count = 0;  // |E|^2, ordered pairs including i = j
  std::size_t matches = 0;
};

// Fraction of ordered extant pairs (i, j), diagonal included, whose
// shortest distance agrees between the two pedigrees. Disconnected pairs
// agree when disconnected in both.
inline AccuracyReport accuracy(const PedigreeGraph& reconstructed, const PedigreeGraph& original) {
  const auto extant = original.extant();
  if (reconstructed.extant() != extant)
    throw Error("reconstructed and original pedigrees have different extant sets");
  AccuracyReport r;
  r.pair_count = extant.size() * extant.size();
  for (IndividualId i : extant) {
    auto dr = distances_from(reconstructed, i);
    auto dorig = distances_from(original, i);
    for (IndividualId j : extant) {
      auto a = dr.find(j);
      auto b = dorig.find(j);
      const Distance x = a == dr.end() ? kInfinity : a->second;
      const Distance y = b == dorig.end() ? kInfinity : b->second;
      r.matches += x == y;
    }
  }
  r.accuracy = r.pair_count == 0 ? 1.0
                                 : static_cast<double>(r.matches) /
                                       static_cast<double>(r.pair_count);
  return r;
}

struct HalfSiblingRecovery {
  std::size_t reconstructed = 0;
  std::size_t real = 0;
};

// Half-sibling pairs (exactly one shared parent) anywhere in the
// reconstruction, against the true pair list.
inline HalfSiblingRecovery half_sibling_recovery(const PedigreeGraph& reconstructed,
                                                 const std::vector<RelativePair>& truth) {
  return {truth_pairs(reconstructed).half_siblings.size(), truth.size()};
}

inline nlohmann::json report_json(const AccuracyReport& acc, const HalfSiblingRecovery& hs) {
  return {{"accuracy", acc.accuracy},
          {"pair_count", acc.pair_count},
          {"half_sib_reconstructed", hs.reconstructed},
          {"half_sib_real", hs.real}};
}

}  // namespace pedrecon
