#pragma once

#include <array>
#include <ostream>
#include <vector>

#include "pedrecon/error.hpp"
#include "pedrecon/haplotype.hpp"
#include "pedrecon/pedigree.hpp"

namespace pedrecon {

inline constexpr BasePair kDefaultMinTract = 1'000'000;

struct IbdTract {
  BasePair start = 0;
  BasePair end = 0;

  BasePair length() const { return end - start; }
  bool operator==(const IbdTract&) const = default;
};

struct IbdSummary {
  std::vector<IbdTract> tracts;
  double total_length = 0;
  double average_length = 0;  // 0 when there are no tracts
};

// Maximal intervals over which both haplotypes carry the same founder
// allele at every position, kept when at least `min_tract_length` long.
// Adjacent identical stretches join even when the shared allele changes.
inline IbdSummary ibd_tracts(const Haplotype& a, const Haplotype& b,
                             BasePair min_tract_length = kDefaultMinTract) {
  if (a.length() != b.length()) throw Error("haplotypes span different genome lengths");
  if (min_tract_length <= 0) throw Error("min_tract_length must be positive");
  IbdSummary out;
  auto sa = a.segments();
  auto sb = b.segments();
  std::size_t ia = 0, ib = 0;
  IbdTract open{};
  bool is_open = false;
  auto close = [&] {
    if (is_open && open.length() >= min_tract_length) out.tracts.push_back(open);
    is_open = false;
  };
  while (ia < sa.size() && ib < sb.size()) {
    const BasePair lo = std::max(sa[ia].start, sb[ib].start);
    const BasePair hi = std::min(sa[ia].end, sb[ib].end);
    if (sa[ia].founder_allele == sb[ib].founder_allele) {
      if (is_open && open.end == lo) {
        open.end = hi;
      } else {
        close();
        open = {lo, hi};
        is_open = true;
      }
    } else {
      close();
    }
    if (sa[ia].end == hi) ++ia;
    if (sb[ib].end == hi) ++ib;
  }
  close();
  for (const IbdTract& t : out.tracts) out.total_length += static_cast<double>(t.length());
  if (!out.tracts.empty())
    out.average_length = out.total_length / static_cast<double>(out.tracts.size());
  return out;
}

enum class Pairing { Straight, Crossed };  // [(i1,j1),(i2,j2)] vs [(i1,j2),(i2,j1)]

struct PairingSummaries {
  // straight = {(i1,j1), (i2,j2)}, crossed = {(i1,j2), (i2,j1)}
  std::array<IbdSummary, 2> straight;
  std::array<IbdSummary, 2> crossed;
  Pairing chosen = Pairing::Straight;

  const std::array<IbdSummary, 2>& get(Pairing p) const {
    return p == Pairing::Straight ? straight : crossed;
  }
  double sum(Pairing p) const {
    return get(p)[0].average_length + get(p)[1].average_length;
  }
};

// Both haplotype pairings; the chosen one maximises the summed average
// tract length, ties going to the straight pairing.
inline PairingSummaries pairing_summaries(const DiploidGenome& i, const DiploidGenome& j,
                                          BasePair min_tract_length = kDefaultMinTract) {
  PairingSummaries out;
  out.straight = {ibd_tracts(i.hap1, j.hap1, min_tract_length),
                  ibd_tracts(i.hap2, j.hap2, min_tract_length)};
  out.crossed = {ibd_tracts(i.hap1, j.hap2, min_tract_length),
                 ibd_tracts(i.hap2, j.hap1, min_tract_length)};
  out.chosen = out.sum(Pairing::Crossed) > out.sum(Pairing::Straight) ? Pairing::Crossed
                                                                      : Pairing::Straight;
  return out;
}

// Debug dump: `id_i  hap_i  id_j  hap_j  start  end`.
inline void write_tracts_tsv(std::ostream& out, IndividualId i, IndividualId j,
                             const PairingSummaries& s) {
  auto emit = [&](int hi, int hj, const IbdSummary& sum) {
    for (const IbdTract& t : sum.tracts)
      out << i.value << '\t' << hi << '\t' << j.value << '\t' << hj << '\t' << t.start
          << '\t' << t.end << '\n';
  };
  emit(1, 1, s.straight[0]);
  emit(2, 2, s.straight[1]);
  emit(1, 2, s.crossed[0]);
  emit(2, 1, s.crossed[1]);
}

}  // namespace pedrecon
