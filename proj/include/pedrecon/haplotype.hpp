#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pedrecon/error.hpp"

namespace pedrecon {

using BasePair = std::int64_t;
using AlleleId = std::uint64_t;

// Half-open interval [start, end) inherited from one founder allele.
struct Segment {
  BasePair start = 0;
  BasePair end = 0;
  AlleleId founder_allele = 0;

  bool operator==(const Segment&) const = default;
};

// Founder-allele mosaic tiling [0, genome_length). Canonical form merges
// equal neighbours, so adjacent segments always carry distinct alleles.
class Haplotype {
 public:
  Haplotype() = default;

  static Haplotype founder(BasePair genome_length, AlleleId allele) {
    if (genome_length <= 0) throw Error("genome length must be positive");
    Haplotype h;
    h.segments_.push_back({0, genome_length, allele});
    return h;
  }

  // Validates tiling and canonicalises.
  static Haplotype from_segments(std::vector<Segment> segments) {
    if (segments.empty()) throw Error("haplotype has no segments");
    std::sort(segments.begin(), segments.end(),
              [](const Segment& a, const Segment& b) { return a.start < b.start; });
    if (segments.front().start != 0)
      throw Error("haplotype does not start at base pair 0");
    for (std::size_t k = 0; k < segments.size(); ++k) {
      if (segments[k].end <= segments[k].start)
        throw Error("empty or inverted haplotype segment");
      if (k > 0 && segments[k].start != segments[k - 1].end)
        throw Error("haplotype segments overlap or leave a gap");
    }
    Haplotype h;
    for (const Segment& s : segments) h.append(s);
    return h;
  }

  std::span<const Segment> segments() const { return segments_; }
  BasePair length() const { return segments_.empty() ? 0 : segments_.back().end; }

  AlleleId allele_at(BasePair pos) const {
    if (pos < 0 || pos >= length()) throw Error("position outside the genome");
    auto it = std::upper_bound(
        segments_.begin(), segments_.end(), pos,
        [](BasePair x, const Segment& s) { return x < s.start; });
    return std::prev(it)->founder_allele;
  }

  bool operator==(const Haplotype&) const = default;

 private:
  void append(const Segment& s) {
    if (!segments_.empty() && segments_.back().founder_allele == s.founder_allele &&
        segments_.back().end == s.start) {
      segments_.back().end = s.end;
    } else {
      segments_.push_back(s);
    }
  }

  friend Haplotype recombine(const Haplotype&, const Haplotype&, int,
                             std::span<const BasePair>);

  std::vector<Segment> segments_;
};

struct DiploidGenome {
  Haplotype hap1;
  Haplotype hap2;

  const Haplotype& operator[](int index) const { return index == 0 ? hap1 : hap2; }
  bool operator==(const DiploidGenome&) const = default;
};

// Copies `first` (0 = a, 1 = b) up to the first breakpoint, then switches
// source at every breakpoint. Breakpoints must be strictly increasing and
// inside (0, length).
inline Haplotype recombine(const Haplotype& a, const Haplotype& b, int first,
                           std::span<const BasePair> breakpoints) {
  const BasePair len = a.length();
  if (b.length() != len) throw Error("parental haplotypes differ in length");
  Haplotype out;
  BasePair from = 0;
  int source = first;
  auto copy_range = [&](const Haplotype& src, BasePair lo, BasePair hi) {
    auto segs = src.segments();
    auto it = std::upper_bound(
        segs.begin(), segs.end(), lo,
        [](BasePair x, const Segment& s) { return x < s.start; });
    for (--it; it != segs.end() && it->start < hi; ++it)
      out.append({std::max(it->start, lo), std::min(it->end, hi), it->founder_allele});
  };
  for (BasePair x : breakpoints) {
    if (x <= from || x >= len) throw Error("breakpoints must increase within the genome");
    copy_range(source == 0 ? a : b, from, x);
    from = x;
    source ^= 1;
  }
  copy_range(source == 0 ? a : b, from, len);
  return out;
}

}  // namespace pedrecon
