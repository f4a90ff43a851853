#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <vector>

#include "pedrecon/error.hpp"
#include "pedrecon/pedigree.hpp"

namespace pedrecon {

// All inheritance paths of one length between an ancestor and one extant
// descendant.
struct IppEntry {
  std::uint32_t length = 0;
  std::uint64_t count = 0;

  bool operator==(const IppEntry&) const = default;
};

// Sorted by length; lengths are unique.
using IppList = std::vector<IppEntry>;

// Counts saturate at the maximum uint64 value. Only ratios of counts are
// ever used, so saturation bounds precision instead of wrapping around.
inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  return a > max - b ? max : a + b;
}

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  if (a != 0 && b > max / a) return max;
  return a * b;
}

struct IppTable {
  IndividualId owner;
  std::map<IndividualId, IppList> paths;  // extant descendant -> histogram

  std::set<IndividualId> descendants() const {
    std::set<IndividualId> out;
    for (const auto& [d, _] : paths) out.insert(d);
    return out;
  }

  const IppList& at(IndividualId descendant) const {
    auto it = paths.find(descendant);
    if (it == paths.end())
      throw Error("no inheritance path from " + std::to_string(owner.value) + " to " +
                  std::to_string(descendant.value));
    return it->second;
  }

  bool operator==(const IppTable&) const = default;
};

// An extant individual reaches itself by one path of length zero.
inline IppTable self_table(IndividualId extant) {
  return IppTable{extant, {{extant, IppList{{0, 1}}}}};
}

inline void add_entry(IppList& list, IppEntry e) {
  auto it = std::lower_bound(list.begin(), list.end(), e.length,
                             [](const IppEntry& x, std::uint32_t len) { return x.length < len; });
  if (it != list.end() && it->length == e.length) {
    it->count = saturating_add(it->count, e.count);
  } else {
    list.insert(it, e);
  }
}

// Tables for generation-2 founders: every extant child gets one path of
// length 1.
inline std::map<IndividualId, IppTable> init_generation2(
    const std::map<IndividualId, std::set<IndividualId>>& children_of) {
  std::map<IndividualId, IppTable> out;
  for (const auto& [founder, kids] : children_of) {
    IppTable t{founder, {}};
    for (IndividualId kid : kids) t.paths[kid] = IppList{{1, 1}};
    out.emplace(founder, std::move(t));
  }
  return out;
}

// Parent table from its children's tables: lengths grow by one and equal
// lengths to the same descendant are summed.
inline IppTable merge_increment(IndividualId owner,
                                std::span<const IppTable* const> child_tables) {
  IppTable out{owner, {}};
  for (const IppTable* child : child_tables) {
    for (const auto& [descendant, list] : child->paths) {
      IppList& merged = out.paths[descendant];
      for (const IppEntry& e : list) add_entry(merged, {e.length + 1, e.count});
    }
  }
  return out;
}

inline IppTable merge_increment(IndividualId owner, const std::vector<IppTable>& child_tables) {
  std::vector<const IppTable*> ptrs;
  for (const IppTable& t : child_tables) ptrs.push_back(&t);
  return merge_increment(owner, std::span<const IppTable* const>(ptrs));
}

// Count-weighted mean of (l_a + l_b + t) over the cross product of the two
// histograms.
inline double compute_dis(unsigned t, const IppList& ipp_i, const IppList& ipp_j) {
  if (ipp_i.empty() || ipp_j.empty()) throw Error("compute_dis on an empty path list");
  double length = 0;
  double num = 0;
  for (const IppEntry& a : ipp_i) {
    for (const IppEntry& b : ipp_j) {
      const double n = static_cast<double>(a.count) * static_cast<double>(b.count);
      num += n;
      length += static_cast<double>(a.length + b.length + t) * n;
    }
  }
  return length / num;
}

// Builds every individual's table bottom-up over a complete pedigree.
// Extant individuals hold their self table.
inline std::map<IndividualId, IppTable> ipp_tables(const PedigreeGraph& p) {
  std::map<IndividualId, IppTable> out;
  for (IndividualId id : p.extant()) out.emplace(id, self_table(id));
  for (int g = 2; g <= p.height(); ++g) {
    for (IndividualId id : p.generation(g)) {
      std::vector<const IppTable*> kids;
      for (IndividualId c : p.children(id)) kids.push_back(&out.at(c));
      out.emplace(id, merge_increment(id, std::span<const IppTable* const>(kids)));
    }
  }
  return out;
}

// Debug dump: `ancestor  descendant  length  count`.
inline void write_ipp_tsv(std::ostream& out, const IppTable& table) {
  for (const auto& [descendant, list] : table.paths)
    for (const IppEntry& e : list)
      out << table.owner.value << '\t' << descendant.value << '\t' << e.length << '\t'
          << e.count << '\n';
}

}  // namespace pedrecon
