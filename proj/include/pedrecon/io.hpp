#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pedrecon/error.hpp"
#include "pedrecon/haplotype.hpp"
#include "pedrecon/pedigree.hpp"

namespace pedrecon {

using GenomeMap = std::map<IndividualId, DiploidGenome>;

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, '\t')) out.push_back(field);
  if (!line.empty() && line.back() == '\t') out.emplace_back();
  return out;
}

inline bool skip_line(const std::string& line) {
  return line.empty() || line[0] == '#' || line == "\r";
}

template <typename Int>
Int parse_int(const std::string& text, std::size_t line_no) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used != text.size() && !(used + 1 == text.size() && text.back() == '\r'))
      throw std::invalid_argument("trailing characters");
    if (v < 0) throw std::invalid_argument("negative");
    return static_cast<Int>(v);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad integer '" +
                     text + "'");
  }
}

}  // namespace detail

// `id  sex  generation  father_id  mother_id`, 0 for an absent parent.
inline void write_pedigree_tsv(std::ostream& out, const PedigreeGraph& p) {
  for (const auto& [id, ind] : p) {
    out << id.value << '\t' << sex_code(ind.sex) << '\t' << ind.generation
        << '\t' << (ind.father ? ind.father->value : 0) << '\t'
        << (ind.mother ? ind.mother->value : 0) << '\n';
  }
}

inline PedigreeGraph read_pedigree_tsv(std::istream& in) {
  PedigreeGraph p;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::skip_line(line)) continue;
    auto f = detail::split_tabs(line);
    if (f.size() != 5)
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected 5 tab-separated fields");
    Individual ind;
    ind.id = IndividualId{detail::parse_int<std::uint32_t>(f[0], line_no)};
    const std::string& sex = f[1];
    if (sex == "M") ind.sex = Sex::Male;
    else if (sex == "F") ind.sex = Sex::Female;
    else if (sex == "U") ind.sex = Sex::Unknown;
    else throw ParseError("line " + std::to_string(line_no) + ": bad sex '" + sex + "'");
    ind.generation = detail::parse_int<int>(f[2], line_no);
    auto father = detail::parse_int<std::uint32_t>(f[3], line_no);
    auto mother = detail::parse_int<std::uint32_t>(f[4], line_no);
    if (father != 0) ind.father = IndividualId{father};
    if (mother != 0) ind.mother = IndividualId{mother};
    try {
      p.insert(ind);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  try {
    p.validate();
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  return p;
}

// `individual_id  hap_index(1|2)  start_bp  end_bp  founder_allele`.
inline void write_haplotypes_tsv(std::ostream& out, const GenomeMap& genomes) {
  for (const auto& [id, g] : genomes) {
    for (int h = 0; h < 2; ++h) {
      for (const Segment& s : g[h].segments()) {
        out << id.value << '\t' << (h + 1) << '\t' << s.start << '\t' << s.end
            << '\t' << s.founder_allele << '\n';
      }
    }
  }
}

inline GenomeMap read_haplotypes_tsv(std::istream& in) {
  std::map<IndividualId, std::vector<Segment>[2]> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::skip_line(line)) continue;
    auto f = detail::split_tabs(line);
    if (f.size() != 5)
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected 5 tab-separated fields");
    IndividualId id{detail::parse_int<std::uint32_t>(f[0], line_no)};
    auto hap = detail::parse_int<int>(f[1], line_no);
    if (hap != 1 && hap != 2)
      throw ParseError("line " + std::to_string(line_no) + ": hap index must be 1 or 2");
    Segment s{detail::parse_int<BasePair>(f[2], line_no),
              detail::parse_int<BasePair>(f[3], line_no),
              detail::parse_int<AlleleId>(f[4], line_no)};
    raw[id][hap - 1].push_back(s);
  }
  GenomeMap out;
  BasePair genome_length = -1;
  for (auto& [id, haps] : raw) {
    try {
      DiploidGenome g{Haplotype::from_segments(std::move(haps[0])),
                      Haplotype::from_segments(std::move(haps[1]))};
      if (g.hap1.length() != g.hap2.length())
        throw Error("haplotypes differ in length");
      if (genome_length < 0) genome_length = g.hap1.length();
      if (g.hap1.length() != genome_length)
        throw Error("genome length differs from other individuals");
      out.emplace(id, std::move(g));
    } catch (const Error& e) {
      throw ParseError("individual " + std::to_string(id.value) + ": " + e.what());
    }
  }
  return out;
}

struct RelativePair {
  IndividualId a;
  IndividualId b;
  int generation = 1;

  bool operator==(const RelativePair&) const = default;
};

// `id_a  id_b  generation`
inline void write_pairs_tsv(std::ostream& out, const std::vector<RelativePair>& pairs) {
  for (const RelativePair& r : pairs)
    out << r.a.value << '\t' << r.b.value << '\t' << r.generation << '\n';
}

inline std::vector<RelativePair> read_pairs_tsv(std::istream& in) {
  std::vector<RelativePair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::skip_line(line)) continue;
    auto f = detail::split_tabs(line);
    if (f.size() != 3)
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected 3 tab-separated fields");
    out.push_back({IndividualId{detail::parse_int<std::uint32_t>(f[0], line_no)},
                   IndividualId{detail::parse_int<std::uint32_t>(f[1], line_no)},
                   detail::parse_int<int>(f[2], line_no)});
  }
  return out;
}

}  // namespace pedrecon
