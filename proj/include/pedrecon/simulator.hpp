#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pedrecon/error.hpp"
#include "pedrecon/haplotype.hpp"
#include "pedrecon/io.hpp"
#include "pedrecon/pedigree.hpp"

namespace pedrecon {

using Rng = std::mt19937_64;

struct SimParams {
  double avg_children = 3.0;        // Poisson mean per mating
  int pop_size = 20;                // target individuals per generation
  double half_sibling_rate = 0.0;   // probability of forming a triple
  int height = 5;
  BasePair genome_length = 100'000'000;
  double recomb_rate = 1e-8;        // per base pair per meiosis
  std::uint64_t seed = 0;

  void validate() const {
    if (!(avg_children > 0)) throw Error("avg_children must be positive");
    if (pop_size < 2) throw Error("pop_size must be at least 2");
    if (!(half_sibling_rate >= 0 && half_sibling_rate <= 1))
      throw Error("half_sibling_rate must lie in [0, 1]");
    if (height < 2) throw Error("height must be at least 2");
    if (genome_length <= 0) throw Error("genome_length must be positive");
    if (!(recomb_rate > 0)) throw Error("recomb_rate must be positive");
  }
};

// Flat `key=value` file; `#` starts a comment. recomb_rate and seed are
// optional.
inline SimParams parse_sim_params(std::istream& in) {
  SimParams p;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    auto fail = [&] {
      throw ParseError("line " + std::to_string(line_no) + ": bad value for " + key);
    };
    auto number = [&]() -> double {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(value, &used);
      } catch (const std::exception&) {
        fail();
      }
      if (used != value.size()) fail();
      return v;
    };
    auto integer = [&]() -> long long {
      double v = number();
      if (v != std::floor(v)) fail();
      return static_cast<long long>(v);
    };
    if (key == "avg_children") p.avg_children = number();
    else if (key == "pop_size") p.pop_size = static_cast<int>(integer());
    else if (key == "half_sibling_rate") p.half_sibling_rate = number();
    else if (key == "height") p.height = static_cast<int>(integer());
    else if (key == "genome_length") p.genome_length = integer();
    else if (key == "recomb_rate") p.recomb_rate = number();
    else if (key == "seed") {
      try {
        std::size_t used = 0;
        p.seed = std::stoull(value, &used);
        if (used != value.size()) fail();
      } catch (const std::logic_error&) {
        fail();
      }
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unknown key " + key);
    }
    seen.insert(key);
  }
  for (const char* required :
       {"avg_children", "pop_size", "half_sibling_rate", "height", "genome_length"})
    if (!seen.contains(required))
      throw ParseError(std::string("missing required key ") + required);
  try {
    p.validate();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  return p;
}

inline void write_sim_params(std::ostream& out, const SimParams& p) {
  out << "avg_children=" << p.avg_children << '\n'
      << "pop_size=" << p.pop_size << '\n'
      << "half_sibling_rate=" << p.half_sibling_rate << '\n'
      << "height=" << p.height << '\n'
      << "genome_length=" << p.genome_length << '\n'
      << "recomb_rate=" << p.recomb_rate << '\n'
      << "seed=" << p.seed << '\n';
}

namespace detail {

struct ProtoIndividual {
  Sex sex;
  int father = -1;  // index into the previous generation
  int mother = -1;
};

struct Mating {
  int father;
  int mother;
};

}  // namespace detail

// Wright-Fisher pedigree with monogamous couples and, at rate
// half_sibling_rate, triples in which one individual mates with two
// partners. Each generation is filled with Poisson-sized families until it
// holds pop_size children; the last family is cut short when it overshoots.
// Ancestors without extant descendants are dropped, and the survivors get
// sequential ids in creation order (oldest first).
inline PedigreeGraph simulate_pedigree(const SimParams& params, Rng& rng) {
  params.validate();
  using detail::Mating;
  using detail::ProtoIndividual;

  auto alternating_sex = [](std::size_t k) { return k % 2 == 0 ? Sex::Male : Sex::Female; };

  std::vector<std::vector<ProtoIndividual>> gens(1);
  for (int k = 0; k < params.pop_size; ++k) gens[0].push_back({alternating_sex(k)});

  std::poisson_distribution<int> family_size(params.avg_children);
  std::bernoulli_distribution triple(params.half_sibling_rate);
  std::bernoulli_distribution coin(0.5);
  const auto target = static_cast<std::size_t>(params.pop_size);

  for (int step = 1; step < params.height; ++step) {
    const auto& parents = gens.back();
    std::vector<int> males, females;
    for (int k = 0; k < static_cast<int>(parents.size()); ++k)
      (parents[k].sex == Sex::Male ? males : females).push_back(k);
    std::shuffle(males.begin(), males.end(), rng);
    std::shuffle(females.begin(), females.end(), rng);

    std::vector<ProtoIndividual> children;
    std::vector<Mating> matings;
    auto have_children = [&](const Mating& m) {
      int n = family_size(rng);
      for (int c = 0; c < n && children.size() < target; ++c)
        children.push_back({alternating_sex(children.size()), m.father, m.mother});
    };

    std::size_t next_male = 0, next_female = 0;
    std::size_t revisit = 0;
    while (children.size() < target) {
      const std::size_t free_m = males.size() - next_male;
      const std::size_t free_f = females.size() - next_female;
      if (free_m >= 1 && free_f >= 1) {
        std::vector<Mating> unit;
        if (triple(rng)) {
          bool shared_male = coin(rng);
          if (shared_male && free_f < 2) shared_male = false;
          if (!shared_male && free_m < 2) shared_male = true;
          if (shared_male && free_f >= 2) {
            int dad = males[next_male++];
            unit.push_back({dad, females[next_female++]});
            unit.push_back({dad, females[next_female++]});
          } else if (!shared_male && free_m >= 2) {
            int mum = females[next_female++];
            unit.push_back({males[next_male++], mum});
            unit.push_back({males[next_male++], mum});
          }
        }
        if (unit.empty()) unit.push_back({males[next_male++], females[next_female++]});
        for (const Mating& m : unit) {
          matings.push_back(m);
          have_children(m);
        }
      } else {
        // Everyone is mated: existing matings keep having children.
        if (matings.empty()) throw Error("cannot form any mating pair");
        have_children(matings[revisit++ % matings.size()]);
      }
    }
    gens.push_back(std::move(children));
  }

  // Keep only ancestors of the final generation.
  const int height = params.height;
  std::vector<std::vector<bool>> keep(height);
  keep[height - 1].assign(gens[height - 1].size(), true);
  for (int step = height - 1; step > 0; --step) {
    keep[step - 1].assign(gens[step - 1].size(), false);
    for (std::size_t k = 0; k < gens[step].size(); ++k) {
      if (!keep[step][k]) continue;
      keep[step - 1][gens[step][k].father] = true;
      keep[step - 1][gens[step][k].mother] = true;
    }
  }

  PedigreeGraph p;
  std::vector<std::vector<IndividualId>> ids(height);
  for (int step = 0; step < height; ++step) {
    ids[step].assign(gens[step].size(), IndividualId{});
    for (std::size_t k = 0; k < gens[step].size(); ++k) {
      if (!keep[step][k]) continue;
      const ProtoIndividual& proto = gens[step][k];
      std::optional<IndividualId> father, mother;
      if (step > 0) {
        father = ids[step - 1][proto.father];
        mother = ids[step - 1][proto.mother];
      }
      ids[step][k] = p.add(proto.sex, height - step, father, mother);
    }
  }
  return p;
}

struct TruthPairs {
  std::vector<RelativePair> siblings;
  std::vector<RelativePair> half_siblings;
};

// Full siblings share both parents, half-siblings exactly one.
inline TruthPairs truth_pairs(const PedigreeGraph& p) {
  TruthPairs out;
  for (int g = 1; g <= p.height(); ++g) {
    auto members = p.generation(g);
    for (std::size_t a = 0; a < members.size(); ++a) {
      const Individual& x = p.at(members[a]);
      if (x.is_founder()) continue;
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const Individual& y = p.at(members[b]);
        if (y.is_founder()) continue;
        int shared = 0;
        for (IndividualId px : {*x.father, *x.mother})
          if (px == *y.father || px == *y.mother) ++shared;
        if (shared == 2) out.siblings.push_back({x.id, y.id, g});
        else if (shared == 1) out.half_siblings.push_back({x.id, y.id, g});
      }
    }
  }
  return out;
}

// Samples Poisson(genome_length * recomb_rate) distinct integer crossover
// points in (0, genome_length) and recombines from a random starting
// haplotype.
inline Haplotype meiosis(const DiploidGenome& parent, const SimParams& params,
                         Rng& rng) {
  const BasePair len = parent.hap1.length();
  std::poisson_distribution<long long> crossovers(static_cast<double>(len) *
                                                  params.recomb_rate);
  long long k = std::min<long long>(crossovers(rng), len - 1);
  std::uniform_real_distribution<double> position(0.0, static_cast<double>(len));
  std::set<BasePair> points;
  while (static_cast<long long>(points.size()) < k) {
    auto x = static_cast<BasePair>(std::llround(position(rng)));
    if (x > 0 && x < len) points.insert(x);
  }
  std::vector<BasePair> sorted(points.begin(), points.end());
  int first = std::bernoulli_distribution(0.5)(rng) ? 1 : 0;
  return recombine(parent.hap1, parent.hap2, first, sorted);
}

// Founders get two single-segment haplotypes with globally unique alleles;
// everyone else gets a paternal (hap1) and a maternal (hap2) meiosis.
inline GenomeMap gene_drop(const PedigreeGraph& p, const SimParams& params, Rng& rng) {
  GenomeMap genomes;
  AlleleId next_allele = 1;
  for (int g = p.height(); g >= 1; --g) {
    for (IndividualId id : p.generation(g)) {
      const Individual& ind = p.at(id);
      if (ind.is_founder()) {
        genomes.emplace(id, DiploidGenome{Haplotype::founder(params.genome_length, next_allele),
                                          Haplotype::founder(params.genome_length, next_allele + 1)});
        next_allele += 2;
        continue;
      }
      auto dad = genomes.find(*ind.father);
      auto mum = genomes.find(*ind.mother);
      if (dad == genomes.end() || mum == genomes.end())
        throw Error("parent of " + std::to_string(id.value) + " has no genome");
      Haplotype from_dad = meiosis(dad->second, params, rng);
      Haplotype from_mum = meiosis(mum->second, params, rng);
      genomes.emplace(id, DiploidGenome{std::move(from_dad), std::move(from_mum)});
    }
  }
  return genomes;
}

inline GenomeMap extant_genomes(const PedigreeGraph& p, const GenomeMap& all) {
  GenomeMap out;
  for (IndividualId id : p.extant()) out.emplace(id, all.at(id));
  return out;
}

}  // namespace pedrecon
