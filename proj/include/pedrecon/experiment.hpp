#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "pedrecon/eval.hpp"
#include "pedrecon/reconstruct.hpp"
#include "pedrecon/simulator.hpp"

namespace pedrecon {

// Human-genome-sized coordinate space used by the benchmark presets. A
// single 1e8 bp chromosome leaves about one tract per haplotype pair, too
// few for the length tests to tell relationships apart.
inline constexpr BasePair kBenchmarkGenomeLength = 3'000'000'000;

// The five Wright-Fisher parameter sets of the benchmark protocol:
// children per mating, individuals per generation, half-sibling rate,
// height.
inline SimParams benchmark_preset(int set) {
  SimParams p;
  p.genome_length = kBenchmarkGenomeLength;
  switch (set) {
    case 1: p.avg_children = 3; p.pop_size = 20; p.half_sibling_rate = 0.0; p.height = 5; break;
    case 2: p.avg_children = 2; p.pop_size = 20; p.half_sibling_rate = 0.8; p.height = 5; break;
    case 3: p.avg_children = 3; p.pop_size = 40; p.half_sibling_rate = 0.5; p.height = 5; break;
    case 4: p.avg_children = 3; p.pop_size = 20; p.half_sibling_rate = 0.8; p.height = 10; break;
    case 5: p.avg_children = 3; p.pop_size = 40; p.half_sibling_rate = 0.8; p.height = 10; break;
    default: throw Error("parameter set must be 1-5, got " + std::to_string(set));
  }
  return p;
}

struct ParameterSet {
  std::string name;
  SimParams params;
  std::vector<int> heights;  // empty: 2..height for shallow sets, else just height
};

struct ExperimentSpec {
  std::vector<ParameterSet> sets;
  int replicates = 10;
  std::uint64_t seed = 1;
  ScoringOptions scoring;
  bool compare_sibling_only = true;
  unsigned workers = 1;

  void validate() const {
    if (replicates < 1) throw Error("replicate count must be at least 1");
    if (sets.empty()) throw Error("experiment has no parameter sets");
    for (const ParameterSet& s : sets) s.params.validate();
  }
};

inline std::vector<int> heights_for(const ParameterSet& s) {
  if (!s.heights.empty()) return s.heights;
  if (s.params.height > 5) return {s.params.height};
  std::vector<int> out;
  for (int h = 2; h <= s.params.height; ++h) out.push_back(h);
  return out;
}

struct RunResult {
  std::string set;
  int height = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  std::size_t family_size = 0;
  double accuracy = 0;
  double accuracy_sibling_only = -1;  // -1 when not run
  std::size_t half_sib_reconstructed = 0;
  std::size_t half_sib_real = 0;
  double seconds = 0;
  std::string error;  // non-empty when the replicate failed
};

inline std::uint64_t replicate_seed(std::uint64_t base, std::size_t set_index, int height,
                                    int replicate) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(set_index), static_cast<std::uint32_t>(height),
                    static_cast<std::uint32_t>(replicate)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

// simulate -> reconstruct -> evaluate for one pedigree.
inline RunResult run_replicate(const SimParams& base, int height, std::uint64_t seed,
                               const ScoringOptions& scoring, bool compare_sibling_only) {
  RunResult r;
  r.height = height;
  r.seed = seed;
  SimParams params = base;
  params.height = height;
  params.seed = seed;
  Rng rng(seed);
  PedigreeGraph original = simulate_pedigree(params, rng);
  GenomeMap genomes = extant_genomes(original, gene_drop(original, params, rng));
  r.family_size = original.size();

  ReconstructConfig cfg;
  cfg.max_height = height;
  cfg.scoring = scoring;
  cfg.scoring.recomb_rate = params.recomb_rate;
  const auto start = std::chrono::steady_clock::now();
  ReconstructResult rec = reconstruct(genomes, cfg);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.accuracy = accuracy(rec.pedigree, original).accuracy;
  auto hs = half_sibling_recovery(rec.pedigree, truth_pairs(original).half_siblings);
  r.half_sib_reconstructed = hs.reconstructed;
  r.half_sib_real = hs.real;

  if (compare_sibling_only) {
    cfg.scoring.sibling_only = true;
    r.accuracy_sibling_only = accuracy(reconstruct(genomes, cfg).pedigree, original).accuracy;
  }
  return r;
}

// Every (set, height, replicate) job, run on `workers` threads. A failing
// replicate is recorded and the rest continue. Results come back in job
// order regardless of scheduling.
inline std::vector<RunResult> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  struct Job {
    std::size_t set_index;
    int height;
    int replicate;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < spec.sets.size(); ++s)
    for (int h : heights_for(spec.sets[s]))
      for (int rep = 0; rep < spec.replicates; ++rep) jobs.push_back({s, h, rep});

  std::vector<RunResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      const Job& job = jobs[k];
      const ParameterSet& set = spec.sets[job.set_index];
      const std::uint64_t seed = replicate_seed(spec.seed, job.set_index, job.height, job.replicate);
      RunResult r;
      try {
        r = run_replicate(set.params, job.height, seed, spec.scoring, spec.compare_sibling_only);
      } catch (const std::exception& e) {
        r.height = job.height;
        r.seed = seed;
        r.error = e.what();
      }
      r.set = set.name;
      r.replicate = job.replicate;
      results[k] = std::move(r);
    }
  };
  const unsigned n = std::max(1u, spec.workers);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return results;
}

struct SummaryRow {
  std::string set;
  int height = 0;
  int runs = 0;
  int failures = 0;
  double family_size = 0;
  double accuracy = 0;
  double accuracy_sibling_only = -1;  // -1 when never run
  double half_sib_reconstructed = 0;
  double half_sib_real = 0;
  double seconds = 0;
};

// Means over the successful replicates of each (set, height).
inline std::vector<SummaryRow> summarize(const std::vector<RunResult>& results) {
  std::vector<SummaryRow> rows;
  std::vector<std::pair<double, int>> sibling_only;  // sum, count
  std::map<std::pair<std::string, int>, std::size_t> index;
  for (const RunResult& r : results) {
    auto [it, inserted] = index.emplace(std::pair{r.set, r.height}, rows.size());
    if (inserted) {
      rows.push_back({r.set, r.height});
      sibling_only.emplace_back(0.0, 0);
    }
    SummaryRow& row = rows[it->second];
    if (!r.error.empty()) {
      ++row.failures;
      continue;
    }
    ++row.runs;
    row.family_size += static_cast<double>(r.family_size);
    row.accuracy += r.accuracy;
    if (r.accuracy_sibling_only >= 0) {
      sibling_only[it->second].first += r.accuracy_sibling_only;
      ++sibling_only[it->second].second;
    }
    row.half_sib_reconstructed += static_cast<double>(r.half_sib_reconstructed);
    row.half_sib_real += static_cast<double>(r.half_sib_real);
    row.seconds += r.seconds;
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    SummaryRow& row = rows[k];
    if (sibling_only[k].second > 0)
      row.accuracy_sibling_only = sibling_only[k].first / sibling_only[k].second;
    if (row.runs == 0) continue;
    const double n = row.runs;
    row.family_size /= n;
    row.accuracy /= n;
    row.half_sib_reconstructed /= n;
    row.half_sib_real /= n;
    row.seconds /= n;
  }
  return rows;
}

inline void write_runs_tsv(std::ostream& out, const std::vector<RunResult>& results) {
  out << "set\theight\treplicate\tseed\tfamily_size\taccuracy\taccuracy_sibling_only"
         "\thalf_sib_reconstructed\thalf_sib_real\tseconds\terror\n";
  for (const RunResult& r : results)
    out << r.set << '\t' << r.height << '\t' << r.replicate << '\t' << r.seed << '\t'
        << r.family_size << '\t' << r.accuracy << '\t' << r.accuracy_sibling_only << '\t'
        << r.half_sib_reconstructed << '\t' << r.half_sib_real << '\t' << r.seconds << '\t'
        << r.error << '\n';
}

inline void write_summary_tsv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "set\theight\truns\tfailures\tfamily_size\taccuracy\taccuracy_sibling_only"
         "\thalf_sib_reconstructed\thalf_sib_real\tseconds\n";
  for (const SummaryRow& r : rows)
    out << r.set << '\t' << r.height << '\t' << r.runs << '\t' << r.failures << '\t'
        << r.family_size << '\t' << r.accuracy << '\t' << r.accuracy_sibling_only << '\t'
        << r.half_sib_reconstructed << '\t' << r.half_sib_real << '\t' << r.seconds << '\n';
}

inline void write_summary_markdown(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "| Set | Height | Family size | Accuracy | Sibling-only accuracy | "
         "Half-sibs reconstructed | Half-sibs real | Seconds | Failures |\n"
      << "|---|---|---|---|---|---|---|---|---|\n";
  out << std::fixed;
  for (const SummaryRow& r : rows) {
    out << "| " << r.set << " | g = " << r.height << " | " << std::setprecision(1)
        << r.family_size << " | " << std::setprecision(3) << r.accuracy << " | ";
    if (r.accuracy_sibling_only >= 0) out << r.accuracy_sibling_only;
    else out << "-";
    out << " | " << std::setprecision(1) << r.half_sib_reconstructed << " | "
        << r.half_sib_real << " | " << std::setprecision(3) << r.seconds << " | "
        << r.failures << " |\n";
  }
  out << std::defaultfloat;
}

}  // namespace pedrecon
