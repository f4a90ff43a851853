// pedrecon: simulate pedigrees, reconstruct them from haplotypes, score
// reconstructions and run replicated experiments.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pedrecon/eval.hpp"
#include "pedrecon/experiment.hpp"
#include "pedrecon/io.hpp"
#include "pedrecon/reconstruct.hpp"
#include "pedrecon/simulator.hpp"

namespace fs = std::filesystem;
using namespace pedrecon;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

struct ScoringFlags {
  BasePair min_tract_bp = kDefaultMinTract;
  double recomb_rate = kDefaultRecombRate;
  std::string pairing_rule = "text";
  bool sibling_only = false;

  void attach(CLI::App& cmd) {
    cmd.add_option("--min-tract-bp", min_tract_bp, "Shortest segment counted as IBD (bp)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--recomb-rate", recomb_rate, "Recombination rate per bp per meiosis")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--pairing-rule", pairing_rule, "Haplotype pairing rule")
        ->capture_default_str()
        ->check(CLI::IsMember({"text", "eq4"}));
    cmd.add_flag("--sibling-only", sibling_only, "Test only sibling vs first cousin");
  }

  ScoringOptions options() const {
    ScoringOptions o;
    o.min_tract_length = min_tract_bp;
    o.recomb_rate = recomb_rate;
    o.pairing_rule = pairing_rule == "eq4" ? PairingRule::ScoreSum : PairingRule::Text;
    o.sibling_only = sibling_only;
    return o;
  }
};

// simulate ------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> preset;
};

int cmd_simulate(const SimulateArgs& a) {
  SimParams params;
  if (a.preset) params = benchmark_preset(*a.preset);
  if (!a.config.empty()) {
    auto in = open_in(a.config);
    params = parse_sim_params(in);
  }
  if (a.seed) params.seed = *a.seed;
  params.validate();

  Rng rng(params.seed);
  PedigreeGraph p = simulate_pedigree(params, rng);
  GenomeMap genomes = extant_genomes(p, gene_drop(p, params, rng));
  TruthPairs truth = truth_pairs(p);

  fs::create_directories(a.out);
  const fs::path dir(a.out);
  {
    auto out = open_out(dir / "pedigree.tsv");
    write_pedigree_tsv(out, p);
  }
  {
    auto out = open_out(dir / "haplotypes.tsv");
    write_haplotypes_tsv(out, genomes);
  }
  {
    auto out = open_out(dir / "truth_siblings.tsv");
    write_pairs_tsv(out, truth.siblings);
  }
  {
    auto out = open_out(dir / "truth_half_siblings.tsv");
    write_pairs_tsv(out, truth.half_siblings);
  }
  {
    auto out = open_out(dir / "params.txt");
    write_sim_params(out, params);
  }
  std::cout << "simulated " << p.size() << " individuals over " << p.height()
            << " generations, " << genomes.size() << " extant, " << truth.siblings.size()
            << " sibling pairs, " << truth.half_siblings.size() << " half-sibling pairs\n";
  return 0;
}

// reconstruct ---------------------------------------------------------

struct ReconstructArgs {
  std::string haplotypes;
  std::string out = ".";
  int max_height = 5;
  ScoringFlags scoring;
  std::string scores_out;
  std::string tracts_out;
};

int cmd_reconstruct(const ReconstructArgs& a) {
  auto in = open_in(a.haplotypes);
  GenomeMap genomes = read_haplotypes_tsv(in);

  ReconstructConfig cfg;
  cfg.max_height = a.max_height;
  cfg.scoring = a.scoring.options();
  cfg.keep_scores = !a.scores_out.empty();
  ReconstructResult r = reconstruct(genomes, cfg);

  fs::create_directories(a.out);
  const fs::path dir(a.out);
  {
    auto out = open_out(dir / "reconstructed.tsv");
    write_pedigree_tsv(out, r.pedigree);
  }
  {
    auto out = open_out(dir / "trace.json");
    out << trace_to_json(cfg, r.trace).dump(2) << '\n';
  }
  if (!a.scores_out.empty()) {
    auto out = open_out(a.scores_out);
    out << "# generation\tid_i\tid_j\tv_sib\tv_half\tv_cousin\tv_halfcousin\tchosen\n";
    for (const GenerationTrace& t : r.trace)
      for (const PairScore& s : t.scores) {
        out << t.generation << '\t';
        write_score_row(out, s.a, s.b, s.report);
      }
  }
  if (!a.tracts_out.empty()) {
    auto out = open_out(a.tracts_out);
    for (auto it = genomes.begin(); it != genomes.end(); ++it)
      for (auto jt = std::next(it); jt != genomes.end(); ++jt)
        write_tracts_tsv(out, it->first, jt->first,
                         pairing_summaries(it->second, jt->second, cfg.scoring.min_tract_length));
  }
  std::cout << "reconstructed " << r.pedigree.size() << " individuals over "
            << r.pedigree.height() << " generations\n";
  return 0;
}

// evaluate ------------------------------------------------------------

struct EvaluateArgs {
  std::string reconstructed;
  std::string original;
  std::string truth;
};

int cmd_evaluate(const EvaluateArgs& a) {
  auto rin = open_in(a.reconstructed);
  auto oin = open_in(a.original);
  PedigreeGraph r = read_pedigree_tsv(rin);
  PedigreeGraph o = read_pedigree_tsv(oin);
  std::vector<RelativePair> truth;
  if (!a.truth.empty()) {
    auto tin = open_in(a.truth);
    truth = read_pairs_tsv(tin);
  } else {
    truth = truth_pairs(o).half_siblings;
  }
  std::cout << report_json(accuracy(r, o), half_sibling_recovery(r, truth)).dump(2) << '\n';
  return 0;
}

// experiment ----------------------------------------------------------

struct ExperimentArgs {
  std::vector<int> sets{1, 2, 3, 4, 5};
  std::vector<std::string> configs;
  std::vector<int> heights;
  int replicates = 10;
  std::uint64_t seed = 1;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::string out = "results";
  bool no_sibling_only = false;
  std::optional<BasePair> genome_length;
  ScoringFlags scoring;
};

int cmd_experiment(const ExperimentArgs& a) {
  ExperimentSpec spec;
  spec.replicates = a.replicates;
  spec.seed = a.seed;
  spec.workers = a.workers;
  spec.scoring = a.scoring.options();
  spec.compare_sibling_only = !a.no_sibling_only;
  auto add = [&](std::string name, SimParams params) {
    if (a.genome_length) params.genome_length = *a.genome_length;
    params.recomb_rate = spec.scoring.recomb_rate;
    spec.sets.push_back({std::move(name), params, a.heights});
  };
  if (a.configs.empty())
    for (int s : a.sets) add("set" + std::to_string(s), benchmark_preset(s));
  for (const std::string& c : a.configs) {
    auto in = open_in(c);
    add(fs::path(c).stem().string(), parse_sim_params(in));
  }

  std::vector<RunResult> runs = run_experiment(spec);
  std::vector<SummaryRow> rows = summarize(runs);

  fs::create_directories(a.out);
  const fs::path dir(a.out);
  {
    auto out = open_out(dir / "runs.tsv");
    write_runs_tsv(out, runs);
  }
  {
    auto out = open_out(dir / "summary.tsv");
    write_summary_tsv(out, rows);
  }
  {
    auto out = open_out(dir / "summary.md");
    write_summary_markdown(out, rows);
  }
  write_summary_markdown(std::cout, rows);
  for (const RunResult& r : runs)
    if (!r.error.empty())
      std::cerr << "replicate " << r.set << "/g" << r.height << "/" << r.replicate
                << " failed: " << r.error << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pedigree reconstruction with half-siblings"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a pedigree and its extant haplotypes");
  simulate->add_option("--config", sim.config, "Simulation parameter file (key = value)")
      ->check(CLI::ExistingFile);
  simulate->add_option("--preset", sim.preset, "Benchmark parameter set 1-5")
      ->check(CLI::Range(1, 5));
  simulate->add_option("--out", sim.out, "Output directory")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Override the configured seed");

  ReconstructArgs rec;
  auto* reconstruct_cmd =
      app.add_subcommand("reconstruct", "Reconstruct a pedigree from extant haplotypes");
  reconstruct_cmd->add_option("haplotypes", rec.haplotypes, "Haplotype TSV")
      ->required()
      ->check(CLI::ExistingFile);
  reconstruct_cmd->add_option("--out", rec.out, "Output directory")->capture_default_str();
  reconstruct_cmd->add_option("--max-height", rec.max_height, "Generations to reconstruct")
      ->capture_default_str()
      ->check(CLI::Range(2, 1000));
  rec.scoring.attach(*reconstruct_cmd);
  reconstruct_cmd->add_option("--dump-scores", rec.scores_out, "Write every pair's scores here");
  reconstruct_cmd->add_option("--dump-tracts", rec.tracts_out, "Write extant IBD tracts here");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score a reconstruction against the truth");
  evaluate->add_option("reconstructed", ev.reconstructed, "Reconstructed pedigree TSV")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("original", ev.original, "True pedigree TSV")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--truth", ev.truth, "True half-sibling pair list")
      ->check(CLI::ExistingFile);

  ExperimentArgs ex;
  auto* experiment = app.add_subcommand("experiment", "Replicated simulate/reconstruct/evaluate");
  experiment->add_option("--sets", ex.sets, "Benchmark parameter sets")
      ->delimiter(',')
      ->check(CLI::Range(1, 5));
  experiment->add_option("--config", ex.configs, "Custom parameter files instead of presets")
      ->check(CLI::ExistingFile);
  experiment->add_option("--heights", ex.heights, "Heights to run (default per set)")
      ->delimiter(',')
      ->check(CLI::Range(2, 1000));
  experiment->add_option("--replicates", ex.replicates)->capture_default_str()->check(
      CLI::PositiveNumber);
  experiment->add_option("--seed", ex.seed, "Base seed")->capture_default_str();
  experiment->add_option("--workers", ex.workers)->check(CLI::PositiveNumber);
  experiment->add_option("--out", ex.out, "Output directory")->capture_default_str();
  experiment->add_option("--genome-length", ex.genome_length, "Override genome length (bp)")
      ->check(CLI::PositiveNumber);
  experiment->add_flag("--no-sibling-only", ex.no_sibling_only,
                       "Skip the sibling-only comparison run");
  ex.scoring.attach(*experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*reconstruct_cmd) return cmd_reconstruct(rec);
    if (*evaluate) return cmd_evaluate(ev);
    if (*experiment) return cmd_experiment(ex);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
