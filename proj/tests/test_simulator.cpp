#include <gtest/gtest.h>

#include <sstream>

#include "pedrecon/io.hpp"
#include "pedrecon/simulator.hpp"

using namespace pedrecon;

namespace {

SimParams small(double half_rate) {
  SimParams p;
  p.pop_size = 20;
  p.height = 5;
  p.half_sibling_rate = half_rate;
  p.genome_length = 50'000'000;
  return p;
}

}  // namespace

TEST(Simulator, SameSeedSameOutput) {
  const SimParams params = small(0.5);
  Rng a(42), b(42);
  const PedigreeGraph pa = simulate_pedigree(params, a);
  const PedigreeGraph pb = simulate_pedigree(params, b);
  ASSERT_EQ(pa, pb);
  std::stringstream ga, gb;
  write_haplotypes_tsv(ga, gene_drop(pa, params, a));
  write_haplotypes_tsv(gb, gene_drop(pb, params, b));
  EXPECT_EQ(ga.str(), gb.str());
}

TEST(Simulator, PedigreeIsWellFormed) {
  const SimParams params = small(0.8);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const PedigreeGraph p = simulate_pedigree(params, rng);
    ASSERT_NO_THROW(p.validate());
    EXPECT_EQ(p.height(), params.height);
    EXPECT_EQ(p.extant().size(), static_cast<std::size_t>(params.pop_size));
    for (int g = 2; g <= p.height(); ++g)
      for (IndividualId a : p.generation(g)) EXPECT_FALSE(extant_descendants(p, a).empty());
  }
}

TEST(Simulator, HeightTwo) {
  SimParams params = small(0.3);
  params.height = 2;
  Rng rng(5);
  const PedigreeGraph p = simulate_pedigree(params, rng);
  EXPECT_EQ(p.height(), 2);
  for (IndividualId e : p.extant()) EXPECT_FALSE(p.at(e).is_founder());
}

TEST(Simulator, NoHalfSiblingsWithoutTriples) {
  const SimParams params = small(0.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    EXPECT_TRUE(truth_pairs(simulate_pedigree(params, rng)).half_siblings.empty());
  }
}

TEST(Simulator, HalfSiblingsAppearWithTriples) {
  const SimParams params = small(0.8);
  std::size_t total = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    total += truth_pairs(simulate_pedigree(params, rng)).half_siblings.size();
  }
  EXPECT_GT(total, 0u);
}

// Every segment of a child's haplotype comes from the matching parent.
TEST(Simulator, MendelianInheritance) {
  const SimParams params = small(0.5);
  Rng rng(9);
  const PedigreeGraph p = simulate_pedigree(params, rng);
  const GenomeMap g = gene_drop(p, params, rng);
  ASSERT_EQ(g.size(), p.size());
  for (const auto& [id, ind] : p) {
    if (ind.is_founder()) continue;
    const auto check = [&](const Haplotype& h, IndividualId parent) {
      const DiploidGenome& pg = g.at(parent);
      for (const Segment& s : h.segments()) {
        for (BasePair x : {s.start, (s.start + s.end) / 2, s.end - 1}) {
          const AlleleId a = h.allele_at(x);
          ASSERT_TRUE(a == pg.hap1.allele_at(x) || a == pg.hap2.allele_at(x));
        }
      }
    };
    check(g.at(id).hap1, *ind.father);
    check(g.at(id).hap2, *ind.mother);
  }
}

TEST(Simulator, CrossoverCountMatchesRate) {
  SimParams params;
  params.genome_length = 100'000'000;
  params.recomb_rate = 1e-8;
  DiploidGenome parent{Haplotype::founder(params.genome_length, 1),
                       Haplotype::founder(params.genome_length, 2)};
  Rng rng(17);
  const int n = 10000;
  double breaks = 0;
  for (int k = 0; k < n; ++k)
    breaks += static_cast<double>(meiosis(parent, params, rng).segments().size() - 1);
  const double mean = breaks / n;
  EXPECT_GE(mean, 0.9);
  EXPECT_LE(mean, 1.1);
}

TEST(Simulator, ParsesParams) {
  std::istringstream in(
      "# set\navg_children = 3\npop_size=40\nhalf_sibling_rate = 0.5 # comment\nheight=5\n"
      "genome_length = 3000000000\nseed = 12\n");
  const SimParams p = parse_sim_params(in);
  EXPECT_EQ(p.avg_children, 3);
  EXPECT_EQ(p.pop_size, 40);
  EXPECT_EQ(p.half_sibling_rate, 0.5);
  EXPECT_EQ(p.height, 5);
  EXPECT_EQ(p.genome_length, 3'000'000'000);
  EXPECT_EQ(p.seed, 12u);
  EXPECT_EQ(p.recomb_rate, 1e-8);
}

TEST(Simulator, RejectsBadParams) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_sim_params(in);
  };
  const std::string base = "avg_children=3\npop_size=20\nhalf_sibling_rate=0\nheight=5\n";
  EXPECT_NO_THROW(parse(base + "genome_length=1000\n"));
  EXPECT_THROW(parse(base), ParseError);
  EXPECT_THROW(parse(base + "genome_length=1000\ncolour=red\n"), ParseError);
  EXPECT_THROW(parse(base + "genome_length=abc\n"), ParseError);
  EXPECT_THROW(parse(base + "genome_length=10.5\n"), ParseError);
  EXPECT_THROW(parse(base + "genome_length\n"), ParseError);
  EXPECT_THROW(parse("avg_children=3\npop_size=20\nhalf_sibling_rate=1.5\nheight=5\n"
                     "genome_length=1000\n"),
               ParseError);
  EXPECT_THROW(parse("avg_children=3\npop_size=20\nhalf_sibling_rate=0\nheight=0\n"
                     "genome_length=1000\n"),
               ParseError);
}
