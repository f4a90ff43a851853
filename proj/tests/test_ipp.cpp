#include <gtest/gtest.h>

#include <random>

#include "pedrecon/ipp.hpp"
#include "pedrecon/simulator.hpp"
#include "support.hpp"

using namespace pedrecon;
using pedrecon::testing::id;
using pedrecon::testing::inbred_family;
using pedrecon::testing::path_histogram;

TEST(Ipp, MergeSumsEqualLengths) {
  IppTable a{id(20), {{id(1), {{2, 2}, {3, 1}}}}};
  IppTable b{id(21), {{id(1), {{2, 0}}}, {id(2), {{1, 1}}}}};
  const IppTable m = merge_increment(id(30), std::vector<IppTable>{a, b});
  EXPECT_EQ(m.owner, id(30));
  EXPECT_EQ(m.at(id(1)), (IppList{{3, 2}, {4, 1}}));
  EXPECT_EQ(m.at(id(2)), (IppList{{2, 1}}));
  EXPECT_THROW(m.at(id(3)), Error);
}

TEST(Ipp, MergeCombinesTwoRoutes) {
  IppTable a{id(20), {{id(1), {{2, 1}}}}};
  IppTable b{id(21), {{id(1), {{2, 2}}}}};
  const IppTable m = merge_increment(id(30), std::vector<IppTable>{a, b});
  EXPECT_EQ(m.at(id(1)), (IppList{{3, 3}}));
}

TEST(Ipp, MeanPathLength) {
  EXPECT_DOUBLE_EQ(compute_dis(0, {{3, 2}, {4, 1}}, {{1, 1}}), 13.0 / 3.0);
  EXPECT_DOUBLE_EQ(compute_dis(2, {{1, 1}}, {{1, 1}}), 4.0);
  EXPECT_THROW(compute_dis(0, {}, {{1, 1}}), Error);
}

TEST(Ipp, MeanIsLinearInOffset) {
  const IppList a{{2, 3}, {5, 1}}, b{{1, 2}, {4, 7}};
  const double base = compute_dis(0, a, b);
  for (unsigned t : {1u, 2u, 4u, 6u}) EXPECT_DOUBLE_EQ(compute_dis(t, a, b), base + t);
}

TEST(Ipp, GenerationTwoInit) {
  const auto t = init_generation2({{id(10), {id(1), id(2)}}, {id(11), {id(2)}}});
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.at(id(10)).at(id(1)), (IppList{{1, 1}}));
  EXPECT_EQ(t.at(id(10)).descendants(), (std::set<IndividualId>{id(1), id(2)}));
  EXPECT_EQ(t.at(id(11)).descendants(), (std::set<IndividualId>{id(2)}));
}

TEST(Ipp, InbredFamilyTables) {
  const PedigreeGraph p = inbred_family();
  const auto t = ipp_tables(p);
  EXPECT_EQ(t.at(id(9)).descendants(), (std::set<IndividualId>{id(13), id(14)}));
  EXPECT_EQ(t.at(id(9)).at(id(13)), (IppList{{1, 1}}));
  EXPECT_EQ(t.at(id(1)).at(id(13)), (IppList{{3, 2}}));
  EXPECT_EQ(t.at(id(1)).at(id(15)), (IppList{{3, 1}}));
  EXPECT_TRUE(t.at(id(12)).paths.empty());
  EXPECT_EQ(t.at(id(13)), self_table(id(13)));
}

TEST(Ipp, TablesMatchEnumeration) {
  std::mt19937_64 pick(31);
  for (int k = 0; k < 30; ++k) {
    SimParams params;
    params.height = 5;
    params.pop_size = 10;
    params.avg_children = 2.5;
    params.half_sibling_rate = 0.6;
    Rng rng(pick());
    const PedigreeGraph p = simulate_pedigree(params, rng);
    const auto tables = ipp_tables(p);
    for (int g = 2; g <= p.height(); ++g)
      for (IndividualId a : p.generation(g)) {
        ASSERT_EQ(tables.at(a).descendants(), extant_descendants(p, a));
        for (IndividualId e : tables.at(a).descendants())
          ASSERT_EQ(tables.at(a).at(e), path_histogram(p, a, e));
      }
  }
}
