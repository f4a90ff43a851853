#include <gtest/gtest.h>

#include "pedrecon/eval.hpp"
#include "support.hpp"

using namespace pedrecon;
using namespace pedrecon::testing;

TEST(Eval, IdentityIsPerfect) {
  const PedigreeGraph p = inbred_family();
  const AccuracyReport r = accuracy(p, p);
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.pair_count, 9u);
  EXPECT_EQ(r.matches, 9u);
}

TEST(Eval, DisconnectedReconstruction) {
  const PedigreeGraph o = inbred_family();
  PedigreeGraph r;
  for (IndividualId e : o.extant()) r.insert({e, Sex::Unknown, 1, std::nullopt, std::nullopt});
  const AccuracyReport rep = accuracy(r, o);
  EXPECT_EQ(rep.matches, 3u);  // only the diagonal
  EXPECT_DOUBLE_EQ(rep.accuracy, 3.0 / 9.0);
}

TEST(Eval, BothDisconnectedCountsAsMatch) {
  PedigreeGraph a;
  a.add(Sex::Male, 1);
  a.add(Sex::Female, 1);
  EXPECT_EQ(accuracy(a, a).accuracy, 1.0);
}

TEST(Eval, ExtantSetsMustAgree) {
  const PedigreeGraph o = inbred_family();
  PedigreeGraph r;
  r.insert({id(13), Sex::Unknown, 1, std::nullopt, std::nullopt});
  EXPECT_THROW(accuracy(r, o), Error);
}

TEST(Eval, HalfSiblingRecovery) {
  const PedigreeGraph o = inbred_family();
  const auto truth = truth_pairs(o);
  EXPECT_EQ(truth.siblings.size(), 3u);  // 13-14, 4-6, 11-12
  EXPECT_EQ(truth.half_siblings.size(), 2u);
  const HalfSiblingRecovery hs = half_sibling_recovery(o, truth.half_siblings);
  EXPECT_EQ(hs.reconstructed, 2u);
  EXPECT_EQ(hs.real, 2u);
  const auto j = report_json(accuracy(o, o), hs);
  EXPECT_EQ(j.at("accuracy"), 1.0);
  EXPECT_EQ(j.at("half_sib_real"), 2);
}
