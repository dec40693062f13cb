#include "dhwalk/classify.hpp"
#include "dhwalk/io.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace dhwalk;

namespace {
Rational q(std::int64_t n, std::int64_t d = 1) { return make_rational(n, d); }

FixedPointData with_values(const std::vector<std::int64_t>& values) {
  FixedPointData d("values", DataMode::small);
  const int idx[] = {0, 2, 2, 2, 4, 4, 4, 6};
  for (std::size_t i = 0; i < values.size(); ++i) d.add_component(q(values[i]), FixedComponent::point(idx[i]));
  return d;
}
}  // namespace

TEST(ClassifyIsolated, FigureTwoCertificate) {
  const auto r = classify_isolated(y3_fixed_point_data(q(2), q(3), q(4)));
  ASSERT_TRUE(r.ok()) << r.refusal->reason;
  EXPECT_EQ(r.certificate->statement(), "isomorphic to Y3(2,3,4)");
  EXPECT_EQ(r.certificate->trace.k_sequence(), (std::vector<int>{0, 1, 2, 3, 2, 1, 0}));
  EXPECT_EQ(r.certificate->citations.size(), 2u);
}

TEST(ClassifyIsolated, ShortPairBranch) {
  const auto r = classify_isolated(y3_fixed_point_data(q(1), q(2), q(4)));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.certificate->trace.walls(), (std::vector<Rational>{q(1), q(2), q(3), q(4), q(5), q(6)}));
  // The S2xS2 interval brings its own citation.
  bool product = false;
  for (const auto& c : r.certificate->citations) product |= c.rfind("s2xs2", 0) == 0;
  EXPECT_TRUE(product);
}

TEST(ClassifyIsolated, PerturbedValuesRefused) {
  const auto r = classify_isolated(with_values({0, 2, 3, 4, 5, 6, 8, 9}));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.refusal->check, "isolated_value_lattice_check");
}

TEST(ClassifyIsolated, MaximumAtEightRefused) {
  const auto r = classify_isolated(with_values({0, 2, 3, 4, 5, 6, 7, 8}));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.refusal->check, "isolated_value_lattice_check");
  // The walk itself reports the area defect when the value check is skipped.
  const auto direct = load_scenario(oracle::data_file("scenarios/y3_234_max8.json"));
  const auto t = run_walk(direct);
  EXPECT_EQ(t.final_report->failures.front(), "area(L)(8) = 1 != 0");
}

TEST(ClassifyIsolated, SurfaceDataNotIsolated) {
  FixedPointData d("conic", DataMode::small);
  d.add_component(q(0), FixedComponent::point(0));
  d.add_component(q(2), FixedComponent::surface(2, 0, LatticeClass{2}));
  d.add_component(q(4), FixedComponent::point(6));
  EXPECT_EQ(classify_isolated(d).refusal->check, "precondition");
  const auto r = classify(d);
  ASSERT_TRUE(r.ok()) << r.refusal->reason;
  EXPECT_EQ(r.certificate->kind, CertificateKind::determined_by_small_data);
}

TEST(ClassifyIsolated, RandomTriplesAllCertify) {
  std::mt19937 rng(7);
  for (int i = 0; i < 30; ++i) {
    auto l = oracle::random_triple(rng);
    std::sort(l.begin(), l.end());
    const auto r = classify_isolated(y3_fixed_point_data(l[0], l[1], l[2]));
    ASSERT_TRUE(r.ok()) << to_string(l[0]) << "," << to_string(l[1]) << "," << to_string(l[2]) << ": "
                        << r.refusal->reason;
    EXPECT_EQ(*r.certificate->lambdas, l);
  }
}

TEST(Bootstrap, RecoversFigureTwoEulerClasses) {
  const auto full = small_data_bootstrap(y3_fixed_point_data(q(2), q(3), q(4)));
  EXPECT_EQ(full.mode(), DataMode::full);
  const auto expected = load_scenario(oracle::data_file("scenarios/y3_234_full.json"));
  EXPECT_TRUE(compare_fixed_point_data(full, expected).same) << compare_fixed_point_data(full, expected).witness;
  for (const auto& l : full.levels()) {
    if (l.value == 5) {
      EXPECT_EQ(*l.euler_minus, (LatticeClass{-1, 1, 1, 1}));
    }
  }
}

TEST(Bootstrap, Idempotent) {
  const auto once = small_data_bootstrap(y3_fixed_point_data(q(1), q(2), q(4)));
  const auto twice = small_data_bootstrap(once);
  EXPECT_TRUE(compare_fixed_point_data(once, twice).same);
  EXPECT_EQ(serialize_scenario(once), serialize_scenario(twice));
}

TEST(Bootstrap, SurfaceLevelShiftsEuler) {
  FixedPointData ok("conic", DataMode::small);
  ok.add_component(q(0), FixedComponent::point(0));
  ok.add_component(q(2), FixedComponent::surface(2, 0, LatticeClass{2}));
  ok.add_component(q(4), FixedComponent::point(6));
  const auto full = small_data_bootstrap(ok);
  EXPECT_EQ(*full.levels()[1].euler_minus, LatticeClass{-1});
  const auto t = run_walk(full);
  EXPECT_EQ(t.final_state().euler.cls, LatticeClass{1});
}

TEST(Bootstrap, FailingWalkNamesWall) {
  auto d = y3_fixed_point_data(q(2), q(3), q(4), DataMode::full);
  d.set_euler_minus(q(5), LatticeClass{-1, 1, 1, 0});
  try {
    small_data_bootstrap(d);
    FAIL();
  } catch (const WalkError& e) {
    EXPECT_EQ(e.wall(), "5");
  }
}

TEST(Bootstrap, CommutesWithShift) {
  const auto a = small_data_bootstrap(y3_fixed_point_data(q(2), q(3), q(4)));
  const auto b = small_data_bootstrap(y3_fixed_point_data(q(4), q(2), q(3), DataMode::small, q(0)));
  EXPECT_TRUE(compare_fixed_point_data(a, b).same);
}

TEST(Weak, SelfIsCertified) {
  const auto d = y3_fixed_point_data(q(2), q(3), q(4), DataMode::full);
  EXPECT_EQ(weak_classification_check(d, d).verdict, WeakVerdict::isomorphic_certified);
}

TEST(Weak, DifferentLambdasAreDistinct) {
  const auto a = y3_fixed_point_data(q(2), q(3), q(4), DataMode::full);
  const auto b = y3_fixed_point_data(q(2), q(3), q(5), DataMode::full);
  EXPECT_EQ(weak_classification_check(a, b).verdict, WeakVerdict::distinct_data);
  EXPECT_EQ(weak_classification_check(b, a).verdict, WeakVerdict::distinct_data);
}

TEST(Weak, CorruptedEulerIsDistinct) {
  const auto a = y3_fixed_point_data(q(2), q(3), q(4), DataMode::full);
  const auto b = load_scenario(oracle::data_file("scenarios/y3_234_corrupt_euler.json"));
  EXPECT_EQ(weak_classification_check(a, b).verdict, WeakVerdict::distinct_data);
  EXPECT_EQ(weak_classification_check(b, a).verdict, WeakVerdict::distinct_data);
}

TEST(Weak, UncertifiedMatchIsInconclusive) {
  const auto d = load_scenario(oracle::data_file("scenarios/s2xs2_trivial.json"));
  EXPECT_EQ(weak_classification_check(d, d).verdict, WeakVerdict::inconclusive);
}

TEST(Weak, SmallModeNotApplicable) {
  const auto a = y3_fixed_point_data(q(2), q(3), q(4));
  EXPECT_EQ(weak_classification_check(a, a).verdict, WeakVerdict::not_applicable);
  // Index 2 and index 4 share the value 3.
  const auto b = y3_fixed_point_data(q(1), q(2), q(3), DataMode::full);
  EXPECT_EQ(weak_classification_check(b, b).verdict, WeakVerdict::not_applicable);
  // Equal index-2 values do not break simplicity.
  const auto c = y3_fixed_point_data(q(1), q(1), q(1), DataMode::full);
  EXPECT_EQ(weak_classification_check(c, c).verdict, WeakVerdict::isomorphic_certified);
}

TEST(Classify, DispatchesIsolated) {
  const auto r = classify(y3_fixed_point_data(q(1), q(1), q(1)));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.certificate->kind, CertificateKind::isomorphic_to_y3);
  EXPECT_EQ(r.certificate->certification.level, CertificationLevel::certified);
}

TEST(Classify, UncertifiedIsRefusal) {
  const auto r = classify(load_scenario(oracle::data_file("scenarios/s2xs2_trivial.json")));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.refusal->check, "certify");
}

TEST(Classify, Y3RejectsNonPositiveAreas) { EXPECT_THROW(y3_fixed_point_data(q(0), q(1), q(1)), PreconditionError); }
