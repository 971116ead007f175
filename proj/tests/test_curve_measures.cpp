#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "causevo/curve_measures.hpp"
#include "causevo/fixtures.hpp"

using namespace causevo;

namespace {

const SpacetimeModel kMink = SpacetimeModel::minkowski();

CausalCurve line(std::vector<double> times, double x0, double v) {
  CausalCurve c;
  for (double t : times) c.points.push_back({t, x0 + v * (t - times.front())});
  c.times = std::move(times);
  return c;
}

}  // namespace

TEST(CurveMeasure, MakeMergesIdenticalCurves) {
  const std::vector<double> g{0, 0.5, 1};
  const CurveMeasure s = CurveMeasure::make(
      0, 1, {{line(g, 0, 0.5), Rational(1, 4)}, {line(g, 0, 0.5), Rational(1, 4)}, {line(g, 0, -1), Rational(1, 2)}});
  EXPECT_EQ(s.atoms.size(), 2u);
  EXPECT_EQ(s.total_mass(), 1);
  EXPECT_NO_THROW(validate_curve_measure(kMink, s));
}

TEST(CurveMeasure, ValidationRejectsDefects) {
  const std::vector<double> g{0, 0.5, 1};
  EXPECT_THROW(validate_curve_measure(kMink, CurveMeasure::make(0, 1, {{line(g, 0, 0.5), Rational(1, 2)}})),
               InputError);
  EXPECT_THROW(validate_curve_measure(kMink, CurveMeasure::make(0, 1, {{line(g, 0, 2.0), Rational(1)}})),
               InputError);
  EXPECT_THROW(validate_curve_measure(kMink, CurveMeasure::make(0, 1,
                                                                {{line(g, 0, 0), Rational(1, 2)},
                                                                 {line({0, 1}, 1, 0), Rational(1, 2)}})),
               InputError);
}

TEST(CurveMeasure, PushforwardsAndJointCoupling) {
  const std::vector<double> g{0, 0.5, 1};
  const CurveMeasure s =
      CurveMeasure::make(0, 1, {{line(g, 0, 1), Rational(1, 3)}, {line(g, 0, -1), Rational(2, 3)}});
  const SliceMeasure mid = pushforward_eval(s, 0.5);
  ASSERT_EQ(mid.atoms.size(), 2u);
  EXPECT_EQ(mid.mass_of({0.5, -0.5}), Rational(2, 3));
  EXPECT_EQ(pushforward_eval(s, 0).atoms.size(), 1u);
  EXPECT_THROW(pushforward_eval(s, 0.3), DomainError);
  const Coupling c = joint_pushforward(s, 0, 1);
  EXPECT_TRUE(validate_coupling(kMink, c).valid);
  EXPECT_EQ(c.mass.size(), 2u);
}

TEST(CurveMeasure, ConcatenationWeightsAreConditional) {
  const std::vector<double> g1{0, 1}, g2{1, 2};
  const CurveMeasure first =
      CurveMeasure::make(0, 1, {{line(g1, -1, 1), Rational(1, 2)}, {line(g1, 1, -1), Rational(1, 2)}});
  const CurveMeasure second =
      CurveMeasure::make(1, 2, {{line(g2, 0, 1), Rational(1, 4)}, {line(g2, 0, -1), Rational(3, 4)}});
  const CurveMeasure joined = concatenate_curve_measures(first, second);
  ASSERT_EQ(joined.atoms.size(), 4u);
  for (const CurveAtom& a : joined.atoms) {
    const double end = a.curve.points.back().x;
    EXPECT_EQ(a.weight, end > 0 ? Rational(1, 8) : Rational(3, 8));
  }
  EXPECT_EQ(pushforward_eval(joined, 0), pushforward_eval(first, 0));
  EXPECT_EQ(pushforward_eval(joined, 2), pushforward_eval(second, 2));
  const CurveMeasure other = CurveMeasure::make(1, 2, {{line(g2, 0.5, 0), Rational(1)}});
  EXPECT_THROW(concatenate_curve_measures(first, other), DomainError);
}

TEST(CurveMeasure, ChainMatchesDirectSigmaForExample1) {
  const std::size_t steps = 64;
  const Evolution ev = fixtures::example1_evolution(steps);
  std::vector<std::size_t> nodes(steps + 1);
  std::iota(nodes.begin(), nodes.end(), 0);
  EXPECT_EQ(chain_construct_sigma(ev, nodes), fixtures::example1_sigma(steps));
  const CurveMeasure level3 = dyadic_construct_sigma(ev, 3);
  EXPECT_EQ(level3.atoms.size(), 1u);
  for (std::size_t k : dyadic_indices(ev, 3)) EXPECT_EQ(pushforward_eval(level3, ev.times[k]), ev.slices[k]);
}

TEST(CurveMeasure, DyadicIndicesNeedGridTimes) {
  const Evolution ev = fixtures::example1_evolution(12);
  EXPECT_EQ(dyadic_indices(ev, 2).size(), 5u);
  EXPECT_THROW(dyadic_indices(ev, 3), DomainError);
}

TEST(CurveMeasure, ChainNamesFailingStep) {
  Evolution ev;
  ev.times = {0, 1, 2};
  ev.slices = {SliceMeasure::make(0, {{{0, 0}, Rational(1)}}), SliceMeasure::make(1, {{{1, 0}, Rational(1)}}),
               SliceMeasure::make(2, {{{2, 5}, Rational(1)}})};
  const std::vector<std::size_t> nodes{0, 1, 2};
  try {
    chain_construct_sigma(ev, nodes);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("step 1"), std::string::npos) << e.what();
  }
}

TEST(CurveMeasure, DyadicExactOnRandomEvolutions) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    const auto r = fixtures::random_causal_evolution(rng, 8, 6);
    for (unsigned level : {1u, 2u, 3u}) {
      const CurveMeasure s = dyadic_construct_sigma(r.evolution, level);
      EXPECT_NO_THROW(validate_curve_measure(kMink, s));
      for (std::size_t k : dyadic_indices(r.evolution, level)) {
        EXPECT_EQ(pushforward_eval(s, r.evolution.times[k]), r.evolution.slices[k]);
      }
    }
  }
}

TEST(CurveMeasure, Example2ConstructionPicksRestCurves) {
  const auto fam0 = fixtures::example2(0.0);
  EXPECT_EQ(dyadic_construct_sigma(fam0.evolution, 3), fam0.sigma);
  const auto fam1 = fixtures::example2(1.0);
  EXPECT_EQ(fam0.evolution, fam1.evolution);
  EXPECT_NE(fam0.sigma, fam1.sigma);
}

TEST(CurveMeasure, WassersteinOracle) {
  const std::vector<double> g{0, 1};
  // b drifts to x = 0.5 by t = 1, so the uniform distance is 0.5.
  const CurveMeasure a = CurveMeasure::make(0, 1, {{line(g, 0, 0), Rational(1)}});
  const CurveMeasure b = CurveMeasure::make(0, 1, {{line(g, 0, 0.5), Rational(1)}});
  EXPECT_NEAR(wasserstein_curve_distance(kMink, a, b, 0, 1), 0.5, 1e-15);
  EXPECT_EQ(wasserstein_curve_distance(kMink, a, a, 0, 1), 0.0);
  // Half of the mass moves by 1/2, the rest stays: W1 = 1/4.
  const CurveMeasure c =
      CurveMeasure::make(0, 1, {{line(g, 0, 0), Rational(1, 2)}, {line(g, 3, 0), Rational(1, 2)}});
  const CurveMeasure d =
      CurveMeasure::make(0, 1, {{line(g, 3, 0), Rational(1, 2)}, {line(g, 0.5, 0), Rational(1, 2)}});
  EXPECT_NEAR(wasserstein_curve_distance(kMink, c, d, 0, 1), 0.25, 1e-15);
}

TEST(CurveMeasure, LiftAndPad) {
  const SliceMeasure mu = SliceMeasure::make(0, {{{0, 0}, Rational(1)}});
  const SliceMeasure nu = SliceMeasure::make(1, {{{1, -0.5}, Rational(1, 2)}, {{1, 0.5}, Rational(1, 2)}});
  const Coupling c = find_causal_coupling(kMink, mu, nu);
  const std::vector<double> grid{0, 0.25, 0.5, 0.75, 1};
  const CurveMeasure s = lift_coupling(kMink, c, grid);
  EXPECT_EQ(s.atoms.size(), 2u);
  EXPECT_EQ(joint_pushforward(s, 0, 1), c);
  const std::vector<double> before{-1, 0}, after{1, 2};
  const CurveMeasure padded = pad_with_rest_curves(s, before, after);
  EXPECT_EQ(padded.a, -1.0);
  EXPECT_EQ(padded.b, 2.0);
  EXPECT_EQ(pushforward_eval(padded, 2), SliceMeasure::make(2, {{{2, -0.5}, Rational(1, 2)}, {{2, 0.5}, Rational(1, 2)}}));
}
