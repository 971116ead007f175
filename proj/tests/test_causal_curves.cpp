#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "causevo/causal_curves.hpp"
#include "causevo/error.hpp"
#include "causevo/fixtures.hpp"

using namespace causevo;

namespace {

const SpacetimeModel kMink = SpacetimeModel::minkowski();

CausalCurve sine_curve(std::size_t steps) {
  CausalCurve c;
  c.times = fixtures::example1_grid(steps);
  for (double t : c.times) c.points.push_back(fixtures::example1_point(t));
  return c;
}

}  // namespace

TEST(CausalCurve, ValidationFindsFirstViolation) {
  CausalCurve c;
  c.times = {0, 1, 2, 3};
  c.points = {{0, 0}, {1, 1}, {2, 3}, {3, 3}};
  const CurveValidation v = validate_curve(kMink, c);
  EXPECT_FALSE(v.valid);
  ASSERT_TRUE(v.first_violation.has_value());
  EXPECT_EQ(*v.first_violation, 1u);
  c.points[2].x = 2;
  EXPECT_TRUE(validate_curve(kMink, c).valid);
  c.times[2] = 1;
  EXPECT_FALSE(validate_curve(kMink, c).valid);
}

TEST(CausalCurve, DerivativeMatchesAnalytic) {
  const CausalCurve c = sine_curve(1000);
  const double h = c.times[1] - c.times[0];
  for (std::size_t k : {std::size_t{1}, std::size_t{250}, std::size_t{777}}) {
    EXPECT_NEAR(curve_derivative(kMink, c, k), 0.3 * std::cos(c.times[k]), 0.3 * h * h);
  }
  // One-sided at the ends: first order.
  EXPECT_NEAR(curve_derivative(kMink, c, 0), 0.3, 0.3 * h);
}

TEST(CausalCurve, DerivativeUnwrapsAngles) {
  const SpacetimeModel cyl = SpacetimeModel::cylinder();
  CausalCurve c;
  c.times = {0, 0.1, 0.2};
  c.points = {{0, kTwoPi - 0.05}, {0.1, 0.0}, {0.2, 0.05}};
  EXPECT_NEAR(curve_derivative(cyl, c, 1), 0.5, 1e-12);
}

TEST(CausalCurve, EvaluateInterpolatesLinearly) {
  CausalCurve c;
  c.times = {0, 1};
  c.points = {{0, 0}, {1, 0.5}};
  const Event e = evaluate_curve(kMink, c, 0.4);
  EXPECT_DOUBLE_EQ(e.t, 0.4);
  EXPECT_DOUBLE_EQ(e.x, 0.2);
  EXPECT_THROW(evaluate_curve(kMink, c, 1.5), DomainError);
}

TEST(CausalCurve, ReparametrizeToBoostAndBack) {
  const CausalCurve c = sine_curve(400);
  const TemporalFunction b = TemporalFunction::boost(0.5);
  const double lo = b(c.points.front()), hi = b(c.points.back());
  std::vector<double> grid;
  for (int i = 0; i <= 300; ++i) grid.push_back(lo + (hi - lo) * i / 300.0);
  const CausalCurve cb = reparametrize_curve(kMink, c, b, grid);
  EXPECT_TRUE(validate_curve(kMink, cb).valid);
  for (std::size_t k = 0; k < cb.size(); ++k) EXPECT_NEAR(b(cb.points[k]), cb.times[k], 1e-9);
  // Every reparametrized point lies on the piecewise-linear image of c.
  for (std::size_t k = 0; k < cb.size(); ++k) {
    const Event on = evaluate_curve(kMink, c, cb.points[k].t);
    EXPECT_NEAR(on.x, cb.points[k].x, 1e-9);
  }
  // On the frame values of the vertices the round trip is exact.
  std::vector<double> vertices;
  for (const Event& p : c.points) vertices.push_back(b(p));
  const CausalCurve kept = reparametrize_curve(kMink, c, b, vertices);
  const CausalCurve back = reparametrize_curve(kMink, kept, TemporalFunction::canonical(), c.times);
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_NEAR(back.points[k].x, c.points[k].x, 1e-9);
}

TEST(CausalCurve, ReparametrizeRejectsRangeOutside) {
  const CausalCurve c = sine_curve(40);
  const std::vector<double> grid{-1.0, 0.0};
  EXPECT_THROW(reparametrize_curve(kMink, c, TemporalFunction::canonical(), grid), DomainError);
}

TEST(CausalCurve, Concatenate) {
  CausalCurve a, b;
  a.times = {0, 1};
  a.points = {{0, 0}, {1, 1}};
  b.times = {1, 2};
  b.points = {{1, 1}, {2, 1}};
  const CausalCurve ab = concatenate_curves(a, b);
  EXPECT_EQ(ab.size(), 3u);
  b.points[0].x = 0.5;
  EXPECT_THROW(concatenate_curves(a, b), DomainError);
}

TEST(CausalCurve, UniformDistanceOnUnionGrid) {
  CausalCurve a, b;
  a.times = {0, 1};
  a.points = {{0, 0}, {1, 0}};
  b.times = {0, 0.5, 1};
  b.points = {{0, 0}, {0.5, 0.5}, {1, 0}};
  EXPECT_DOUBLE_EQ(uniform_distance(kMink, a, b, 0, 1), 0.5);
  EXPECT_DOUBLE_EQ(uniform_distance(kMink, a, b, 0, 0.25), 0.25);
}

TEST(CausalCurve, H1PairingOracle) {
  // gamma(t) = (t, 0) on [0, 1]: <(t, 0), ramp_t> = int t s + 1 ds = 1/3 + 1.
  CausalCurve g;
  for (int k = 0; k <= 200; ++k) {
    g.times.push_back(k / 200.0);
    g.points.push_back({k / 200.0, 0.0});
  }
  const auto battery = h1_test_battery(2, 0.0, 1.0);
  ASSERT_EQ(battery.size(), 6u);
  for (const TestVector& v : battery) {
    if (v.id == "ramp[0]") EXPECT_NEAR(h1_pairing(kMink, g, v, 0, 1), 4.0 / 3.0, 1e-4);
    if (v.id == "const[0]") EXPECT_NEAR(h1_pairing(kMink, g, v, 0, 1), 0.5, 1e-12);
    if (v.id == "const[1]") EXPECT_NEAR(h1_pairing(kMink, g, v, 0, 1), 0.0, 1e-12);
  }
  EXPECT_NEAR(h1_pairing_difference(kMink, g, g, battery[2], 0, 1), 0.0, 1e-15);
}

TEST(CausalCurve, RandomCurvesAreCausal) {
  std::mt19937_64 rng(5);
  std::vector<double> grid;
  for (int k = 0; k <= 50; ++k) grid.push_back(k / 50.0);
  for (const SpacetimeModel& m :
       {SpacetimeModel::minkowski(), SpacetimeModel::cylinder(), SpacetimeModel::flrw(0.3)}) {
    for (int i = 0; i < 100; ++i) {
      const CausalCurve c = fixtures::random_causal_curve(m, rng, grid);
      EXPECT_TRUE(validate_curve(m, c).valid) << to_string(m.kind());
    }
  }
}
