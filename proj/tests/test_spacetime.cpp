#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "causevo/causal_curves.hpp"
#include "causevo/error.hpp"
#include "causevo/spacetime.hpp"

using namespace causevo;

namespace {

// Arc distance on the unit circle from the chord: 2 asin(|chord| / 2).
double arc_oracle(double x1, double x2) {
  const double chord = std::hypot(std::cos(x1) - std::cos(x2), std::sin(x1) - std::sin(x2));
  return 2.0 * std::asin(std::min(1.0, chord / 2.0));
}

// int_0^t ds / (1 + eps s^2) in closed form.
double conformal_oracle(double eps, double t) { return std::atan(std::sqrt(eps) * t) / std::sqrt(eps); }

}  // namespace

TEST(Spacetime, MinkowskiConeIsTheLightCone) {
  const SpacetimeModel m = SpacetimeModel::minkowski();
  EXPECT_TRUE(causally_precedes(m, {0, 0}, {1, 1}));
  EXPECT_TRUE(causally_precedes(m, {0, 0}, {1, -1}));
  EXPECT_FALSE(chronologically_precedes(m, {0, 0}, {1, 1}));
  EXPECT_TRUE(chronologically_precedes(m, {0, 0}, {1, 0.5}));
  EXPECT_FALSE(causally_precedes(m, {0, 0}, {1, 1.0000001}));
  EXPECT_FALSE(causally_precedes(m, {1, 0}, {0, 0}));
  EXPECT_TRUE(causally_precedes(m, {0.5, 0.5}, {0.5, 0.5}));
  EXPECT_TRUE(causally_precedes(m, {0, 0}, {1, 1.0000001}, 1e-6));
}

TEST(Spacetime, MinkowskiAgreesWithIntervalOracleOnRandomPairs) {
  const SpacetimeModel m = SpacetimeModel::minkowski();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coord(-16, 16);
  for (int i = 0; i < 2000; ++i) {
    const Event p{coord(rng) / 8.0, coord(rng) / 8.0};
    const Event q{coord(rng) / 8.0, coord(rng) / 8.0};
    const double dt = q.t - p.t, dx = q.x - p.x;
    EXPECT_EQ(causally_precedes(m, p, q), dt >= 0 && dt * dt - dx * dx >= 0);
    EXPECT_EQ(chronologically_precedes(m, p, q), dt > 0 && dt * dt - dx * dx > 0);
  }
}

TEST(Spacetime, CylinderUsesArcDistance) {
  const SpacetimeModel c = SpacetimeModel::cylinder();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int i = 0; i < 500; ++i) {
    const double a = angle(rng), b = angle(rng);
    EXPECT_NEAR(c.spatial_separation(a, b), arc_oracle(a, b), 1e-9);
  }
  EXPECT_TRUE(causally_precedes(c, {0, 0.1}, {0.3, kTwoPi - 0.1}));
  EXPECT_FALSE(causally_precedes(SpacetimeModel::minkowski(), {0, 0.1}, {0.3, kTwoPi - 0.1}));
  // After time pi every point of the circle is reached.
  EXPECT_TRUE(causally_precedes(c, {0, 0}, {kPi, kPi}));
  EXPECT_THROW(c.check_event({0, 7.0}), InputError);
}

TEST(Spacetime, CylinderDisplacementTieResolvesPositive) {
  const SpacetimeModel c = SpacetimeModel::cylinder();
  EXPECT_DOUBLE_EQ(c.spatial_displacement(0.0, kPi), kPi);
  EXPECT_NEAR(c.spatial_displacement(0.1, kTwoPi - 0.1), -0.2, 1e-12);
  EXPECT_NEAR(c.spatial_displacement(kTwoPi - 0.1, 0.1), 0.2, 1e-12);
}

TEST(Spacetime, FlrwConformalTimeMatchesClosedForm) {
  for (double eps : {0.05, 0.5, 2.0}) {
    const SpacetimeModel f = SpacetimeModel::flrw(eps);
    for (double t : {0.0, 0.3, 1.0, 2.5, -1.2}) {
      EXPECT_NEAR(f.conformal_time(t), conformal_oracle(eps, t), 1e-10) << eps << " " << t;
    }
    EXPECT_DOUBLE_EQ(f.scale_factor(2.0), 1.0 + 4.0 * eps);
  }
}

TEST(Spacetime, FlrwConeNarrowsWithExpansion) {
  const SpacetimeModel f = SpacetimeModel::flrw(1.0);
  const double reach = conformal_oracle(1.0, 2.0) - conformal_oracle(1.0, 1.0);
  EXPECT_TRUE(causally_precedes(f, {1, 0}, {2, reach - 1e-9}));
  EXPECT_FALSE(causally_precedes(f, {1, 0}, {2, reach + 1e-9}));
  EXPECT_LT(reach, 1.0);
}

TEST(Spacetime, TemporalFunctions) {
  const TemporalFunction b = TemporalFunction::boost(0.6);
  EXPECT_DOUBLE_EQ(b({1.0, 0.0}), 1.25);
  EXPECT_NEAR(b({1.0, 1.0}), 0.4 / 0.8, 1e-15);
  const auto g = b.gradient({0, 0});
  EXPECT_NEAR(g[0], 1.25, 1e-15);
  EXPECT_NEAR(g[1], -0.75, 1e-15);
  const TemporalFunction s = TemporalFunction::sheared(0.5);
  EXPECT_NEAR(s({1.0, 2.0}), 1.0 + 0.5 * std::tanh(2.0), 1e-15);
  EXPECT_TRUE(b.valid_on(SpacetimeModel::minkowski()));
  EXPECT_FALSE(b.valid_on(SpacetimeModel::cylinder()));
  EXPECT_THROW(b.require_valid_on(SpacetimeModel::flrw(0.1)), DomainError);
  EXPECT_THROW(TemporalFunction::boost(1.0), InputError);
  EXPECT_THROW(TemporalFunction::sheared(1.5), InputError);
}

TEST(Spacetime, TemporalFunctionsIncreaseAlongCausalDirections) {
  const TemporalFunction frames[] = {TemporalFunction::canonical(), TemporalFunction::boost(0.9),
                                     TemporalFunction::sheared(0.99)};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& f : frames) {
    for (int i = 0; i < 300; ++i) {
      const Event p{u(rng), 3 * u(rng)};
      const double v = u(rng);
      const auto g = f.gradient(p);
      EXPECT_GT(g[0] + g[1] * v, 0.0) << f.id();
    }
  }
}

TEST(Spacetime, ConnectingCurveAndInterpolation) {
  const SpacetimeModel m = SpacetimeModel::minkowski();
  const std::vector<double> grid{0.0, 0.25, 0.5, 1.0};
  const CausalCurve c = connecting_causal_curve(m, {0, 0}, {1, 0.5}, grid);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_DOUBLE_EQ(c.points[2].x, 0.25);
  EXPECT_THROW(connecting_causal_curve(m, {0, 0}, {1, 2}, grid), DomainError);
  const SpacetimeModel cyl = SpacetimeModel::cylinder();
  const Event mid = interpolate_segment(cyl, {0, 0.1}, {0.4, kTwoPi - 0.1}, 0.2);
  EXPECT_NEAR(mid.x, 0.0, 1e-12);
}

TEST(Spacetime, SpeedBoundAndEmbedding) {
  const SpacetimeModel m = SpacetimeModel::minkowski();
  EXPECT_DOUBLE_EQ(speed_bound(m, {0, 0}), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(metric_speed(m, {0, 0}, 1.0), std::sqrt(2.0));
  const SpacetimeModel f = SpacetimeModel::flrw(1.0);
  // A null tangent at t = 1 has dx/dt = 1/a = 1/2, so |gamma'|_h = sqrt(2).
  EXPECT_NEAR(metric_speed(f, {1, 0}, 0.5), std::sqrt(2.0), 1e-15);
  const SpacetimeModel c = SpacetimeModel::cylinder();
  EXPECT_EQ(embedding_dimension(c), 3u);
  EXPECT_EQ(embedding_dimension(m), 2u);
  const EmbeddedPoint e = embed(c, {2.0, kPi / 2});
  EXPECT_NEAR(e[1], 0.0, 1e-15);
  EXPECT_NEAR(e[2], 1.0, 1e-15);
  EXPECT_NEAR(embedded_distance(embed(c, {0, 0}), embed(c, {0, kPi})), 2.0, 1e-15);
}

TEST(Spacetime, FutureOfSet) {
  const SpacetimeModel m = SpacetimeModel::minkowski();
  const std::vector<Event> k{{0, -1}, {0, 1}};
  EXPECT_TRUE(in_causal_future_of_set(m, k, {0.5, 1.4}));
  EXPECT_FALSE(in_causal_future_of_set(m, k, {0.5, 0.0}));
  EXPECT_THROW(in_causal_future_of_set(m, std::vector<Event>{}, {0, 0}), DomainError);
}
