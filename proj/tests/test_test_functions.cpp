#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "causevo/error.hpp"
#include "causevo/fixtures.hpp"
#include "causevo/test_functions.hpp"

using namespace causevo;

namespace {

const SpacetimeModel kMink = SpacetimeModel::minkowski();

void expect_gradient_matches(const TestFunction& f, const Event& p, double tol) {
  const double h = 1e-6;
  const Gradient g = f.gradient(p);
  const double dt = (f({p.t + h, p.x}) - f({p.t - h, p.x})) / (2 * h);
  const double dx = (f({p.t, p.x + h}) - f({p.t, p.x - h})) / (2 * h);
  EXPECT_NEAR(g[0], dt, tol) << f.id;
  EXPECT_NEAR(g[1], dx, tol) << f.id;
}

}  // namespace

TEST(Bump, ProfileValues) {
  EXPECT_DOUBLE_EQ(bump_profile(0.0), std::exp(-1.0));
  EXPECT_EQ(bump_profile(1.0), 0.0);
  EXPECT_EQ(bump_profile(-1.5), 0.0);
  EXPECT_NEAR(bump_profile(0.5), std::exp(-1.0 / 0.75), 1e-16);
  const double h = 1e-6;
  for (double u : {-0.9, -0.3, 0.2, 0.7}) {
    EXPECT_NEAR(bump_profile_derivative(u), (bump_profile(u + h) - bump_profile(u - h)) / (2 * h), 1e-8);
  }
}

TEST(Bump, GradientsMatchFiniteDifferences) {
  const TestFunction b = make_bump(kMink, {1.0, 0.5}, 0.7, 0.6);
  for (const Event& p : {Event{1.2, 0.6}, Event{0.6, 0.2}, Event{1.5, 0.9}}) expect_gradient_matches(b, p, 1e-7);
  EXPECT_EQ(b({2.0, 0.5}), 0.0);
  const TestFunction c = make_bump(SpacetimeModel::cylinder(), {1.0, 0.1}, 0.5, 0.5);
  EXPECT_GT(c({1.0, kTwoPi - 0.1}), 0.0);
  EXPECT_NEAR(c({1.0, kTwoPi - 0.1}), c({1.0, 0.3}), 1e-15);
  EXPECT_THROW(make_bump(SpacetimeModel::cylinder(), {1.0, 0.0}, 0.5, 3.5), DomainError);
}

TEST(Battery, NullCoordinatesAndProducts) {
  for (const TestFunction& f : {null_coord_minus(), null_coord_plus(), time_only(), make_spatial_coordinate(),
                                make_temporal(TemporalFunction::boost(0.4))}) {
    expect_gradient_matches(f, {0.3, -0.2}, 1e-8);
  }
  const TestFunction p = product(make_bump(kMink, {0, 0}, 1, 1), make_spatial_coordinate());
  expect_gradient_matches(p, {0.2, 0.3}, 1e-8);
  EXPECT_DOUBLE_EQ(make_constant(2.5)({7, 7}), 2.5);
}

TEST(Battery, PhiN) {
  EXPECT_EQ(phi_n(2, 0.0), 0.0);
  EXPECT_EQ(phi_n(2, -1.0), 0.0);
  EXPECT_NEAR(phi_n(2, 0.5), std::exp(-1.0), 1e-16);
  EXPECT_LT(phi_n(4, 0.5), phi_n(1, 0.5) + 1.0);
}

TEST(Battery, CausalFunctionsIncreaseAlongCausalCurves) {
  std::mt19937_64 rng(21);
  std::vector<double> grid;
  for (int k = 0; k <= 40; ++k) grid.push_back(k / 20.0);
  for (const SpacetimeModel& m :
       {SpacetimeModel::minkowski(), SpacetimeModel::cylinder(), SpacetimeModel::flrw(0.5)}) {
    const std::vector<Event> seeds{m.normalize({0.0, 0.3}), m.normalize({0.0, -0.4})};
    const int ns[] = {1, 3};
    const auto battery = causal_battery(m, seeds, ns);
    EXPECT_EQ(battery.size(), (m.kind() == ModelKind::Minkowski ? 3u : 1u) + 2u);
    for (int i = 0; i < 50; ++i) {
      const CausalCurve c = fixtures::random_causal_curve(m, rng, grid);
      for (const TestFunction& f : battery) EXPECT_TRUE(is_causal_along(f, c)) << f.id << " " << to_string(m.kind());
    }
  }
}

TEST(Battery, ConeSurrogateVanishesOutsideFuture) {
  const TestFunction f = cone_surrogate(kMink, {{0, 0}});
  EXPECT_DOUBLE_EQ(f({1, 0.25}), 0.75);
  EXPECT_LT(f({1, 2}), 0.0);
  EXPECT_EQ(phi_n_of(2, f)({1, 2}), 0.0);
  EXPECT_NEAR(f({1, 1}), 0.0, 1e-15);
}

TEST(Compose, ChecksArityAndZero) {
  const TestFunction a = make_bump(kMink, {0, 0}, 1, 1), b = make_bump(kMink, {0.2, 0}, 1, 1);
  const TestFunction pair[] = {a, b};
  const TestFunction ab = compose(leibniz_product(), pair);
  EXPECT_NEAR(ab({0.1, 0.1}), a({0.1, 0.1}) * b({0.1, 0.1}), 1e-16);
  const TestFunction one[] = {a};
  EXPECT_THROW(compose(leibniz_product(), one), DomainError);
  OuterFunction shifted = square();
  shifted.value = [](std::span<const double> v) { return v[0] * v[0] + 1.0; };
  EXPECT_THROW(compose(shifted, one), DomainError);
  EXPECT_NEAR(compose(slot(2, 1), pair)({0.1, 0.1}), b({0.1, 0.1}), 1e-16);
}

TEST(Partition, SumsToOneInside) {
  const PartitionOfUnity pu(TemporalFunction::canonical(), 0.0, 2.0, 5);
  EXPECT_EQ(pu.pieces().size(), 5u);
  for (double t = 0.35; t < 1.65; t += 0.05) {
    EXPECT_NEAR(pu.sum({t, 0.0}), 1.0, 1e-12) << t;
    EXPECT_TRUE(pu.covers({t, 0.0}));
  }
  EXPECT_FALSE(pu.covers({-0.1, 0.0}));
  EXPECT_EQ(pu.sum({2.5, 0.0}), 0.0);
  for (const TestFunction& piece : pu.pieces()) {
    EXPECT_GE(piece({1.0, 0.0}), 0.0);
    EXPECT_EQ(piece({0.0, 0.0}), 0.0);
  }
}
