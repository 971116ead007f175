#include <gtest/gtest.h>

#include <random>

#include "causevo/fixtures.hpp"
#include "causevo/flow.hpp"
#include "causevo/slice_measures.hpp"
#include "lp_oracle.hpp"

using namespace causevo;

namespace {

const SpacetimeModel kMink = SpacetimeModel::minkowski();

SliceMeasure slice(double t, std::vector<std::pair<double, Rational>> atoms) {
  std::vector<Atom> out;
  for (auto& [x, w] : atoms) out.push_back({{t, x}, w});
  return SliceMeasure::make(t, std::move(out));
}

// Transport polytope restricted to causal cells, decided by the simplex oracle.
bool lp_feasible(const SpacetimeModel& model, const SliceMeasure& mu, const SliceMeasure& nu) {
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    for (std::size_t j = 0; j < nu.atoms.size(); ++j) {
      const double dt = nu.atoms[j].event.t - mu.atoms[i].event.t;
      if (dt >= model.spatial_separation(mu.atoms[i].event.x, nu.atoms[j].event.x)) cells.push_back({i, j});
    }
  }
  const std::size_t rows = mu.atoms.size() + nu.atoms.size();
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cells.size()));
  std::vector<Rational> b(rows);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    a[cells[c].first][c] = 1;
    a[mu.atoms.size() + cells[c].second][c] = 1;
  }
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) b[i] = mu.atoms[i].weight;
  for (std::size_t j = 0; j < nu.atoms.size(); ++j) b[mu.atoms.size() + j] = nu.atoms[j].weight;
  return lp_oracle::feasible(a, b);
}

}  // namespace

TEST(SliceMeasure, MakeSortsAndMerges) {
  const SliceMeasure s = slice(0, {{1.0, Rational(1, 4)}, {-1.0, Rational(1, 4)}, {1.0, Rational(1, 2)}});
  ASSERT_EQ(s.atoms.size(), 2u);
  EXPECT_EQ(s.atoms[0].event.x, -1.0);
  EXPECT_EQ(s.atoms[1].weight, Rational(3, 4));
  EXPECT_EQ(s.total_mass(), 1);
  EXPECT_EQ(s.mass_of({0, 1.0}), Rational(3, 4));
  EXPECT_EQ(s.mass_of({0, 2.0}), 0);
  EXPECT_FALSE(s.index_of({0, 0.5}).has_value());
}

TEST(SliceMeasure, ValidateSlice) {
  EXPECT_NO_THROW(validate_slice(kMink, TemporalFunction::canonical(), slice(0, {{0, Rational(1)}})));
  EXPECT_THROW(validate_slice(kMink, TemporalFunction::canonical(), slice(0, {{0, Rational(1, 2)}})), InputError);
  SliceMeasure off = slice(0, {{0, Rational(1)}});
  off.atoms[0].event.t = 0.1;
  EXPECT_THROW(validate_slice(kMink, TemporalFunction::canonical(), off), InputError);
  // On the boost slice T_B = 0.
  const TemporalFunction b = TemporalFunction::boost(0.5);
  SliceMeasure tilted;
  tilted.time = 0.0;
  tilted.atoms = {{{0.5, 1.0}, Rational(1)}};
  EXPECT_NO_THROW(validate_slice(kMink, b, tilted));
}

TEST(Flow, DinicOnSmallNetwork) {
  FlowNetwork<long long> net(4);
  net.add_edge(0, 1, 3);
  net.add_edge(0, 2, 2);
  net.add_edge(1, 2, 5);
  net.add_edge(1, 3, 2);
  net.add_edge(2, 3, 3);
  EXPECT_EQ(net.max_flow(0, 3), 5);
  const auto cut = net.residual_reachable(0);
  EXPECT_TRUE(cut[0]);
  EXPECT_FALSE(cut[3]);
}

TEST(Flow, MinCostPrefersCheaperPath) {
  FlowNetwork<long long> net(4);
  const auto cheap = net.add_edge(0, 1, 1, 1.0);
  net.add_edge(0, 2, 1, 5.0);
  net.add_edge(1, 3, 1, 0.0);
  net.add_edge(2, 3, 1, 0.0);
  const auto [sent, cost] = net.min_cost_flow(0, 3, 1);
  EXPECT_EQ(sent, 1);
  EXPECT_DOUBLE_EQ(cost, 1.0);
  EXPECT_EQ(net.flow_on(cheap), 1);
}

TEST(Feasibility, DiracPairs) {
  const SliceMeasure mu = slice(0, {{0, Rational(1)}});
  EXPECT_TRUE(causal_coupling_feasible(kMink, mu, slice(1, {{1, Rational(1)}})));
  EXPECT_FALSE(causal_coupling_feasible(kMink, mu, slice(1, {{2, Rational(1)}})));
  EXPECT_THROW(causal_coupling_feasible(kMink, slice(1, {{0, Rational(1)}}), mu), DomainError);
  EXPECT_THROW(causal_coupling_feasible(kMink, slice(0, {{0, Rational(1, 2)}}), mu), InputError);
}

TEST(Feasibility, SplittingMassNeedsBothTargets) {
  const SliceMeasure mu = slice(0, {{-1, Rational(1, 2)}, {1, Rational(1, 2)}});
  const SliceMeasure nu = slice(1, {{-2, Rational(1, 3)}, {0, Rational(2, 3)}});
  EXPECT_TRUE(causal_coupling_feasible(kMink, mu, nu));
  const Coupling c = find_causal_coupling(kMink, mu, nu);
  EXPECT_TRUE(validate_coupling(kMink, c).valid);
  // The atom at +1 can only reach 0, which holds 2/3.
  const SliceMeasure nu2 = slice(1, {{-2, Rational(2, 3)}, {0, Rational(1, 3)}});
  EXPECT_FALSE(causal_coupling_feasible(kMink, mu, nu2));
  try {
    find_causal_coupling(kMink, mu, nu2);
    FAIL() << "expected InfeasibleCouplingError";
  } catch (const InfeasibleCouplingError& e) {
    EXPECT_GT(e.source_mass(), e.target_mass());
    EXPECT_EQ(e.source_mass(), upset_mass(kMink, mu, e.certificate()));
    EXPECT_EQ(e.target_mass(), upset_mass(kMink, nu2, e.certificate()));
  }
}

TEST(Feasibility, AgreesWithSimplexOracleAndUpsets) {
  std::mt19937_64 rng(99);
  int infeasible = 0;
  for (int i = 0; i < 150; ++i) {
    const auto [mu, nu] = fixtures::random_slice_pair(rng, 5);
    const bool flow = causal_coupling_feasible(kMink, mu, nu);
    EXPECT_EQ(flow, lp_feasible(kMink, mu, nu)) << i;
    const auto family = all_subsets_family(mu);
    EXPECT_EQ(flow, upset_characterization_check(kMink, mu, nu, family).holds) << i;
    FeasibilityOptions fl;
    fl.arithmetic = Arithmetic::Float;
    EXPECT_EQ(flow, causal_coupling_feasible(kMink, mu, nu, fl)) << i;
    if (flow) {
      const Coupling c = find_causal_coupling(kMink, mu, nu);
      EXPECT_TRUE(validate_coupling(kMink, c).valid) << validate_coupling(kMink, c).reason;
    } else {
      ++infeasible;
    }
  }
  EXPECT_GT(infeasible, 10);
}

TEST(Feasibility, CylinderWrapsAround) {
  const SpacetimeModel cyl = SpacetimeModel::cylinder();
  const SliceMeasure mu = slice(0, {{0.1, Rational(1)}});
  EXPECT_TRUE(causal_coupling_feasible(cyl, mu, slice(0.3, {{kTwoPi - 0.1, Rational(1)}})));
  EXPECT_FALSE(causal_coupling_feasible(kMink, mu, slice(0.3, {{kTwoPi - 0.1, Rational(1)}})));
}

TEST(Coupling, ValidationCatchesEachDefect) {
  const SliceMeasure mu = slice(0, {{0, Rational(1)}});
  const SliceMeasure nu = slice(1, {{0.5, Rational(1, 2)}, {-0.5, Rational(1, 2)}});
  Coupling c{mu, nu, {{{0, 0}, Rational(1, 2)}, {{0, 1}, Rational(1, 2)}}};
  EXPECT_TRUE(validate_coupling(kMink, c).valid);
  Coupling wrong_marginal = c;
  wrong_marginal.mass[{0, 0}] = Rational(1, 3);
  EXPECT_FALSE(validate_coupling(kMink, wrong_marginal).valid);
  const SliceMeasure far = slice(1, {{3, Rational(1, 2)}, {-0.5, Rational(1, 2)}});
  Coupling acausal{mu, far, c.mass};
  EXPECT_FALSE(validate_coupling(kMink, acausal).valid);
}

TEST(Coupling, ComposeGluesThroughMiddle) {
  const SliceMeasure mu = slice(0, {{0, Rational(1)}});
  const SliceMeasure nu = slice(1, {{-0.5, Rational(1, 2)}, {0.5, Rational(1, 2)}});
  const SliceMeasure rho = slice(2, {{-1, Rational(1, 2)}, {1, Rational(1, 2)}});
  const Coupling a = find_causal_coupling(kMink, mu, nu);
  const Coupling b = find_causal_coupling(kMink, nu, rho);
  const Coupling ab = compose_couplings(a, b);
  EXPECT_TRUE(validate_coupling(kMink, ab).valid);
  EXPECT_EQ(ab.source, mu);
  EXPECT_EQ(ab.target, rho);
}

TEST(Coupling, MinCostPicksStraightLines) {
  const SliceMeasure mu = slice(0, {{-0.5, Rational(1, 2)}, {0.5, Rational(1, 2)}});
  const SliceMeasure nu = slice(1, {{-0.5, Rational(1, 2)}, {0.5, Rational(1, 2)}});
  const Coupling c = find_causal_coupling(kMink, mu, nu);
  EXPECT_EQ(c.mass.size(), 2u);
  EXPECT_EQ(c.mass.at({0, 0}), Rational(1, 2));
  EXPECT_NEAR(c.cost(kMink), 1.0, 1e-15);
}

TEST(Evolution, CausalityCheckNamesStep) {
  Evolution ev;
  ev.times = {0, 1, 2};
  ev.slices = {slice(0, {{0, Rational(1)}}), slice(1, {{1, Rational(1)}}), slice(2, {{3, Rational(1)}})};
  const EvolutionCheck check = check_causal_evolution(ev);
  EXPECT_FALSE(check.causal);
  ASSERT_TRUE(check.failing_step.has_value());
  EXPECT_EQ(*check.failing_step, 1u);
  EXPECT_LT(check.certificate_margin, 0);
  ev.slices[2] = slice(2, {{2, Rational(1)}});
  EXPECT_TRUE(is_causal_evolution(ev));
}

TEST(Evolution, ValidationRejectsBadGrids) {
  Evolution ev;
  ev.times = {0, 0};
  ev.slices = {slice(0, {{0, Rational(1)}}), slice(0, {{0, Rational(1)}})};
  EXPECT_THROW(validate_evolution(ev), InputError);
}

TEST(Quadrature, TrapezoidAndEtaIntegral) {
  const std::vector<double> t{0.0, 0.5, 1.0, 2.0};
  const auto w = trapezoid_weights(t);
  EXPECT_DOUBLE_EQ(w[0], 0.25);
  EXPECT_DOUBLE_EQ(w[1], 0.5);
  EXPECT_DOUBLE_EQ(w[2], 0.75);
  EXPECT_DOUBLE_EQ(w[3], 0.5);
  const Evolution ev = fixtures::example1_evolution(64);
  // int_0^{2pi} t dt for a Dirac evolution: exact for the trapezoid rule.
  EXPECT_NEAR(eta_integral(ev, [](const Event& p) { return p.t; }), kTwoPi * kTwoPi / 2, 1e-12);
}
