#include "causevo/fixtures.hpp"

#include <cmath>
#include <sstream>

namespace causevo::fixtures {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

long long uniform_int(std::mt19937_64& rng, long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

std::vector<double> two_pi_grid(std::size_t steps) {
  std::vector<double> grid(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) grid[k] = kTwoPi * static_cast<double>(k) / static_cast<double>(steps);
  return grid;
}

RotatingFamily rotating(const SpacetimeModel& model, double drift, std::size_t atoms, std::size_t steps) {
  if (atoms == 0 || steps == 0) throw DomainError("rotating family needs atoms and steps");
  const double shift_real = drift * static_cast<double>(atoms) / static_cast<double>(steps);
  const auto shift = static_cast<long long>(std::llround(shift_real));
  if (std::abs(shift_real - static_cast<double>(shift)) > 1e-12) {
    std::ostringstream os;
    os << "drift " << drift << " does not map the " << atoms << "-angle lattice to itself in one of " << steps
       << " steps";
    throw DomainError(os.str());
  }
  const std::vector<double> grid = two_pi_grid(steps);
  const auto n = static_cast<long long>(atoms);
  const bool wrap = model.kind() == ModelKind::Cylinder;
  std::vector<CurveAtom> curves;
  for (long long j = 0; j < n; ++j) {
    CausalCurve c;
    c.times = grid;
    for (std::size_t k = 0; k <= steps; ++k) {
      long long idx = j + shift * static_cast<long long>(k);
      if (wrap) idx = ((idx % n) + n) % n;
      c.points.push_back({grid[k], kTwoPi * static_cast<double>(idx) / static_cast<double>(atoms)});
    }
    curves.push_back({std::move(c), Rational(1, n)});
  }
  RotatingFamily out;
  out.sigma = CurveMeasure::make(grid.front(), grid.back(), std::move(curves));
  out.evolution.model = model;
  out.evolution.times = grid;
  for (double t : grid) out.evolution.slices.push_back(pushforward_eval(out.sigma, t));
  return out;
}

}  // namespace

std::size_t example1_steps_for(double dt) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  auto steps = static_cast<std::size_t>(std::ceil(kTwoPi / dt));
  steps = (steps + 7) / 8 * 8;
  return steps;
}

Event example1_point(double t) { return {t, 0.3 * std::sin(t)}; }

std::vector<double> example1_grid(std::size_t steps) { return two_pi_grid(steps); }

Evolution example1_evolution(std::size_t steps) {
  Evolution ev;
  ev.model = SpacetimeModel::minkowski();
  ev.times = example1_grid(steps);
  for (double t : ev.times) ev.slices.push_back(SliceMeasure::make(t, {{example1_point(t), Rational(1)}}));
  return ev;
}

CurveMeasure example1_sigma(std::size_t steps) {
  CausalCurve c;
  c.times = example1_grid(steps);
  for (double t : c.times) c.points.push_back(example1_point(t));
  const double b = c.times.back();
  return CurveMeasure::make(0.0, b, {{std::move(c), Rational(1)}});
}

std::vector<TestFunction> example1_bumps() {
  const SpacetimeModel m = SpacetimeModel::minkowski();
  std::vector<TestFunction> out;
  const double centers[5] = {1.0, 2.1, 3.1, 4.2, 5.2};
  const double offsets[5] = {0.05, -0.1, 0.0, 0.1, -0.05};
  for (int i = 0; i < 5; ++i) {
    const Event c = example1_point(centers[i]);
    out.push_back(make_bump(m, {c.t, c.x + offsets[i]}, 0.7, 0.6));
  }
  return out;
}

RotatingFamily example2(double drift, std::size_t atoms, std::size_t steps) {
  return rotating(SpacetimeModel::cylinder(), drift, atoms, steps);
}

RotatingFamily example2_lift(double drift, std::size_t atoms, std::size_t steps) {
  return rotating(SpacetimeModel::minkowski(), drift, atoms, steps);
}

std::vector<TestFunction> example2_bumps() {
  const SpacetimeModel m = SpacetimeModel::cylinder();
  return {make_bump(m, {1.8, 1.0}, 1.1, 1.2), make_bump(m, {3.1, 3.0}, 1.2, 1.4),
          make_bump(m, {4.4, 5.5}, 1.1, 1.0)};
}

CausalCurve random_causal_curve(const SpacetimeModel& model, std::mt19937_64& rng, std::span<const double> grid,
                                double max_speed) {
  CausalCurve c;
  c.times.assign(grid.begin(), grid.end());
  double x = model.kind() == ModelKind::Cylinder ? uniform(rng, 0.0, kTwoPi) : uniform(rng, -1.0, 1.0);
  c.points.push_back(model.normalize({grid.front(), x}));
  for (std::size_t k = 1; k < grid.size(); ++k) {
    double v = uniform(rng, -max_speed, max_speed);
    if (uniform_int(rng, 0, 9) == 0) v = v < 0 ? -max_speed : max_speed;
    const double span = model.conformal_time(grid[k]) - model.conformal_time(grid[k - 1]);
    x += v * span;
    c.points.push_back(model.normalize({grid[k], x}));
  }
  return c;
}

std::pair<SliceMeasure, SliceMeasure> random_slice_pair(std::mt19937_64& rng, std::size_t max_atoms) {
  auto slice = [&](double t, long long reach) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<long long>(max_atoms)));
    std::vector<Atom> atoms;
    std::vector<long long> w;
    long long total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      w.push_back(uniform_int(rng, 1, 5));
      total += w.back();
    }
    for (std::size_t i = 0; i < n; ++i) {
      atoms.push_back({{t, static_cast<double>(uniform_int(rng, -reach, reach)) / 8.0}, Rational(w[i], total)});
    }
    return SliceMeasure::make(t, std::move(atoms));
  };
  SliceMeasure mu = slice(0.0, 8);
  SliceMeasure nu = slice(1.0, 14);
  return {std::move(mu), std::move(nu)};
}

RandomEvolution random_causal_evolution(std::mt19937_64& rng, std::size_t steps, std::size_t max_curves) {
  std::vector<double> grid(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) grid[k] = static_cast<double>(k) / static_cast<double>(steps);
  const auto n = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<long long>(max_curves)));
  std::vector<long long> w;
  long long total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    w.push_back(uniform_int(rng, 1, 4));
    total += w.back();
  }
  // Steps of at most dt in (dt/4) Z keep every coordinate dyadic.
  const double quarter = 0.25 / static_cast<double>(steps);
  std::vector<CurveAtom> curves;
  for (std::size_t i = 0; i < n; ++i) {
    CausalCurve c;
    c.times = grid;
    double x = static_cast<double>(uniform_int(rng, -8, 8)) / 8.0;
    c.points.push_back({grid[0], x});
    for (std::size_t k = 1; k <= steps; ++k) {
      x += quarter * static_cast<double>(uniform_int(rng, -4, 4));
      c.points.push_back({grid[k], x});
    }
    curves.push_back({std::move(c), Rational(w[i], total)});
  }
  RandomEvolution out;
  out.sigma = CurveMeasure::make(0.0, 1.0, std::move(curves));
  out.evolution.model = SpacetimeModel::minkowski();
  out.evolution.times = grid;
  for (double t : grid) out.evolution.slices.push_back(pushforward_eval(out.sigma, t));
  return out;
}

}  // namespace causevo::fixtures
