#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "causevo/curve_measures.hpp"
#include "causevo/slice_measures.hpp"
#include "causevo/test_functions.hpp"

namespace causevo::fixtures {

/// Steps on [0, 2pi] giving dt just below 1e-3 and divisible by 8.
inline constexpr std::size_t kExample1Steps = 6288;

/// Smallest multiple of 8 with 2pi / steps <= dt.
std::size_t example1_steps_for(double dt);

/// gamma(t) = (t, 0.3 sin t) on Minkowski.
Event example1_point(double t);
std::vector<double> example1_grid(std::size_t steps);
/// Dirac evolution mu_t = delta_gamma(t) on [0, 2pi].
Evolution example1_evolution(std::size_t steps = kExample1Steps);
/// sigma = delta of the sampled gamma.
CurveMeasure example1_sigma(std::size_t steps = kExample1Steps);
/// Five bumps centred on gamma in the interior of [0, 2pi].
std::vector<TestFunction> example1_bumps();

struct RotatingFamily {
  Evolution evolution;
  CurveMeasure sigma;
};

/// Uniform measure on `atoms` angles 2 pi j / atoms of the cylinder, moved by
/// the rotating curves theta + drift t on the grid k 2pi/steps of [0, 2pi].
/// drift * atoms / steps must be an integer, which keeps every sample on the
/// angle lattice and the evolution independent of the drift.
RotatingFamily example2(double drift, std::size_t atoms = 64, std::size_t steps = 32);
/// The same curves lifted to Minkowski (x = theta + drift t, unwrapped).
RotatingFamily example2_lift(double drift, std::size_t atoms = 64, std::size_t steps = 32);
/// Bumps on the cylinder away from the boundary slices.
std::vector<TestFunction> example2_bumps();

/// Random causal curve on `grid` (canonical frame): steps of spatial speed
/// uniform in [-max_speed, max_speed] in the cone chart, about one in ten
/// exactly null.
CausalCurve random_causal_curve(const SpacetimeModel& model, std::mt19937_64& rng, std::span<const double> grid,
                                double max_speed = 1.0);

/// Slices at t = 0 and t = 1 on Minkowski with 1..max_atoms atoms at x in
/// (1/8) Z and small integer weights.
std::pair<SliceMeasure, SliceMeasure> random_slice_pair(std::mt19937_64& rng, std::size_t max_atoms = 6);

struct RandomEvolution {
  Evolution evolution;
  CurveMeasure sigma;
};

/// Causal evolution on `steps` equal steps of [0, 1] (Minkowski) pushed
/// forward from 1..max_curves random curves with dyadic coordinates, so all
/// values are exact in binary.
RandomEvolution random_causal_evolution(std::mt19937_64& rng, std::size_t steps = 4, std::size_t max_curves = 8);

}  // namespace causevo::fixtures
