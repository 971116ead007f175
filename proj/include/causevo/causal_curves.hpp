#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "causevo/spacetime.hpp"

namespace causevo {

/// Causal curve sampled on a strictly increasing parameter grid. The grid is
/// the value of `frame` along the curve: frame(points[k]) == times[k].
/// Between samples the curve follows the model's connecting curve.
struct CausalCurve {
  std::vector<double> times;
  std::vector<Event> points;
  TemporalFunction frame;

  std::size_t size() const { return times.size(); }
  double start() const { return times.front(); }
  double end() const { return times.back(); }

  friend bool operator==(const CausalCurve&, const CausalCurve&) = default;
};

/// Tolerance on frame(points[k]) - times[k] for non-canonical frames.
inline constexpr double kParametrizationTolerance = 1e-9;

struct CurveValidation {
  bool valid = true;
  /// Index k of the first failing sample (for causality: the step k -> k+1).
  std::optional<std::size_t> first_violation;
  std::string reason;
};

CurveValidation validate_curve(const SpacetimeModel& model, const CausalCurve& curve,
                               double slack = kDefaultCausalSlack);

/// dx/dparameter at sample k; central differences inside, one-sided at the
/// ends, angles unwrapped on the cylinder.
double curve_derivative(const SpacetimeModel& model, const CausalCurve& curve, std::size_t k);

/// Event on the curve where its frame equals `s` (s inside [start, end]).
Event evaluate_curve(const SpacetimeModel& model, const CausalCurve& curve, double s);

/// Point on the connecting segment p -> q where `frame` takes value s. The
/// frame must be monotone along the segment with frame(p) <= s <= frame(q).
Event solve_on_segment(const SpacetimeModel& model, const TemporalFunction& frame, const Event& p,
                       const Event& q, double s);

/// gamma o (T_B o gamma)^{-1} sampled on `new_grid`. Throws DomainError when
/// T_B o gamma is not increasing or the grid leaves its range.
CausalCurve reparametrize_curve(const SpacetimeModel& model, const CausalCurve& curve,
                                const TemporalFunction& target, std::span<const double> new_grid);

/// gamma1 on [a,b] followed by gamma2 on [b,c]; endpoints must agree exactly.
CausalCurve concatenate_curves(const CausalCurve& first, const CausalCurve& second);

/// sup over [a,b] of the embedded distance, evaluated on the union of both
/// grids.
double uniform_distance(const SpacetimeModel& model, const CausalCurve& gamma,
                        const CausalCurve& rho, double a, double b);

/// R^N-valued test function on a parameter window, with its derivative.
struct TestVector {
  std::string id;
  std::function<EmbeddedPoint(double)> value;
  std::function<EmbeddedPoint(double)> derivative;
};

/// Constants, linear ramps and one bump per embedding coordinate.
std::vector<TestVector> h1_test_battery(std::size_t dimension, double a, double b);

/// <i o gamma, v>_{H^1[a,b]}: trapezoid quadrature on the curve grid inside
/// [a,b], derivative of i o gamma by finite differences.
double h1_pairing(const SpacetimeModel& model, const CausalCurve& gamma, const TestVector& v,
                  double a, double b);

double h1_pairing_difference(const SpacetimeModel& model, const CausalCurve& gamma,
                             const CausalCurve& rho, const TestVector& v, double a, double b);

}  // namespace causevo
