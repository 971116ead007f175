#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "causevo/curve_measures.hpp"
#include "causevo/vector_field.hpp"

namespace causevo {

/// [max over curves of T_B(start), min over curves of T_B(end)]: the T_B
/// window every curve covers. DomainError if T_B is invalid on the model or
/// the window is empty.
std::pair<double, double> common_frame_range(const SpacetimeModel& model, const CurveMeasure& sigma,
                                             const TemporalFunction& frame);

/// Uniform grid on the common range with spacing at most `step`.
std::vector<double> uniform_frame_grid(const SpacetimeModel& model, const CurveMeasure& sigma,
                                       const TemporalFunction& frame, double step);

/// T_B values of every sample of every curve inside the common range, plus
/// its endpoints, sorted with values closer than 1e-12 merged. Reparametrized
/// curves keep their original vertices on this grid.
std::vector<double> vertex_preserving_grid(const SpacetimeModel& model, const CurveMeasure& sigma,
                                           const TemporalFunction& frame);

/// Curve-by-curve reparametrization to `frame` on `grid`; weights unchanged.
CurveMeasure transform_sigma(const SpacetimeModel& model, const CurveMeasure& sigma, const TemporalFunction& frame,
                             std::span<const double> grid);

/// The evolution (ev_t)# sigma on sigma's grid and frame.
Evolution evolution_from_sigma(const SpacetimeModel& model, const CurveMeasure& sigma);

/// eta_B = (X_A T_B) eta_A and X_B = X_A / (X_A T_B), atom by atom.
struct EtaFieldTransform {
  std::vector<std::vector<double>> clock_rate;  // X_A T_B
  std::vector<FieldEvaluation> fields;          // X_B Psi
};

/// Throws DomainError at the first atom with X_A T_B <= 0.
EtaFieldTransform transform_eta_and_field(const FieldBuilder& frame_a, const TemporalFunction& frame_b,
                                          std::span<const FieldEvaluation> fields_a);

/// max over atoms of |X_B T_B - 1| computed from frame B's own field.
double clock_residual_in_frame(const FieldBuilder& frame_b);

struct CurrentPair {
  std::string psi_id;
  std::string phi_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double discrepancy = 0.0;
};

struct CurrentCheck {
  double worst = 0.0;
  std::vector<CurrentPair> pairs;
};

/// int X_A Psi phi d eta_A against int X_B Psi phi d eta_B; discrepancy
/// |L - R| / (|L| + |R| + 1e-12).
CurrentCheck invariant_current_check(const FieldBuilder& frame_a, const FieldBuilder& frame_b,
                                     std::span<const TestFunction> psis, std::span<const TestFunction> phis);

/// Slice T_B = tau obtained from the curves' crossings, weights w_gamma.
SliceMeasure disintegrate_eta(const SpacetimeModel& model, const CurveMeasure& sigma, const TemporalFunction& frame,
                              double tau);

/// Image of a curve resampled in canonical time.
struct WorldlineAtom {
  CausalCurve image;
  Rational weight;
};

struct WorldlineMeasure {
  std::vector<WorldlineAtom> atoms;
};

/// Maps each curve to its image sampled at the canonical times
/// {start} + h Z + {end} (restricted to `window` when given) and merges
/// images that agree within 1e-9.
WorldlineMeasure deparametrize(const SpacetimeModel& model, const CurveMeasure& sigma, double spacing,
                               std::optional<std::pair<double, double>> window = std::nullopt);

/// Largest coordinate difference between matching atoms; infinity if the
/// atom structure or the weights differ.
double worldline_distance(const WorldlineMeasure& first, const WorldlineMeasure& second);

}  // namespace causevo
