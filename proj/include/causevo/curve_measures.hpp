#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "causevo/causal_curves.hpp"
#include "causevo/rational.hpp"
#include "causevo/slice_measures.hpp"

namespace causevo {

struct CurveAtom {
  CausalCurve curve;
  Rational weight;

  friend bool operator==(const CurveAtom&, const CurveAtom&) = default;
};

/// Finite weighted family of causal curves on [a, b], all sampled on one
/// common grid in one frame. Atoms are kept sorted by their sample arrays
/// with identical curves merged.
struct CurveMeasure {
  double a = 0.0;
  double b = 0.0;
  std::vector<CurveAtom> atoms;

  static CurveMeasure make(double a, double b, std::vector<CurveAtom> atoms);

  const std::vector<double>& grid() const { return atoms.front().curve.times; }
  const TemporalFunction& frame() const { return atoms.front().curve.frame; }
  Rational total_mass() const;

  friend bool operator==(const CurveMeasure&, const CurveMeasure&) = default;
};

/// Throws InputError unless the mass is one, every curve is valid on the
/// model and all curves share the grid from a to b and the frame.
void validate_curve_measure(const SpacetimeModel& model, const CurveMeasure& sigma,
                            double slack = kDefaultCausalSlack);

/// Index of t in the common grid; DomainError when t is not a grid time.
std::size_t grid_index(const CurveMeasure& sigma, double t);

/// (ev_t)# sigma.
SliceMeasure pushforward_eval(const CurveMeasure& sigma, double t);

/// (ev_s, ev_t)# sigma as a coupling of the two pushforwards.
Coupling joint_pushforward(const CurveMeasure& sigma, double s, double t);

/// sigma1 on [a,b] followed by sigma2 on [b,c], pairing curves through each
/// shared event q with weight u v / m(q). DomainError if the marginals at b
/// differ.
CurveMeasure concatenate_curve_measures(const CurveMeasure& first, const CurveMeasure& second);

/// Left-to-right concatenation of a chain, evaluated as a balanced tree.
CurveMeasure concatenate_chain(std::span<const CurveMeasure> chain);

/// Lifts a causal coupling to a curve measure on `grid` through connecting
/// curves (canonical frame).
CurveMeasure lift_coupling(const SpacetimeModel& model, const Coupling& coupling, std::span<const double> grid);

/// Couples consecutive slices at the chosen grid indices by min-cost causal
/// couplings, lifts each to connecting curves on the evolution grid between
/// the nodes and concatenates. Node 0 and the last grid index must be
/// included. Throws DomainError naming the failing step.
CurveMeasure chain_construct_sigma(const Evolution& ev, std::span<const std::size_t> nodes);

/// chain_construct_sigma at the dyadic times a + i (b-a)/2^n. The evolution
/// grid must contain those times exactly.
CurveMeasure dyadic_construct_sigma(const Evolution& ev, unsigned level);

/// Grid indices of the dyadic times of `level` (DomainError if missing).
std::vector<std::size_t> dyadic_indices(const Evolution& ev, unsigned level);

/// 1-Wasserstein distance with uniform_distance on [a,b] as ground cost,
/// solved exactly as a transport problem.
double wasserstein_curve_distance(const SpacetimeModel& model, const CurveMeasure& first,
                                  const CurveMeasure& second, double a, double b);

/// Extends every curve by rest curves on `before` (ending at sigma.a) and
/// `after` (starting at sigma.b). Canonical frame only.
CurveMeasure pad_with_rest_curves(const CurveMeasure& sigma, std::span<const double> before,
                                  std::span<const double> after);

}  // namespace causevo
