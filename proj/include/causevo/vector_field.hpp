#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "causevo/curve_measures.hpp"
#include "causevo/slice_measures.hpp"
#include "causevo/test_functions.hpp"

namespace causevo {

/// Values of the field applied to one test function at the atoms of eta:
/// values[k][j] belongs to ev.slices[k].atoms[j]. Atoms with defined[k][j]
/// false carry no value (extension outside the partition window).
struct FieldEvaluation {
  std::string phi_id;
  std::vector<std::vector<double>> values;
  std::vector<std::vector<bool>> defined;
};

/// One line of a residual report.
struct ResidualReport {
  std::string phi_id;
  std::string kind;
  double dt = 0.0;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

/// CSV header and row in the column order phi_id,residual_kind,dt,value,tolerance,pass.
std::string residual_csv_header();
std::string residual_csv_row(const ResidualReport& r);

/// Field of a curve measure on the atoms of its evolution:
///   X Phi(t_k, q) = sum_{gamma(t_k) = q} w (Phi o gamma)'(t_k) / sum w,
/// with (Phi o gamma)' by central differences on the grid (one-sided at the
/// two ends). The constructor checks (ev_t)# sigma = mu_t at every grid time.
class FieldBuilder {
 public:
  FieldBuilder(CurveMeasure sigma, Evolution ev);

  const CurveMeasure& sigma() const { return sigma_; }
  const Evolution& evolution() const { return ev_; }
  /// Largest grid spacing.
  double dt() const { return dt_; }

  FieldEvaluation build(const TestFunction& phi) const;

  /// Sum of X(phi_j Psi) over a partition of unity. Defined at atoms whose
  /// stencil events all lie where the partition sums to one.
  FieldEvaluation extend(const TestFunction& psi, const PartitionOfUnity& partition) const;

  /// Phi evaluated at the atoms.
  std::vector<std::vector<double>> sample(const TestFunction& phi) const;

  /// Curve c passes through ev.slices[k].atoms[atom_index(c, k)].
  std::size_t atom_index(std::size_t curve, std::size_t k) const { return atom_of_[curve][k]; }

 private:
  CurveMeasure sigma_;
  Evolution ev_;
  double dt_ = 0.0;
  std::vector<std::vector<std::size_t>> atom_of_;
  std::vector<std::vector<double>> weights_;  // w_gamma as double, per curve
};

/// Max |Phi| over the atoms; the scale used by first-order tolerances.
double sup_scale(const FieldBuilder& builder, const TestFunction& phi);

/// Throws DomainError unless phi vanishes at every atom of the first three
/// and last three slices.
void require_interior_support(const FieldBuilder& builder, const TestFunction& phi);

/// |int X Phi d eta|; tolerance 10 dt sup|Phi|.
ResidualReport continuity_residual(const FieldBuilder& builder, const TestFunction& phi);

/// max |X(Phi T) - X(Phi) T - Phi| with T the evolution's frame; tolerance 10 dt^2.
ResidualReport clock_normalization_residual(const FieldBuilder& builder, const TestFunction& phi);

/// max |X(Theta(Phi)) - sum_l d_l Theta(Phi) X Phi_l|; tolerance 10 dt^2.
ResidualReport chain_rule_residual(const FieldBuilder& builder, const OuterFunction& theta,
                                   std::span<const TestFunction> phis);

/// min of X(Phi f) - X(Phi) f over the atoms; passes when >= -10 dt sup|Phi|.
/// Throws DomainError if Phi is negative at an atom.
ResidualReport causality_residual(const FieldBuilder& builder, const TestFunction& f, const TestFunction& phi);

/// Lambda(g)(t_k) = sum_q mu_{t_k}(q) g(q).
std::vector<double> lambda_curve(const Evolution& ev, const std::vector<std::vector<double>>& values);

/// max over interior k of |central difference of Lambda(Phi) - Lambda(X Phi)|;
/// tolerance 10 dt sup|Phi|.
ResidualReport lambda_derivative_check(const FieldBuilder& builder, const TestFunction& phi);

/// max |extend(Psi) - build(Psi)| over atoms where the extension is defined,
/// tolerance 10 dt sup|Psi|. With Psi = 1 this is the discrete X(1) = 0.
ResidualReport extension_residual(const FieldBuilder& builder, const TestFunction& psi,
                                  const PartitionOfUnity& partition);

/// Largest |X Phi| at atoms where Phi and its stencil neighbours along every
/// curve through the atom vanish.
double locality_violation(const FieldBuilder& builder, const TestFunction& phi);

}  // namespace causevo
