#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "causevo/error.hpp"
#include "causevo/rational.hpp"
#include "causevo/spacetime.hpp"

namespace causevo {

struct Atom {
  Event event;
  Rational weight;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Atomic probability measure on the slice T = time. Atoms are kept sorted by
/// (x, t) with coincident events merged, so two measures are equal iff their
/// atom lists are.
struct SliceMeasure {
  double time = 0.0;
  std::vector<Atom> atoms;

  /// Sorts, merges equal events and drops zero weights.
  static SliceMeasure make(double time, std::vector<Atom> atoms);

  Rational total_mass() const;
  std::vector<Event> support() const;
  std::optional<std::size_t> index_of(const Event& e) const;
  Rational mass_of(const Event& e) const;

  friend bool operator==(const SliceMeasure&, const SliceMeasure&) = default;
};

/// Throws InputError unless the weights are positive and sum to one and every
/// atom lies on its slice (exactly for the canonical frame, within
/// kParametrizationTolerance otherwise).
void validate_slice(const SpacetimeModel& model, const TemporalFunction& frame, const SliceMeasure& slice);

/// mu_t on a strictly increasing grid; eta = int mu_t dt.
struct Evolution {
  SpacetimeModel model = SpacetimeModel::minkowski();
  TemporalFunction frame;
  std::vector<double> times;
  std::vector<SliceMeasure> slices;

  std::size_t size() const { return times.size(); }
  double start() const { return times.front(); }
  double end() const { return times.back(); }

  friend bool operator==(const Evolution&, const Evolution&) = default;
};

/// Grid and slice consistency; throws InputError.
void validate_evolution(const Evolution& ev);

enum class Arithmetic { Rational, Float };

struct FeasibilityOptions {
  Arithmetic arithmetic = Arithmetic::Rational;
  /// Passed to the causal predicate when building the bipartite graph.
  double slack = 0.0;
  /// Float mode: feasible iff the max flow is within this of one.
  double float_tolerance = 1e-9;
};

/// Joint measure with mass[(i, j)] on (source.atoms[i], target.atoms[j]).
struct Coupling {
  SliceMeasure source;
  SliceMeasure target;
  std::map<std::pair<std::size_t, std::size_t>, Rational> mass;

  /// Sum of mass times squared embedded distance.
  double cost(const SpacetimeModel& model) const;

  friend bool operator==(const Coupling&, const Coupling&) = default;
};

struct CouplingCheck {
  bool valid = true;
  std::string reason;
};

/// Exact marginals, positive masses, and causal support (with `slack`).
CouplingCheck validate_coupling(const SpacetimeModel& model, const Coupling& coupling,
                                double slack = kDefaultCausalSlack);

/// Thrown by find_causal_coupling. The certificate K satisfies
/// mu(J+(K)) > nu(J+(K)).
class InfeasibleCouplingError : public DomainError {
 public:
  InfeasibleCouplingError(const std::string& what, std::vector<Event> certificate, Rational source_mass,
                          Rational target_mass)
      : DomainError(what),
        certificate_(std::move(certificate)),
        source_mass_(std::move(source_mass)),
        target_mass_(std::move(target_mass)) {}

  const std::vector<Event>& certificate() const { return certificate_; }
  const Rational& source_mass() const { return source_mass_; }
  const Rational& target_mass() const { return target_mass_; }

 private:
  std::vector<Event> certificate_;
  Rational source_mass_;
  Rational target_mass_;
};

/// Max-flow decision of whether a causal coupling of mu and nu exists.
/// Throws DomainError if mu.time > nu.time.
bool causal_coupling_feasible(const SpacetimeModel& model, const SliceMeasure& mu, const SliceMeasure& nu,
                              const FeasibilityOptions& options = {});

/// Min-cost causal coupling for squared embedded distance; exact masses.
/// Throws InfeasibleCouplingError with an up-set certificate.
Coupling find_causal_coupling(const SpacetimeModel& model, const SliceMeasure& mu, const SliceMeasure& nu,
                              double slack = 0.0);

/// mu(J+(K)).
Rational upset_mass(const SpacetimeModel& model, const SliceMeasure& mu, std::span<const Event> set,
                    double slack = 0.0);

struct UpsetResult {
  bool holds = true;
  /// min over K of nu(J+(K)) - mu(J+(K)).
  Rational worst_margin;
  std::vector<Event> worst_set;
};

UpsetResult upset_characterization_check(const SpacetimeModel& model, const SliceMeasure& mu,
                                         const SliceMeasure& nu, std::span<const std::vector<Event>> family,
                                         double slack = 0.0);

/// Singletons, subsets of size 2 and 3, and the full support of mu.
std::vector<std::vector<Event>> default_k_family(const SliceMeasure& mu);
/// Every nonempty subset of mu's support (at most 20 atoms).
std::vector<std::vector<Event>> all_subsets_family(const SliceMeasure& mu);

struct EvolutionCheck {
  bool causal = true;
  /// Step k -> k+1 that failed.
  std::optional<std::size_t> failing_step;
  std::vector<Event> certificate;
  Rational certificate_margin;
};

EvolutionCheck check_causal_evolution(const Evolution& ev, const FeasibilityOptions& options = {});
bool is_causal_evolution(const Evolution& ev, const FeasibilityOptions& options = {});

/// Glues first: mu -> nu and second: nu -> rho through nu's atoms.
Coupling compose_couplings(const Coupling& first, const Coupling& second);

/// Trapezoid weights of the grid (dt/2 at the ends, dt inside).
std::vector<double> trapezoid_weights(std::span<const double> times);

/// int f d eta, trapezoid in time, Kahan-summed.
double eta_integral(const Evolution& ev, const std::function<double(const Event&)>& f);
/// Same with values[k][j] given at slice k, atom j.
double eta_integral(const Evolution& ev, const std::vector<std::vector<double>>& values);

}  // namespace causevo
