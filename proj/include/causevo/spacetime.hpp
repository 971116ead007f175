#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace causevo {

/// A point of a 1+1 dimensional spacetime in model coordinates. `x` is a real
/// line coordinate for Minkowski and FLRW, an angle in [0, 2pi) on the
/// cylinder.
struct Event {
  double t = 0.0;
  double x = 0.0;

  friend bool operator==(const Event&, const Event&) = default;
  friend auto operator<=>(const Event&, const Event&) = default;
};

enum class ModelKind { Minkowski, Cylinder, Flrw };

std::string to_string(ModelKind kind);

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383279;

/// Slack used by validity checks (curves, couplings) when comparing against
/// the light cone. The raw predicates default to exact comparison.
inline constexpr double kDefaultCausalSlack = 1e-12;

/// Closed-form globally hyperbolic model in the splitting
///   g = -alpha dT^2 + gbar,  h = theta alpha dT^2 + theta gbar.
/// All three models have alpha = theta = 1; FLRW has gbar = a(t)^2 dx^2 with
/// a(t) = 1 + eps t^2.
class SpacetimeModel {
 public:
  static SpacetimeModel minkowski();
  static SpacetimeModel cylinder();
  static SpacetimeModel flrw(double eps);

  ModelKind kind() const { return kind_; }
  double eps() const { return eps_; }

  double scale_factor(double t) const;
  double lapse(const Event&) const { return 1.0; }
  double conformal_factor(const Event&) const { return 1.0; }
  /// Coefficient of dx^2 in gbar.
  double spatial_metric(const Event& p) const;

  /// tau(t) = int_0^t ds / a(s). Identity on the flat models; fixed-step
  /// composite Simpson on FLRW with the step sized for error < 1e-10.
  double conformal_time(double t) const;

  /// Spatial separation seen by the light cone: |dx| on the line models,
  /// arc distance on the circle.
  double spatial_separation(double x1, double x2) const;
  /// Displacement from x1 to x2 used for interpolation. On the circle it is
  /// the shorter arc in (-pi, pi], a tie at exactly pi resolving to +pi.
  double spatial_displacement(double x1, double x2) const;

  /// Wraps angles into [0, 2pi) on the cylinder; identity elsewhere.
  Event normalize(Event p) const;
  /// Throws InputError for non-finite coordinates or an un-normalized angle.
  void check_event(const Event& p) const;

  friend bool operator==(const SpacetimeModel&, const SpacetimeModel&) = default;

 private:
  SpacetimeModel(ModelKind kind, double eps) : kind_(kind), eps_(eps) {}
  ModelKind kind_;
  double eps_ = 0.0;
};

enum class TemporalKind { Canonical, Boost, Sheared };

/// Cauchy temporal functions with closed-form level sets:
///   Canonical   T = t
///   Boost(v)    T = (t - v x) / sqrt(1 - v^2)
///   Sheared(l)  T = t + l tanh(x)
/// Boost and Sheared are only defined on Minkowski.
class TemporalFunction {
 public:
  TemporalFunction() = default;
  static TemporalFunction canonical() { return {}; }
  static TemporalFunction boost(double v);
  static TemporalFunction sheared(double lambda);

  TemporalKind kind() const { return kind_; }
  double parameter() const { return param_; }
  bool is_canonical() const { return kind_ == TemporalKind::Canonical; }

  double operator()(const Event& p) const;
  /// (dT/dt, dT/dx).
  std::array<double, 2> gradient(const Event& p) const;

  bool valid_on(const SpacetimeModel& model) const;
  /// Throws DomainError when the function is not temporal on `model`.
  void require_valid_on(const SpacetimeModel& model) const;

  std::string id() const;

  friend bool operator==(const TemporalFunction&, const TemporalFunction&) = default;

 private:
  TemporalFunction(TemporalKind kind, double param) : kind_(kind), param_(param) {}
  TemporalKind kind_ = TemporalKind::Canonical;
  double param_ = 0.0;
};

/// p causally precedes q. Exact comparison on the coordinates unless a
/// positive slack is passed; the slack widens the cone by that amount.
bool causally_precedes(const SpacetimeModel& model, const Event& p, const Event& q,
                       double slack = 0.0);
/// Strict cone inequality.
bool chronologically_precedes(const SpacetimeModel& model, const Event& p, const Event& q);
/// q lies in J+(K). Throws DomainError for empty K.
bool in_causal_future_of_set(const SpacetimeModel& model, std::span<const Event> set,
                             const Event& q, double slack = 0.0);

/// Point at canonical time t on the deterministic connecting curve from p to q
/// (affine in (conformal time, x), shorter arc on the circle). Requires
/// p.t <= t <= q.t.
Event interpolate_segment(const SpacetimeModel& model, const Event& p, const Event& q, double t);

struct CausalCurve;

/// Canonically parametrized causal curve from p to q sampled on `time_grid`.
/// Throws DomainError if p does not causally precede q or the grid endpoints
/// are not T(p), T(q).
CausalCurve connecting_causal_curve(const SpacetimeModel& model, const Event& p, const Event& q,
                                    std::span<const double> time_grid);

/// sqrt(h(gamma', gamma')) for the tangent (1, v) at p.
double metric_speed(const SpacetimeModel& model, const Event& p, double spatial_velocity);
/// sqrt(2 theta alpha), the bound on metric_speed of causal tangents.
double speed_bound(const SpacetimeModel& model, const Event& p);

/// Closed-form embedding into R^N: identity chart (N = 2) on Minkowski/FLRW,
/// (t, cos x, sin x) (N = 3) on the cylinder. Unused trailing entries are 0.
using EmbeddedPoint = std::array<double, 3>;
EmbeddedPoint embed(const SpacetimeModel& model, const Event& p);
std::size_t embedding_dimension(const SpacetimeModel& model);
double embedded_distance(const EmbeddedPoint& a, const EmbeddedPoint& b);

}  // namespace causevo
