#include "causevo/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "causevo/causal_curves.hpp"
#include "causevo/error.hpp"

namespace causevo {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Minkowski:
      return "minkowski";
    case ModelKind::Cylinder:
      return "cylinder";
    case ModelKind::Flrw:
      return "flrw";
  }
  return "unknown";
}

SpacetimeModel SpacetimeModel::minkowski() { return {ModelKind::Minkowski, 0.0}; }
SpacetimeModel SpacetimeModel::cylinder() { return {ModelKind::Cylinder, 0.0}; }
SpacetimeModel SpacetimeModel::flrw(double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw InputError("FLRW scale parameter eps must be finite and >= 0");
  }
  return {ModelKind::Flrw, eps};
}

double SpacetimeModel::scale_factor(double t) const {
  return kind_ == ModelKind::Flrw ? 1.0 + eps_ * t * t : 1.0;
}

double SpacetimeModel::spatial_metric(const Event& p) const {
  const double a = scale_factor(p.t);
  return a * a;
}

double SpacetimeModel::conformal_time(double t) const {
  if (kind_ != ModelKind::Flrw || eps_ == 0.0 || t == 0.0) return t;
  // |f''''| <= 24 eps^2 for f = 1/(1 + eps s^2); the composite Simpson error
  // is |t| h^4 max|f''''| / 180, kept below 5e-11.
  const double span = std::abs(t);
  const double h_target = std::min(0.05, std::pow(180.0 * 5e-11 / (span * 24.0 * eps_ * eps_), 0.25));
  std::size_t n = 2 * static_cast<std::size_t>(std::ceil(span / (2.0 * h_target)));
  n = std::max<std::size_t>(n, 2);
  const double h = t / static_cast<double>(n);
  auto f = [this](double s) { return 1.0 / scale_factor(s); };
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double v = f(h * static_cast<double>(i));
    (i % 2 == 1 ? odd : even) += v;
  }
  return h / 3.0 * (f(0.0) + f(t) + 4.0 * odd + 2.0 * even);
}

double SpacetimeModel::spatial_separation(double x1, double x2) const {
  if (kind_ != ModelKind::Cylinder) return std::abs(x2 - x1);
  double d = std::fmod(std::abs(x2 - x1), kTwoPi);
  return std::min(d, kTwoPi - d);
}

double SpacetimeModel::spatial_displacement(double x1, double x2) const {
  if (kind_ != ModelKind::Cylinder) return x2 - x1;
  double d = std::fmod(x2 - x1, kTwoPi);
  if (d > kPi) d -= kTwoPi;
  if (d <= -kPi) d += kTwoPi;
  return d;
}

Event SpacetimeModel::normalize(Event p) const {
  if (kind_ == ModelKind::Cylinder) {
    double x = std::fmod(p.x, kTwoPi);
    if (x < 0.0) x += kTwoPi;
    if (x >= kTwoPi) x = 0.0;
    p.x = x;
  }
  return p;
}

void SpacetimeModel::check_event(const Event& p) const {
  if (!std::isfinite(p.t) || !std::isfinite(p.x)) {
    throw InputError("event has non-finite coordinates");
  }
  if (kind_ == ModelKind::Cylinder && (p.x < 0.0 || p.x >= kTwoPi)) {
    std::ostringstream os;
    os << "cylinder event angle " << p.x << " is outside [0, 2pi)";
    throw InputError(os.str());
  }
}

TemporalFunction TemporalFunction::boost(double v) {
  if (!(std::abs(v) < 1.0)) throw InputError("boost velocity must satisfy |v| < 1");
  return {TemporalKind::Boost, v};
}

TemporalFunction TemporalFunction::sheared(double lambda) {
  if (!(std::abs(lambda) < 1.0)) throw InputError("shear parameter must satisfy |lambda| < 1");
  return {TemporalKind::Sheared, lambda};
}

double TemporalFunction::operator()(const Event& p) const {
  switch (kind_) {
    case TemporalKind::Canonical:
      return p.t;
    case TemporalKind::Boost:
      return (p.t - param_ * p.x) / std::sqrt(1.0 - param_ * param_);
    case TemporalKind::Sheared:
      return p.t + param_ * std::tanh(p.x);
  }
  return p.t;
}

std::array<double, 2> TemporalFunction::gradient(const Event& p) const {
  switch (kind_) {
    case TemporalKind::Canonical:
      return {1.0, 0.0};
    case TemporalKind::Boost: {
      const double g = 1.0 / std::sqrt(1.0 - param_ * param_);
      return {g, -param_ * g};
    }
    case TemporalKind::Sheared: {
      const double c = std::cosh(p.x);
      return {1.0, param_ / (c * c)};
    }
  }
  return {1.0, 0.0};
}

bool TemporalFunction::valid_on(const SpacetimeModel& model) const {
  return kind_ == TemporalKind::Canonical || model.kind() == ModelKind::Minkowski;
}

void TemporalFunction::require_valid_on(const SpacetimeModel& model) const {
  if (!valid_on(model)) {
    throw DomainError("temporal function " + id() + " is not available on the " +
                      to_string(model.kind()) + " model");
  }
}

std::string TemporalFunction::id() const {
  std::ostringstream os;
  switch (kind_) {
    case TemporalKind::Canonical:
      return "canonical";
    case TemporalKind::Boost:
      os << "boost(" << param_ << ")";
      break;
    case TemporalKind::Sheared:
      os << "sheared(" << param_ << ")";
      break;
  }
  return os.str();
}

namespace {

// Time-like separation of the pair in the chart where the cone is |dx| <= dt.
double cone_time(const SpacetimeModel& model, const Event& p, const Event& q) {
  if (model.kind() == ModelKind::Flrw) return model.conformal_time(q.t) - model.conformal_time(p.t);
  return q.t - p.t;
}

}  // namespace

bool causally_precedes(const SpacetimeModel& model, const Event& p, const Event& q, double slack) {
  model.check_event(p);
  model.check_event(q);
  if (p == q) return true;
  const double dt = cone_time(model, p, q);
  return dt - model.spatial_separation(p.x, q.x) >= -slack;
}

bool chronologically_precedes(const SpacetimeModel& model, const Event& p, const Event& q) {
  model.check_event(p);
  model.check_event(q);
  const double dt = cone_time(model, p, q);
  return dt > model.spatial_separation(p.x, q.x);
}

bool in_causal_future_of_set(const SpacetimeModel& model, std::span<const Event> set,
                             const Event& q, double slack) {
  if (set.empty()) throw DomainError("causal future of an empty set");
  return std::any_of(set.begin(), set.end(),
                     [&](const Event& p) { return causally_precedes(model, p, q, slack); });
}

Event interpolate_segment(const SpacetimeModel& model, const Event& p, const Event& q, double t) {
  if (t <= p.t) return p;
  if (t >= q.t) return q;
  double lambda = 0.0;
  if (model.kind() == ModelKind::Flrw) {
    const double tp = model.conformal_time(p.t);
    lambda = (model.conformal_time(t) - tp) / (model.conformal_time(q.t) - tp);
  } else {
    lambda = (t - p.t) / (q.t - p.t);
  }
  const double dx = model.spatial_displacement(p.x, q.x);
  return model.normalize({t, p.x + lambda * dx});
}

CausalCurve connecting_causal_curve(const SpacetimeModel& model, const Event& p, const Event& q,
                                    std::span<const double> time_grid) {
  if (!causally_precedes(model, p, q, kDefaultCausalSlack)) {
    throw DomainError("connecting_causal_curve: p does not causally precede q");
  }
  if (time_grid.empty()) throw DomainError("connecting_causal_curve: empty grid");
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)); };
  if (!close(time_grid.front(), p.t) || !close(time_grid.back(), q.t)) {
    throw DomainError("connecting_causal_curve: grid endpoints differ from T(p), T(q)");
  }
  for (std::size_t k = 1; k < time_grid.size(); ++k) {
    if (!(time_grid[k] > time_grid[k - 1])) {
      throw DomainError("connecting_causal_curve: grid is not strictly increasing");
    }
  }
  if (time_grid.size() == 1 && !(p == q)) {
    throw DomainError("connecting_causal_curve: one-point grid needs p == q");
  }

  CausalCurve curve;
  curve.times.assign(time_grid.begin(), time_grid.end());
  curve.times.front() = p.t;
  curve.times.back() = q.t;
  curve.points.reserve(curve.times.size());
  for (std::size_t k = 0; k < curve.times.size(); ++k) {
    curve.points.push_back(interpolate_segment(model, p, q, curve.times[k]));
  }
  curve.points.front() = p;
  curve.points.back() = q;
  return curve;
}

double metric_speed(const SpacetimeModel& model, const Event& p, double spatial_velocity) {
  const double theta = model.conformal_factor(p);
  return std::sqrt(theta * (model.lapse(p) + model.spatial_metric(p) * spatial_velocity * spatial_velocity));
}

double speed_bound(const SpacetimeModel& model, const Event& p) {
  return std::sqrt(2.0 * model.conformal_factor(p) * model.lapse(p));
}

EmbeddedPoint embed(const SpacetimeModel& model, const Event& p) {
  if (model.kind() == ModelKind::Cylinder) return {p.t, std::cos(p.x), std::sin(p.x)};
  return {p.t, p.x, 0.0};
}

std::size_t embedding_dimension(const SpacetimeModel& model) {
  return model.kind() == ModelKind::Cylinder ? 3 : 2;
}

double embedded_distance(const EmbeddedPoint& a, const EmbeddedPoint& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace causevo
