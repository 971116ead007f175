#include "causevo/causal_curves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "causevo/error.hpp"
#include "causevo/test_functions.hpp"

namespace causevo {

namespace {

bool within(double value, double lo, double hi, double tol) {
  return value >= lo - tol && value <= hi + tol;
}

double grid_tolerance(double a, double b) { return 1e-12 * (1.0 + std::abs(a) + std::abs(b)); }

std::size_t segment_index(std::span<const double> grid, double s) {
  auto it = std::upper_bound(grid.begin(), grid.end(), s);
  std::size_t k = static_cast<std::size_t>(it - grid.begin());
  if (k == 0) return 0;
  return std::min(k - 1, grid.size() - 2);
}

}  // namespace

CurveValidation validate_curve(const SpacetimeModel& model, const CausalCurve& curve, double slack) {
  CurveValidation out;
  auto fail = [&](std::size_t k, std::string reason) {
    out.valid = false;
    out.first_violation = k;
    out.reason = std::move(reason);
    return out;
  };
  if (curve.times.empty()) return fail(0, "empty curve");
  if (curve.times.size() != curve.points.size()) return fail(0, "times/points size mismatch");
  if (!curve.frame.valid_on(model)) return fail(0, "frame " + curve.frame.id() + " invalid on model");

  const double param_tol = curve.frame.is_canonical() ? 0.0 : kParametrizationTolerance;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const Event& p = curve.points[k];
    if (!std::isfinite(p.t) || !std::isfinite(p.x) ||
        (model.kind() == ModelKind::Cylinder && (p.x < 0.0 || p.x >= kTwoPi))) {
      return fail(k, "invalid event");
    }
    if (std::abs(curve.frame(p) - curve.times[k]) > param_tol) {
      return fail(k, "parametrization: frame value differs from grid time");
    }
    if (k + 1 < curve.size()) {
      if (!(curve.times[k + 1] > curve.times[k])) return fail(k, "grid not strictly increasing");
      if (!causally_precedes(model, p, curve.points[k + 1], slack)) {
        return fail(k, "consecutive samples are not causally related");
      }
    }
  }
  return out;
}

double curve_derivative(const SpacetimeModel& model, const CausalCurve& curve, std::size_t k) {
  const std::size_t n = curve.size();
  if (n < 2) throw DomainError("curve_derivative needs at least two samples");
  if (k >= n) throw DomainError("curve_derivative: index out of range");
  const std::size_t lo = k == 0 ? 0 : k - 1;
  const std::size_t hi = k + 1 == n ? k : k + 1;
  const double dx = model.spatial_displacement(curve.points[lo].x, curve.points[hi].x);
  return dx / (curve.times[hi] - curve.times[lo]);
}

Event solve_on_segment(const SpacetimeModel& model, const TemporalFunction& frame, const Event& p,
                       const Event& q, double s) {
  if (frame.is_canonical()) return interpolate_segment(model, p, q, s);
  double lo = p.t;
  double hi = q.t;
  double f_lo = frame(p) - s;
  double f_hi = frame(q) - s;
  if (f_lo >= 0.0) return p;
  if (f_hi <= 0.0) return q;
  // Illinois regula falsi: exact in one step when the frame is affine along
  // the segment, superlinear otherwise.
  int side = 0;
  double t = lo;
  for (int iter = 0; iter < 200; ++iter) {
    t = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
    const double f = frame(interpolate_segment(model, p, q, t)) - s;
    if (f == 0.0 || std::abs(f) <= 1e-15 * (1.0 + std::abs(s)) || hi - lo <= 1e-15 * (1.0 + std::abs(t))) {
      break;
    }
    if (f < 0.0) {
      lo = t;
      f_lo = f;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = t;
      f_hi = f;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
  }
  return interpolate_segment(model, p, q, t);
}

Event evaluate_curve(const SpacetimeModel& model, const CausalCurve& curve, double s) {
  if (curve.times.empty()) throw DomainError("evaluate_curve on empty curve");
  const double tol = grid_tolerance(curve.start(), curve.end());
  if (!within(s, curve.start(), curve.end(), tol)) {
    std::ostringstream os;
    os << "evaluate_curve: parameter " << s << " outside [" << curve.start() << ", " << curve.end() << "]";
    throw DomainError(os.str());
  }
  if (s <= curve.start()) return curve.points.front();
  if (s >= curve.end()) return curve.points.back();
  const std::size_t k = segment_index(curve.times, s);
  if (s == curve.times[k]) return curve.points[k];
  if (s == curve.times[k + 1]) return curve.points[k + 1];
  return solve_on_segment(model, curve.frame, curve.points[k], curve.points[k + 1], s);
}

CausalCurve reparametrize_curve(const SpacetimeModel& model, const CausalCurve& curve,
                                const TemporalFunction& target, std::span<const double> new_grid) {
  target.require_valid_on(model);
  if (curve.size() < 1) throw DomainError("reparametrize_curve on empty curve");
  if (new_grid.empty()) throw DomainError("reparametrize_curve: empty target grid");

  std::vector<double> values(curve.size());
  for (std::size_t k = 0; k < curve.size(); ++k) values[k] = target(curve.points[k]);
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] - values[k - 1] <= -1e-12) {
      std::ostringstream os;
      os << "reparametrize_curve: " << target.id() << " decreases along the curve at sample " << k;
      throw DomainError(os.str());
    }
    // Sub-tolerance decreases are flattened.
    values[k] = std::max(values[k], values[k - 1]);
  }
  for (std::size_t i = 1; i < new_grid.size(); ++i) {
    if (!(new_grid[i] > new_grid[i - 1])) throw DomainError("reparametrize_curve: grid not increasing");
  }
  const double tol = grid_tolerance(values.front(), values.back());
  if (!within(new_grid.front(), values.front(), values.back(), tol) ||
      !within(new_grid.back(), values.front(), values.back(), tol)) {
    std::ostringstream os;
    os << "reparametrize_curve: grid [" << new_grid.front() << ", " << new_grid.back()
       << "] outside the range [" << values.front() << ", " << values.back() << "] of "
       << target.id();
    throw DomainError(os.str());
  }

  CausalCurve out;
  out.frame = target;
  out.times.assign(new_grid.begin(), new_grid.end());
  out.points.reserve(new_grid.size());
  for (double tau : new_grid) {
    if (tau <= values.front()) {
      out.points.push_back(curve.points.front());
      continue;
    }
    if (tau >= values.back()) {
      out.points.push_back(curve.points.back());
      continue;
    }
    std::size_t k = values.size() == 1 ? 0 : segment_index(values, tau);
    if (tau == values[k]) {
      out.points.push_back(curve.points[k]);
    } else if (values[k + 1] <= values[k]) {
      out.points.push_back(curve.points[k]);
    } else {
      out.points.push_back(solve_on_segment(model, target, curve.points[k], curve.points[k + 1], tau));
    }
  }
  return out;
}

CausalCurve concatenate_curves(const CausalCurve& first, const CausalCurve& second) {
  if (first.times.empty() || second.times.empty()) throw DomainError("concatenate_curves: empty curve");
  if (!(first.frame == second.frame)) throw DomainError("concatenate_curves: frames differ");
  if (first.end() != second.start() || !(first.points.back() == second.points.front())) {
    throw DomainError("concatenate_curves: endpoint mismatch");
  }
  CausalCurve out = first;
  out.times.insert(out.times.end(), second.times.begin() + 1, second.times.end());
  out.points.insert(out.points.end(), second.points.begin() + 1, second.points.end());
  return out;
}

double uniform_distance(const SpacetimeModel& model, const CausalCurve& gamma, const CausalCurve& rho,
                        double a, double b) {
  if (!(gamma.frame == rho.frame)) throw DomainError("uniform_distance: curves use different frames");
  if (!(a <= b)) throw DomainError("uniform_distance: empty window");
  for (const CausalCurve* c : {&gamma, &rho}) {
    const double tol = grid_tolerance(a, b);
    if (c->times.empty() || c->start() > a + tol || c->end() < b - tol) {
      throw DomainError("uniform_distance: window not covered by both curves");
    }
  }
  std::vector<double> grid{a, b};
  for (const CausalCurve* c : {&gamma, &rho}) {
    for (double s : c->times) {
      if (s > a && s < b) grid.push_back(s);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double worst = 0.0;
  for (double s : grid) {
    const double d = embedded_distance(embed(model, evaluate_curve(model, gamma, s)),
                                       embed(model, evaluate_curve(model, rho, s)));
    worst = std::max(worst, d);
  }
  return worst;
}

std::vector<TestVector> h1_test_battery(std::size_t dimension, double a, double b) {
  std::vector<TestVector> out;
  const double mid = 0.5 * (a + b);
  const double radius = 0.5 * (b - a);
  for (std::size_t c = 0; c < dimension; ++c) {
    auto unit = [c](double s) {
      EmbeddedPoint e{0.0, 0.0, 0.0};
      e[c] = s;
      return e;
    };
    out.push_back({"const[" + std::to_string(c) + "]", [unit](double) { return unit(1.0); },
                   [unit](double) { return unit(0.0); }});
    out.push_back({"ramp[" + std::to_string(c) + "]", [unit, a, b](double s) { return unit((s - a) / (b - a)); },
                   [unit, a, b](double) { return unit(1.0 / (b - a)); }});
    out.push_back({"bump[" + std::to_string(c) + "]",
                   [unit, mid, radius](double s) { return unit(bump_profile((s - mid) / radius)); },
                   [unit, mid, radius](double s) {
                     return unit(bump_profile_derivative((s - mid) / radius) / radius);
                   }});
  }
  return out;
}

double h1_pairing(const SpacetimeModel& model, const CausalCurve& gamma, const TestVector& v, double a,
                  double b) {
  if (!(a < b)) throw DomainError("h1_pairing: empty window");
  const double tol = grid_tolerance(a, b);
  if (gamma.times.empty() || gamma.start() > a + tol || gamma.end() < b - tol) {
    throw DomainError("h1_pairing: window not covered by the curve");
  }
  std::vector<double> grid{a};
  for (double s : gamma.times) {
    if (s > a && s < b) grid.push_back(s);
  }
  grid.push_back(b);
  const std::size_t n = grid.size();
  std::vector<EmbeddedPoint> pts(n);
  for (std::size_t j = 0; j < n; ++j) pts[j] = embed(model, evaluate_curve(model, gamma, grid[j]));

  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t lo = j == 0 ? 0 : j - 1;
    const std::size_t hi = j + 1 == n ? j : j + 1;
    const double ds = grid[hi] - grid[lo];
    const EmbeddedPoint val = v.value(grid[j]);
    const EmbeddedPoint der = v.derivative(grid[j]);
    double g = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      g += pts[j][c] * val[c] + (pts[hi][c] - pts[lo][c]) / ds * der[c];
    }
    double w = 0.0;
    if (j > 0) w += 0.5 * (grid[j] - grid[j - 1]);
    if (j + 1 < n) w += 0.5 * (grid[j + 1] - grid[j]);
    total += w * g;
  }
  return total;
}

double h1_pairing_difference(const SpacetimeModel& model, const CausalCurve& gamma, const CausalCurve& rho,
                             const TestVector& v, double a, double b) {
  return h1_pairing(model, gamma, v, a, b) - h1_pairing(model, rho, v, a, b);
}

}  // namespace causevo
