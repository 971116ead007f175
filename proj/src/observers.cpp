#include "causevo/observers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace causevo {

namespace {

std::vector<double> frame_values(const TemporalFunction& frame, const CausalCurve& curve) {
  std::vector<double> v(curve.size());
  for (std::size_t k = 0; k < curve.size(); ++k) v[k] = frame(curve.points[k]);
  return v;
}

double max_abs_difference(const CausalCurve& a, const CausalCurve& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    worst = std::max({worst, std::abs(a.times[k] - b.times[k]), std::abs(a.points[k].t - b.points[k].t),
                      std::abs(a.points[k].x - b.points[k].x)});
  }
  return worst;
}

}  // namespace

std::pair<double, double> common_frame_range(const SpacetimeModel& model, const CurveMeasure& sigma,
                                             const TemporalFunction& frame) {
  frame.require_valid_on(model);
  if (sigma.atoms.empty()) throw DomainError("common_frame_range: empty curve measure");
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const CurveAtom& c : sigma.atoms) {
    lo = std::max(lo, frame(c.curve.points.front()));
    hi = std::min(hi, frame(c.curve.points.back()));
  }
  if (!(lo < hi)) {
    std::ostringstream os;
    os << "curves share no " << frame.id() << " window (" << lo << " >= " << hi << ")";
    throw DomainError(os.str());
  }
  return {lo, hi};
}

std::vector<double> uniform_frame_grid(const SpacetimeModel& model, const CurveMeasure& sigma,
                                       const TemporalFunction& frame, double step) {
  if (!(step > 0.0)) throw DomainError("uniform_frame_grid: step must be positive");
  const auto [lo, hi] = common_frame_range(model, sigma, frame);
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9));
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
  grid.back() = hi;
  return grid;
}

std::vector<double> vertex_preserving_grid(const SpacetimeModel& model, const CurveMeasure& sigma,
                                           const TemporalFunction& frame) {
  const auto [lo, hi] = common_frame_range(model, sigma, frame);
  std::vector<double> values{lo, hi};
  for (const CurveAtom& c : sigma.atoms) {
    for (const Event& p : c.curve.points) {
      const double v = frame(p);
      if (v > lo && v < hi) values.push_back(v);
    }
  }
  std::sort(values.begin(), values.end());
  std::vector<double> grid{values.front()};
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] - grid.back() > 1e-12) grid.push_back(values[i]);
  }
  // hi is the largest value, so the last kept entry is hi or absorbed it.
  grid.back() = hi;
  return grid;
}

CurveMeasure transform_sigma(const SpacetimeModel& model, const CurveMeasure& sigma, const TemporalFunction& frame,
                             std::span<const double> grid) {
  frame.require_valid_on(model);
  if (grid.empty()) throw DomainError("transform_sigma: empty grid");
  std::vector<CurveAtom> atoms;
  atoms.reserve(sigma.atoms.size());
  for (const CurveAtom& c : sigma.atoms) atoms.push_back({reparametrize_curve(model, c.curve, frame, grid), c.weight});
  return CurveMeasure::make(grid.front(), grid.back(), std::move(atoms));
}

Evolution evolution_from_sigma(const SpacetimeModel& model, const CurveMeasure& sigma) {
  Evolution ev;
  ev.model = model;
  ev.frame = sigma.frame();
  ev.times = sigma.grid();
  ev.slices.reserve(ev.times.size());
  for (double t : ev.times) ev.slices.push_back(pushforward_eval(sigma, t));
  return ev;
}

EtaFieldTransform transform_eta_and_field(const FieldBuilder& frame_a, const TemporalFunction& frame_b,
                                          std::span<const FieldEvaluation> fields_a) {
  const Evolution& ev = frame_a.evolution();
  frame_b.require_valid_on(ev.model);
  EtaFieldTransform out;
  out.clock_rate = frame_a.build(make_temporal(frame_b)).values;
  for (std::size_t k = 0; k < ev.size(); ++k) {
    for (std::size_t j = 0; j < out.clock_rate[k].size(); ++j) {
      if (!(out.clock_rate[k][j] > 0.0)) {
        const Event& q = ev.slices[k].atoms[j].event;
        std::ostringstream os;
        os << "X_A T_B = " << out.clock_rate[k][j] << " <= 0 at (" << q.t << ", " << q.x << ") for "
           << frame_b.id();
        throw DomainError(os.str());
      }
    }
  }
  for (const FieldEvaluation& f : fields_a) {
    FieldEvaluation g = f;
    for (std::size_t k = 0; k < g.values.size(); ++k) {
      for (std::size_t j = 0; j < g.values[k].size(); ++j) g.values[k][j] /= out.clock_rate[k][j];
    }
    out.fields.push_back(std::move(g));
  }
  return out;
}

double clock_residual_in_frame(const FieldBuilder& frame_b) {
  const FieldEvaluation x = frame_b.build(make_temporal(frame_b.evolution().frame));
  double worst = 0.0;
  for (const auto& row : x.values) {
    for (double v : row) worst = std::max(worst, std::abs(v - 1.0));
  }
  return worst;
}

CurrentCheck invariant_current_check(const FieldBuilder& frame_a, const FieldBuilder& frame_b,
                                     std::span<const TestFunction> psis, std::span<const TestFunction> phis) {
  CurrentCheck out;
  auto side = [](const FieldBuilder& b, const FieldEvaluation& x, const TestFunction& phi) {
    std::vector<std::vector<double>> v = b.sample(phi);
    for (std::size_t k = 0; k < v.size(); ++k) {
      for (std::size_t j = 0; j < v[k].size(); ++j) v[k][j] *= x.values[k][j];
    }
    return eta_integral(b.evolution(), v);
  };
  for (const TestFunction& psi : psis) {
    const FieldEvaluation xa = frame_a.build(psi);
    const FieldEvaluation xb = frame_b.build(psi);
    for (const TestFunction& phi : phis) {
      CurrentPair p{psi.id, phi.id, side(frame_a, xa, phi), side(frame_b, xb, phi), 0.0};
      p.discrepancy = std::abs(p.lhs - p.rhs) / (std::abs(p.lhs) + std::abs(p.rhs) + 1e-12);
      out.worst = std::max(out.worst, p.discrepancy);
      out.pairs.push_back(std::move(p));
    }
  }
  return out;
}

SliceMeasure disintegrate_eta(const SpacetimeModel& model, const CurveMeasure& sigma, const TemporalFunction& frame,
                              double tau) {
  frame.require_valid_on(model);
  std::vector<Atom> atoms;
  for (const CurveAtom& c : sigma.atoms) {
    const std::vector<double> v = frame_values(frame, c.curve);
    const double tol = 1e-12 * (1.0 + std::abs(v.front()) + std::abs(v.back()));
    if (tau < v.front() - tol || tau > v.back() + tol) {
      std::ostringstream os;
      os << "disintegrate_eta: " << frame.id() << " = " << tau << " is outside a curve's range [" << v.front()
         << ", " << v.back() << "]";
      throw DomainError(os.str());
    }
    Event q;
    if (tau <= v.front()) {
      q = c.curve.points.front();
    } else if (tau >= v.back()) {
      q = c.curve.points.back();
    } else {
      const auto it = std::upper_bound(v.begin(), v.end(), tau);
      const std::size_t k = static_cast<std::size_t>(it - v.begin()) - 1;
      q = v[k] == tau ? c.curve.points[k]
                      : solve_on_segment(model, frame, c.curve.points[k], c.curve.points[k + 1], tau);
    }
    atoms.push_back({q, c.weight});
  }
  return SliceMeasure::make(tau, std::move(atoms));
}

WorldlineMeasure deparametrize(const SpacetimeModel& model, const CurveMeasure& sigma, double spacing,
                               std::optional<std::pair<double, double>> window) {
  if (!(spacing > 0.0)) throw DomainError("deparametrize: spacing must be positive");
  const TemporalFunction canonical = TemporalFunction::canonical();
  std::vector<WorldlineAtom> reps;
  for (const CurveAtom& c : sigma.atoms) {
    double lo = c.curve.points.front().t;
    double hi = c.curve.points.back().t;
    if (window) {
      lo = std::max(lo, window->first);
      hi = std::min(hi, window->second);
      if (!(lo <= hi)) throw DomainError("deparametrize: window misses a curve");
    }
    std::vector<double> grid{lo};
    for (auto m = static_cast<long long>(std::floor(lo / spacing)); static_cast<double>(m) * spacing < hi - 1e-9;
         ++m) {
      const double t = static_cast<double>(m) * spacing;
      if (t > lo + 1e-9) grid.push_back(t);
    }
    if (hi > lo) grid.push_back(hi);
    reps.push_back({reparametrize_curve(model, c.curve, canonical, grid), c.weight});
  }
  std::stable_sort(reps.begin(), reps.end(),
                   [](const WorldlineAtom& a, const WorldlineAtom& b) { return a.image.points < b.image.points; });
  WorldlineMeasure out;
  for (WorldlineAtom& r : reps) {
    if (!out.atoms.empty() && max_abs_difference(out.atoms.back().image, r.image) <= 1e-9) {
      out.atoms.back().weight += r.weight;
    } else {
      out.atoms.push_back(std::move(r));
    }
  }
  return out;
}

double worldline_distance(const WorldlineMeasure& first, const WorldlineMeasure& second) {
  if (first.atoms.size() != second.atoms.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < first.atoms.size(); ++i) {
    if (first.atoms[i].weight != second.atoms[i].weight) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, max_abs_difference(first.atoms[i].image, second.atoms[i].image));
  }
  return worst;
}

}  // namespace causevo
