#include "causevo/vector_field.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace causevo {

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::vector<std::vector<double>> zeros_like(const Evolution& ev) {
  std::vector<std::vector<double>> out(ev.size());
  for (std::size_t k = 0; k < ev.size(); ++k) out[k].assign(ev.slices[k].atoms.size(), 0.0);
  return out;
}

std::vector<std::vector<bool>> mask_like(const Evolution& ev, bool value) {
  std::vector<std::vector<bool>> out(ev.size());
  for (std::size_t k = 0; k < ev.size(); ++k) out[k].assign(ev.slices[k].atoms.size(), value);
  return out;
}

// Stencil neighbours of grid index k.
std::pair<std::size_t, std::size_t> stencil(std::size_t k, std::size_t n) {
  return {k == 0 ? 0 : k - 1, k + 1 == n ? k : k + 1};
}

}  // namespace

std::string residual_csv_header() { return "phi_id,residual_kind,dt,value,tolerance,pass"; }

std::string residual_csv_row(const ResidualReport& r) {
  std::string id = r.phi_id;
  if (id.find_first_of(",\"") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : id) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    id = quoted + "\"";
  }
  return id + "," + r.kind + "," + format_double(r.dt) + "," + format_double(r.value) + "," +
         format_double(r.tolerance) + "," + (r.pass ? "true" : "false");
}

FieldBuilder::FieldBuilder(CurveMeasure sigma, Evolution ev) : sigma_(std::move(sigma)), ev_(std::move(ev)) {
  if (sigma_.atoms.empty()) throw DomainError("field construction needs a nonempty curve measure");
  if (ev_.size() < 2) throw DomainError("field construction needs at least two grid times");
  if (sigma_.grid() != ev_.times) throw DomainError("curve-measure grid differs from the evolution grid");
  if (!(sigma_.frame() == ev_.frame)) throw DomainError("curve measure and evolution use different frames");
  for (std::size_t k = 0; k < ev_.size(); ++k) {
    if (!(pushforward_eval(sigma_, ev_.times[k]) == ev_.slices[k])) {
      std::ostringstream os;
      os << "marginal mismatch: (ev_t)# sigma differs from mu_t at t = " << ev_.times[k];
      throw DomainError(os.str());
    }
  }
  for (std::size_t k = 0; k + 1 < ev_.size(); ++k) dt_ = std::max(dt_, ev_.times[k + 1] - ev_.times[k]);
  atom_of_.resize(sigma_.atoms.size());
  for (std::size_t c = 0; c < sigma_.atoms.size(); ++c) {
    atom_of_[c].resize(ev_.size());
    for (std::size_t k = 0; k < ev_.size(); ++k) {
      atom_of_[c][k] = *ev_.slices[k].index_of(sigma_.atoms[c].curve.points[k]);
    }
  }
}

std::vector<std::vector<double>> FieldBuilder::sample(const TestFunction& phi) const {
  std::vector<std::vector<double>> out = zeros_like(ev_);
  for (std::size_t k = 0; k < ev_.size(); ++k) {
    for (std::size_t j = 0; j < out[k].size(); ++j) out[k][j] = phi.value(ev_.slices[k].atoms[j].event);
  }
  return out;
}

FieldEvaluation FieldBuilder::build(const TestFunction& phi) const {
  const std::size_t n = ev_.size();
  FieldEvaluation out{phi.id, zeros_like(ev_), mask_like(ev_, true)};
  std::vector<std::vector<double>> mass = zeros_like(ev_);
  std::vector<double> along(n);
  for (std::size_t c = 0; c < sigma_.atoms.size(); ++c) {
    const CausalCurve& curve = sigma_.atoms[c].curve;
    const double w = to_double(sigma_.atoms[c].weight);
    for (std::size_t k = 0; k < n; ++k) along[k] = phi.value(curve.points[k]);
    for (std::size_t k = 0; k < n; ++k) {
      const auto [lo, hi] = stencil(k, n);
      const double d = (along[hi] - along[lo]) / (ev_.times[hi] - ev_.times[lo]);
      out.values[k][atom_of_[c][k]] += w * d;
      mass[k][atom_of_[c][k]] += w;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < mass[k].size(); ++j) out.values[k][j] /= mass[k][j];
  }
  return out;
}

FieldEvaluation FieldBuilder::extend(const TestFunction& psi, const PartitionOfUnity& partition) const {
  const std::size_t n = ev_.size();
  FieldEvaluation out{"ext(" + psi.id + ")", zeros_like(ev_), mask_like(ev_, true)};
  for (const TestFunction& piece : partition.pieces()) {
    const FieldEvaluation part = build(product(piece, psi));
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < part.values[k].size(); ++j) out.values[k][j] += part.values[k][j];
    }
  }
  for (std::size_t c = 0; c < sigma_.atoms.size(); ++c) {
    const CausalCurve& curve = sigma_.atoms[c].curve;
    for (std::size_t k = 0; k < n; ++k) {
      const auto [lo, hi] = stencil(k, n);
      if (!partition.covers(curve.points[lo]) || !partition.covers(curve.points[k]) ||
          !partition.covers(curve.points[hi])) {
        out.defined[k][atom_of_[c][k]] = false;
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < out.values[k].size(); ++j) {
      if (!out.defined[k][j]) out.values[k][j] = 0.0;
    }
  }
  return out;
}

double sup_scale(const FieldBuilder& builder, const TestFunction& phi) {
  double s = 0.0;
  for (const auto& row : builder.sample(phi)) {
    for (double v : row) s = std::max(s, std::abs(v));
  }
  return s;
}

void require_interior_support(const FieldBuilder& builder, const TestFunction& phi) {
  const Evolution& ev = builder.evolution();
  const std::size_t n = ev.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (k >= 3 && k + 3 < n) continue;
    for (const Atom& a : ev.slices[k].atoms) {
      if (phi.value(a.event) != 0.0) {
        std::ostringstream os;
        os << phi.id << " does not vanish on the boundary slice T = " << ev.times[k]
           << " (support must stay two grid steps inside the slab)";
        throw DomainError(os.str());
      }
    }
  }
}

ResidualReport continuity_residual(const FieldBuilder& builder, const TestFunction& phi) {
  require_interior_support(builder, phi);
  const FieldEvaluation x = builder.build(phi);
  ResidualReport r{phi.id, "continuity", builder.dt(), 0.0, 0.0, true};
  r.value = std::abs(eta_integral(builder.evolution(), x.values));
  r.tolerance = 10.0 * builder.dt() * sup_scale(builder, phi);
  r.pass = r.value <= r.tolerance;
  return r;
}

ResidualReport clock_normalization_residual(const FieldBuilder& builder, const TestFunction& phi) {
  const TestFunction clock = make_temporal(builder.evolution().frame);
  const FieldEvaluation x_phi = builder.build(phi);
  const FieldEvaluation x_phi_t = builder.build(product(phi, clock));
  const Evolution& ev = builder.evolution();
  ResidualReport r{phi.id, "clock", builder.dt(), 0.0, 10.0 * builder.dt() * builder.dt(), true};
  for (std::size_t k = 0; k < ev.size(); ++k) {
    for (std::size_t j = 0; j < ev.slices[k].atoms.size(); ++j) {
      const Event& q = ev.slices[k].atoms[j].event;
      const double res = x_phi_t.values[k][j] - x_phi.values[k][j] * clock.value(q) - phi.value(q);
      r.value = std::max(r.value, std::abs(res));
    }
  }
  r.pass = r.value <= r.tolerance;
  return r;
}

ResidualReport chain_rule_residual(const FieldBuilder& builder, const OuterFunction& theta,
                                   std::span<const TestFunction> phis) {
  const TestFunction composite = compose(theta, phis);
  const FieldEvaluation x_comp = builder.build(composite);
  std::vector<FieldEvaluation> x_parts;
  for (const TestFunction& p : phis) x_parts.push_back(builder.build(p));
  const Evolution& ev = builder.evolution();
  ResidualReport r{composite.id, "chain:" + theta.id, builder.dt(), 0.0, 10.0 * builder.dt() * builder.dt(), true};
  std::vector<double> args(phis.size());
  for (std::size_t k = 0; k < ev.size(); ++k) {
    for (std::size_t j = 0; j < ev.slices[k].atoms.size(); ++j) {
      const Event& q = ev.slices[k].atoms[j].event;
      for (std::size_t l = 0; l < phis.size(); ++l) args[l] = phis[l].value(q);
      const std::vector<double> grad = theta.gradient(args);
      double rhs = 0.0;
      for (std::size_t l = 0; l < phis.size(); ++l) rhs += grad[l] * x_parts[l].values[k][j];
      r.value = std::max(r.value, std::abs(x_comp.values[k][j] - rhs));
    }
  }
  r.pass = r.value <= r.tolerance;
  return r;
}

ResidualReport causality_residual(const FieldBuilder& builder, const TestFunction& f, const TestFunction& phi) {
  const Evolution& ev = builder.evolution();
  for (std::size_t k = 0; k < ev.size(); ++k) {
    for (const Atom& a : ev.slices[k].atoms) {
      if (phi.value(a.event) < 0.0) throw DomainError("causality residual needs Phi >= 0; " + phi.id + " is negative");
    }
  }
  const FieldEvaluation x_phi = builder.build(phi);
  const FieldEvaluation x_phi_f = builder.build(product(phi, f));
  ResidualReport r{phi.id + "|" + f.id, "causality", builder.dt(), std::numeric_limits<double>::infinity(), 0.0,
                   true};
  for (std::size_t k = 0; k < ev.size(); ++k) {
    for (std::size_t j = 0; j < ev.slices[k].atoms.size(); ++j) {
      const double v = x_phi_f.values[k][j] - x_phi.values[k][j] * f.value(ev.slices[k].atoms[j].event);
      r.value = std::min(r.value, v);
    }
  }
  r.tolerance = -10.0 * builder.dt() * sup_scale(builder, phi);
  r.pass = r.value >= r.tolerance;
  return r;
}

std::vector<double> lambda_curve(const Evolution& ev, const std::vector<std::vector<double>>& values) {
  if (values.size() != ev.size()) throw DomainError("lambda_curve: one row per slice required");
  std::vector<double> out(ev.size(), 0.0);
  for (std::size_t k = 0; k < ev.size(); ++k) {
    for (std::size_t j = 0; j < values[k].size(); ++j) out[k] += to_double(ev.slices[k].atoms[j].weight) * values[k][j];
  }
  return out;
}

ResidualReport lambda_derivative_check(const FieldBuilder& builder, const TestFunction& phi) {
  const Evolution& ev = builder.evolution();
  const std::vector<double> lam = lambda_curve(ev, builder.sample(phi));
  const std::vector<double> lam_x = lambda_curve(ev, builder.build(phi).values);
  ResidualReport r{phi.id, "lambda", builder.dt(), 0.0, 10.0 * builder.dt() * sup_scale(builder, phi), true};
  for (std::size_t k = 1; k + 1 < ev.size(); ++k) {
    const double d = (lam[k + 1] - lam[k - 1]) / (ev.times[k + 1] - ev.times[k - 1]);
    r.value = std::max(r.value, std::abs(d - lam_x[k]));
  }
  r.pass = r.value <= r.tolerance;
  return r;
}

ResidualReport extension_residual(const FieldBuilder& builder, const TestFunction& psi,
                                  const PartitionOfUnity& partition) {
  const FieldEvaluation ext = builder.extend(psi, partition);
  const FieldEvaluation direct = builder.build(psi);
  ResidualReport r{psi.id, "extension", builder.dt(), 0.0, 10.0 * builder.dt() * std::max(1.0, sup_scale(builder, psi)),
                   true};
  std::size_t defined = 0;
  for (std::size_t k = 0; k < ext.values.size(); ++k) {
    for (std::size_t j = 0; j < ext.values[k].size(); ++j) {
      if (!ext.defined[k][j]) continue;
      ++defined;
      r.value = std::max(r.value, std::abs(ext.values[k][j] - direct.values[k][j]));
    }
  }
  if (defined == 0) throw DomainError("partition covers no atom of the evolution");
  r.pass = r.value <= r.tolerance;
  return r;
}

double locality_violation(const FieldBuilder& builder, const TestFunction& phi) {
  const Evolution& ev = builder.evolution();
  const CurveMeasure& sigma = builder.sigma();
  const std::size_t n = ev.size();
  std::vector<std::vector<bool>> quiet = mask_like(ev, true);
  for (std::size_t c = 0; c < sigma.atoms.size(); ++c) {
    const CausalCurve& curve = sigma.atoms[c].curve;
    for (std::size_t k = 0; k < n; ++k) {
      const auto [lo, hi] = stencil(k, n);
      if (phi.value(curve.points[lo]) != 0.0 || phi.value(curve.points[k]) != 0.0 ||
          phi.value(curve.points[hi]) != 0.0) {
        quiet[k][builder.atom_index(c, k)] = false;
      }
    }
  }
  const FieldEvaluation x = builder.build(phi);
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < quiet[k].size(); ++j) {
      if (quiet[k][j]) worst = std::max(worst, std::abs(x.values[k][j]));
    }
  }
  return worst;
}

}  // namespace causevo
