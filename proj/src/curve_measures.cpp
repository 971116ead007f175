#include "causevo/curve_measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "causevo/flow.hpp"

namespace causevo {

CurveMeasure CurveMeasure::make(double a, double b, std::vector<CurveAtom> atoms) {
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const CurveAtom& l, const CurveAtom& r) { return l.curve.points < r.curve.points; });
  CurveMeasure out;
  out.a = a;
  out.b = b;
  for (CurveAtom& c : atoms) {
    if (c.weight == 0) continue;
    if (!out.atoms.empty() && out.atoms.back().curve == c.curve) {
      out.atoms.back().weight += c.weight;
    } else {
      out.atoms.push_back(std::move(c));
    }
  }
  return out;
}

Rational CurveMeasure::total_mass() const {
  Rational s = 0;
  for (const CurveAtom& c : atoms) s += c.weight;
  return s;
}

void validate_curve_measure(const SpacetimeModel& model, const CurveMeasure& sigma, double slack) {
  if (sigma.atoms.empty()) throw InputError("curve measure has no atoms");
  if (sigma.total_mass() != 1) throw InputError("curve measure mass is " + format_rational(sigma.total_mass()));
  const CausalCurve& ref = sigma.atoms.front().curve;
  if (ref.times.empty() || ref.start() != sigma.a || ref.end() != sigma.b) {
    throw InputError("curve grid does not span the measure's interval");
  }
  for (std::size_t i = 0; i < sigma.atoms.size(); ++i) {
    const CurveAtom& c = sigma.atoms[i];
    if (c.weight <= 0) throw InputError("curve atom has nonpositive weight");
    if (c.curve.times != ref.times) throw InputError("curve atoms do not share a grid");
    if (!(c.curve.frame == ref.frame)) throw InputError("curve atoms do not share a frame");
    const CurveValidation v = validate_curve(model, c.curve, slack);
    if (!v.valid) {
      std::ostringstream os;
      os << "curve atom " << i << " invalid at sample " << v.first_violation.value_or(0) << ": " << v.reason;
      throw InputError(os.str());
    }
  }
}

std::size_t grid_index(const CurveMeasure& sigma, double t) {
  if (sigma.atoms.empty()) throw DomainError("empty curve measure");
  const std::vector<double>& g = sigma.grid();
  auto it = std::lower_bound(g.begin(), g.end(), t);
  if (it == g.end() || *it != t) {
    std::ostringstream os;
    os.precision(17);
    os << "time " << t << " is not on the curve-measure grid";
    throw DomainError(os.str());
  }
  return static_cast<std::size_t>(it - g.begin());
}

SliceMeasure pushforward_eval(const CurveMeasure& sigma, double t) {
  const std::size_t k = grid_index(sigma, t);
  std::vector<Atom> atoms;
  atoms.reserve(sigma.atoms.size());
  for (const CurveAtom& c : sigma.atoms) atoms.push_back({c.curve.points[k], c.weight});
  return SliceMeasure::make(t, std::move(atoms));
}

Coupling joint_pushforward(const CurveMeasure& sigma, double s, double t) {
  if (!(s <= t)) throw DomainError("joint_pushforward needs s <= t");
  const std::size_t ks = grid_index(sigma, s);
  const std::size_t kt = grid_index(sigma, t);
  Coupling out{pushforward_eval(sigma, s), pushforward_eval(sigma, t), {}};
  for (const CurveAtom& c : sigma.atoms) {
    const std::size_t i = *out.source.index_of(c.curve.points[ks]);
    const std::size_t j = *out.target.index_of(c.curve.points[kt]);
    out.mass[{i, j}] += c.weight;
  }
  return out;
}

CurveMeasure concatenate_curve_measures(const CurveMeasure& first, const CurveMeasure& second) {
  if (first.b != second.a) throw DomainError("concatenate_curve_measures: intervals do not meet");
  const SliceMeasure left = pushforward_eval(first, first.b);
  const SliceMeasure right = pushforward_eval(second, second.a);
  if (!(left == right)) {
    std::ostringstream os;
    os << "concatenate_curve_measures: marginals differ at T = " << first.b;
    throw DomainError(os.str());
  }
  std::map<Event, std::vector<std::size_t>> outgoing;
  for (std::size_t j = 0; j < second.atoms.size(); ++j) {
    outgoing[second.atoms[j].curve.points.front()].push_back(j);
  }
  std::vector<CurveAtom> atoms;
  for (const CurveAtom& in : first.atoms) {
    const Event& q = in.curve.points.back();
    const Rational m = left.mass_of(q);
    for (std::size_t j : outgoing[q]) {
      const CurveAtom& out = second.atoms[j];
      atoms.push_back({concatenate_curves(in.curve, out.curve), in.weight * out.weight / m});
    }
  }
  return CurveMeasure::make(first.a, second.b, std::move(atoms));
}

CurveMeasure concatenate_chain(std::span<const CurveMeasure> chain) {
  if (chain.empty()) throw DomainError("concatenate_chain: empty chain");
  if (chain.size() == 1) return chain.front();
  const std::size_t mid = chain.size() / 2;
  return concatenate_curve_measures(concatenate_chain(chain.subspan(0, mid)), concatenate_chain(chain.subspan(mid)));
}

CurveMeasure lift_coupling(const SpacetimeModel& model, const Coupling& coupling, std::span<const double> grid) {
  std::vector<CurveAtom> atoms;
  atoms.reserve(coupling.mass.size());
  for (const auto& [ij, w] : coupling.mass) {
    atoms.push_back({connecting_causal_curve(model, coupling.source.atoms[ij.first].event,
                                             coupling.target.atoms[ij.second].event, grid),
                     w});
  }
  return CurveMeasure::make(grid.front(), grid.back(), std::move(atoms));
}

CurveMeasure chain_construct_sigma(const Evolution& ev, std::span<const std::size_t> nodes) {
  if (!ev.frame.is_canonical()) throw DomainError("sigma construction needs the canonical frame");
  if (nodes.empty() || nodes.front() != 0 || nodes.back() + 1 != ev.size()) {
    throw DomainError("sigma construction nodes must start at 0 and end at the last grid index");
  }
  if (nodes.size() == 1) {
    std::vector<CurveAtom> atoms;
    for (const Atom& a : ev.slices[0].atoms) {
      atoms.push_back({CausalCurve{{ev.times[0]}, {a.event}, ev.frame}, a.weight});
    }
    return CurveMeasure::make(ev.times[0], ev.times[0], std::move(atoms));
  }
  std::vector<CurveMeasure> pieces;
  pieces.reserve(nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const std::size_t k0 = nodes[i];
    const std::size_t k1 = nodes[i + 1];
    if (!(k1 > k0)) throw DomainError("sigma construction nodes must increase");
    Coupling omega;
    try {
      omega = find_causal_coupling(ev.model, ev.slices[k0], ev.slices[k1]);
    } catch (const InfeasibleCouplingError& e) {
      std::ostringstream os;
      os << "step " << i << " [" << ev.times[k0] << ", " << ev.times[k1] << "]: " << e.what();
      throw InfeasibleCouplingError(os.str(), e.certificate(), e.source_mass(), e.target_mass());
    }
    const std::span<const double> grid(ev.times.data() + k0, k1 - k0 + 1);
    pieces.push_back(lift_coupling(ev.model, omega, grid));
  }
  return concatenate_chain(pieces);
}

std::vector<std::size_t> dyadic_indices(const Evolution& ev, unsigned level) {
  if (level > 30) throw DomainError("dyadic level too large");
  const std::size_t steps = std::size_t{1} << level;
  std::vector<std::size_t> out;
  const double a = ev.start();
  const double b = ev.end();
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = i == steps ? b : a + static_cast<double>(i) * (b - a) / static_cast<double>(steps);
    auto it = std::lower_bound(ev.times.begin(), ev.times.end(), t);
    std::size_t k = static_cast<std::size_t>(it - ev.times.begin());
    // Accept the nearest grid time within rounding of the dyadic formula.
    const double tol = 1e-9 * (1.0 + std::abs(a) + std::abs(b));
    if (k < ev.size() && std::abs(ev.times[k] - t) <= tol) {
    } else if (k > 0 && std::abs(ev.times[k - 1] - t) <= tol) {
      --k;
    } else {
      std::ostringstream os;
      os << "dyadic time " << t << " of level " << level << " is not on the evolution grid";
      throw DomainError(os.str());
    }
    out.push_back(k);
  }
  return out;
}

CurveMeasure dyadic_construct_sigma(const Evolution& ev, unsigned level) {
  const std::vector<std::size_t> nodes = dyadic_indices(ev, level);
  return chain_construct_sigma(ev, nodes);
}

double wasserstein_curve_distance(const SpacetimeModel& model, const CurveMeasure& first,
                                  const CurveMeasure& second, double a, double b) {
  BigInt l = 1;
  for (const CurveMeasure* m : {&first, &second}) {
    for (const CurveAtom& c : m->atoms) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(c.weight));
  }
  const std::size_t n = first.atoms.size();
  const std::size_t m = second.atoms.size();
  FlowNetwork<BigInt> net(n + m + 2);
  const std::size_t sink = n + m + 1;
  auto scaled = [&l](const Rational& w) {
    return BigInt(boost::multiprecision::numerator(w) * (l / boost::multiprecision::denominator(w)));
  };
  for (std::size_t i = 0; i < n; ++i) net.add_edge(0, 1 + i, scaled(first.atoms[i].weight));
  std::vector<std::size_t> edges;
  std::vector<double> costs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = uniform_distance(model, first.atoms[i].curve, second.atoms[j].curve, a, b);
      edges.push_back(net.add_edge(1 + i, 1 + n + j, l, d));
      costs.push_back(d);
    }
  }
  for (std::size_t j = 0; j < m; ++j) net.add_edge(1 + n + j, sink, scaled(second.atoms[j].weight));
  auto [sent, cost] = net.min_cost_flow(0, sink, l);
  (void)cost;
  if (sent != l) throw DomainError("wasserstein_curve_distance: measures have different mass");
  double total = 0.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const BigInt f = net.flow_on(edges[e]);
    if (f != 0) total += to_double(Rational(f, l)) * costs[e];
  }
  return total;
}

CurveMeasure pad_with_rest_curves(const CurveMeasure& sigma, std::span<const double> before,
                                  std::span<const double> after) {
  if (!sigma.frame().is_canonical()) throw DomainError("pad_with_rest_curves needs the canonical frame");
  if (!before.empty() && before.back() != sigma.a) throw DomainError("padding grid must end at the start time");
  if (!after.empty() && after.front() != sigma.b) throw DomainError("padding grid must start at the end time");
  std::vector<CurveAtom> atoms;
  for (const CurveAtom& c : sigma.atoms) {
    CausalCurve curve;
    curve.frame = c.curve.frame;
    const Event head = c.curve.points.front();
    const Event tail = c.curve.points.back();
    for (std::size_t k = 0; k + 1 < before.size(); ++k) {
      curve.times.push_back(before[k]);
      curve.points.push_back({before[k], head.x});
    }
    curve.times.insert(curve.times.end(), c.curve.times.begin(), c.curve.times.end());
    curve.points.insert(curve.points.end(), c.curve.points.begin(), c.curve.points.end());
    for (std::size_t k = after.empty() ? 0 : 1; k < after.size(); ++k) {
      curve.times.push_back(after[k]);
      curve.points.push_back({after[k], tail.x});
    }
    atoms.push_back({std::move(curve), c.weight});
  }
  const double a = before.empty() ? sigma.a : before.front();
  const double b = after.empty() ? sigma.b : after.back();
  return CurveMeasure::make(a, b, std::move(atoms));
}

}  // namespace causevo
