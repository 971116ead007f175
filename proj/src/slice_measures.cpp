#include "causevo/slice_measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "causevo/causal_curves.hpp"
#include "causevo/flow.hpp"

namespace causevo {

namespace {

bool event_less(const Event& a, const Event& b) { return a.x < b.x || (a.x == b.x && a.t < b.t); }

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

BigInt denominator_lcm(const SliceMeasure& mu, const SliceMeasure& nu) {
  BigInt l = 1;
  for (const SliceMeasure* m : {&mu, &nu}) {
    for (const Atom& a : m->atoms) {
      l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(a.weight));
    }
  }
  return l;
}

BigInt scaled(const Rational& w, const BigInt& l) {
  return boost::multiprecision::numerator(w) * (l / boost::multiprecision::denominator(w));
}

void require_oriented(const SliceMeasure& mu, const SliceMeasure& nu) {
  if (mu.time > nu.time) {
    std::ostringstream os;
    os << "coupling source time " << mu.time << " is after target time " << nu.time;
    throw DomainError(os.str());
  }
}

void require_probability(const SliceMeasure& m, const char* name) {
  if (m.atoms.empty() || m.total_mass() != 1) {
    throw InputError(std::string(name) + " is not a probability measure");
  }
}

// Source 0, mu atoms 1..n, nu atoms n+1..n+m, sink n+m+1. Middle edges are
// added in lexicographic (i, j) order.
template <class Cap>
struct Bipartite {
  FlowNetwork<Cap> net;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> pair_edges;
  std::size_t sink;
};

template <class Cap>
Bipartite<Cap> build_bipartite(const SpacetimeModel& model, const SliceMeasure& mu, const SliceMeasure& nu,
                               const std::vector<Cap>& src, const std::vector<Cap>& dst, Cap big, double slack,
                               Cap tolerance, bool with_cost) {
  const std::size_t n = mu.atoms.size();
  const std::size_t m = nu.atoms.size();
  Bipartite<Cap> b{FlowNetwork<Cap>(n + m + 2, tolerance), {}, {}, n + m + 1};
  for (std::size_t i = 0; i < n; ++i) b.net.add_edge(0, 1 + i, src[i]);
  for (std::size_t i = 0; i < n; ++i) {
    const EmbeddedPoint ei = embed(model, mu.atoms[i].event);
    for (std::size_t j = 0; j < m; ++j) {
      if (!causally_precedes(model, mu.atoms[i].event, nu.atoms[j].event, slack)) continue;
      double cost = 0.0;
      if (with_cost) {
        const double d = embedded_distance(ei, embed(model, nu.atoms[j].event));
        cost = d * d;
      }
      b.pairs.emplace_back(i, j);
      b.pair_edges.push_back(b.net.add_edge(1 + i, 1 + n + j, big, cost));
    }
  }
  for (std::size_t j = 0; j < m; ++j) b.net.add_edge(1 + n + j, b.sink, dst[j]);
  return b;
}

struct ExactFlow {
  Bipartite<BigInt> graph;
  BigInt scale;
  BigInt value;
};

ExactFlow exact_graph(const SpacetimeModel& model, const SliceMeasure& mu, const SliceMeasure& nu, double slack,
                      bool with_cost) {
  const BigInt l = denominator_lcm(mu, nu);
  std::vector<BigInt> src;
  std::vector<BigInt> dst;
  for (const Atom& a : mu.atoms) src.push_back(scaled(a.weight, l));
  for (const Atom& a : nu.atoms) dst.push_back(scaled(a.weight, l));
  return {build_bipartite<BigInt>(model, mu, nu, src, dst, l, slack, BigInt(0), with_cost), l, BigInt(0)};
}

}  // namespace

SliceMeasure SliceMeasure::make(double time, std::vector<Atom> atoms) {
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) { return event_less(a.event, b.event); });
  SliceMeasure out;
  out.time = time;
  for (Atom& a : atoms) {
    if (a.weight == 0) continue;
    if (!out.atoms.empty() && out.atoms.back().event == a.event) {
      out.atoms.back().weight += a.weight;
    } else {
      out.atoms.push_back(std::move(a));
    }
  }
  return out;
}

Rational SliceMeasure::total_mass() const {
  Rational s = 0;
  for (const Atom& a : atoms) s += a.weight;
  return s;
}

std::vector<Event> SliceMeasure::support() const {
  std::vector<Event> out;
  out.reserve(atoms.size());
  for (const Atom& a : atoms) out.push_back(a.event);
  return out;
}

std::optional<std::size_t> SliceMeasure::index_of(const Event& e) const {
  auto it = std::lower_bound(atoms.begin(), atoms.end(), e,
                             [](const Atom& a, const Event& v) { return event_less(a.event, v); });
  if (it == atoms.end() || !(it->event == e)) return std::nullopt;
  return static_cast<std::size_t>(it - atoms.begin());
}

Rational SliceMeasure::mass_of(const Event& e) const {
  auto idx = index_of(e);
  return idx ? atoms[*idx].weight : Rational(0);
}

void validate_slice(const SpacetimeModel& model, const TemporalFunction& frame, const SliceMeasure& slice) {
  if (slice.atoms.empty()) throw InputError("slice has no atoms");
  for (std::size_t j = 0; j < slice.atoms.size(); ++j) {
    const Atom& a = slice.atoms[j];
    model.check_event(a.event);
    if (a.weight <= 0) throw InputError("slice atom has nonpositive weight");
    const double tol = frame.is_canonical() ? 0.0 : kParametrizationTolerance;
    if (std::abs(frame(a.event) - slice.time) > tol) {
      std::ostringstream os;
      os << "atom (" << a.event.t << ", " << a.event.x << ") is off the slice T = " << slice.time;
      throw InputError(os.str());
    }
    if (j > 0 && !event_less(slice.atoms[j - 1].event, a.event)) {
      throw InputError("slice atoms are not in canonical order");
    }
  }
  if (slice.total_mass() != 1) {
    throw InputError("slice at T = " + std::to_string(slice.time) + " has mass " +
                     format_rational(slice.total_mass()));
  }
}

void validate_evolution(const Evolution& ev) {
  ev.frame.require_valid_on(ev.model);
  if (ev.times.empty()) throw InputError("evolution has an empty grid");
  if (ev.times.size() != ev.slices.size()) throw InputError("evolution has one slice per grid time required");
  for (std::size_t k = 0; k < ev.times.size(); ++k) {
    if (k > 0 && !(ev.times[k] > ev.times[k - 1])) throw InputError("evolution grid is not strictly increasing");
    if (ev.slices[k].time != ev.times[k]) throw InputError("slice time differs from its grid time");
    validate_slice(ev.model, ev.frame, ev.slices[k]);
  }
}

double Coupling::cost(const SpacetimeModel& model) const {
  double total = 0.0;
  for (const auto& [ij, w] : mass) {
    const double d = embedded_distance(embed(model, source.atoms[ij.first].event),
                                       embed(model, target.atoms[ij.second].event));
    total += to_double(w) * d * d;
  }
  return total;
}

CouplingCheck validate_coupling(const SpacetimeModel& model, const Coupling& coupling, double slack) {
  const std::size_t n = coupling.source.atoms.size();
  const std::size_t m = coupling.target.atoms.size();
  std::vector<Rational> rows(n, Rational(0));
  std::vector<Rational> cols(m, Rational(0));
  for (const auto& [ij, w] : coupling.mass) {
    if (ij.first >= n || ij.second >= m) return {false, "mass on an index outside the marginals"};
    if (w <= 0) return {false, "nonpositive mass entry"};
    const Event& p = coupling.source.atoms[ij.first].event;
    const Event& q = coupling.target.atoms[ij.second].event;
    if (!causally_precedes(model, p, q, slack)) {
      std::ostringstream os;
      os << "mass on acausal pair (" << p.t << ", " << p.x << ") -> (" << q.t << ", " << q.x << ")";
      return {false, os.str()};
    }
    rows[ij.first] += w;
    cols[ij.second] += w;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i] != coupling.source.atoms[i].weight) return {false, "source marginal mismatch at atom " + std::to_string(i)};
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (cols[j] != coupling.target.atoms[j].weight) return {false, "target marginal mismatch at atom " + std::to_string(j)};
  }
  return {};
}

bool causal_coupling_feasible(const SpacetimeModel& model, const SliceMeasure& mu, const SliceMeasure& nu,
                              const FeasibilityOptions& options) {
  require_oriented(mu, nu);
  require_probability(mu, "source");
  require_probability(nu, "target");
  if (options.arithmetic == Arithmetic::Rational) {
    ExactFlow f = exact_graph(model, mu, nu, options.slack, false);
    const BigInt value = f.graph.net.max_flow(0, f.graph.sink);
    return value == f.scale;
  }
  std::vector<double> src;
  std::vector<double> dst;
  for (const Atom& a : mu.atoms) src.push_back(to_double(a.weight));
  for (const Atom& a : nu.atoms) dst.push_back(to_double(a.weight));
  auto g = build_bipartite<double>(model, mu, nu, src, dst, 2.0, options.slack, 1e-15, false);
  const double value = g.net.max_flow(0, g.sink);
  return std::abs(value - 1.0) <= options.float_tolerance;
}

Coupling find_causal_coupling(const SpacetimeModel& model, const SliceMeasure& mu, const SliceMeasure& nu,
                              double slack) {
  require_oriented(mu, nu);
  require_probability(mu, "source");
  require_probability(nu, "target");
  ExactFlow f = exact_graph(model, mu, nu, slack, true);
  auto [sent, cost] = f.graph.net.min_cost_flow(0, f.graph.sink, f.scale);
  (void)cost;
  if (sent != f.scale) {
    // The flow is maximal; the source side of the residual cut gives K.
    f.graph.net.max_flow(0, f.graph.sink);
    const std::vector<bool> reach = f.graph.net.residual_reachable(0);
    std::vector<Event> certificate;
    for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
      if (reach[1 + i]) certificate.push_back(mu.atoms[i].event);
    }
    Rational mu_mass = upset_mass(model, mu, certificate, slack);
    Rational nu_mass = upset_mass(model, nu, certificate, slack);
    std::ostringstream os;
    os << "no causal coupling from T = " << mu.time << " to T = " << nu.time << ": K of " << certificate.size()
       << " event(s) has mu(J+(K)) = " << format_rational(mu_mass)
       << " > nu(J+(K)) = " << format_rational(nu_mass);
    throw InfeasibleCouplingError(os.str(), std::move(certificate), std::move(mu_mass), std::move(nu_mass));
  }
  Coupling out{mu, nu, {}};
  for (std::size_t e = 0; e < f.graph.pairs.size(); ++e) {
    const BigInt flow = f.graph.net.flow_on(f.graph.pair_edges[e]);
    if (flow != 0) out.mass[f.graph.pairs[e]] = Rational(flow, f.scale);
  }
  return out;
}

Rational upset_mass(const SpacetimeModel& model, const SliceMeasure& mu, std::span<const Event> set,
                    double slack) {
  Rational total = 0;
  if (set.empty()) return total;
  for (const Atom& a : mu.atoms) {
    if (in_causal_future_of_set(model, set, a.event, slack)) total += a.weight;
  }
  return total;
}

UpsetResult upset_characterization_check(const SpacetimeModel& model, const SliceMeasure& mu,
                                         const SliceMeasure& nu, std::span<const std::vector<Event>> family,
                                         double slack) {
  UpsetResult out;
  bool first = true;
  for (const std::vector<Event>& k : family) {
    if (k.empty()) continue;
    const Rational margin = upset_mass(model, nu, k, slack) - upset_mass(model, mu, k, slack);
    if (first || margin < out.worst_margin) {
      out.worst_margin = margin;
      out.worst_set = k;
      first = false;
    }
  }
  out.holds = first || out.worst_margin >= 0;
  return out;
}

std::vector<std::vector<Event>> default_k_family(const SliceMeasure& mu) {
  const std::vector<Event> s = mu.support();
  const std::size_t n = s.size();
  std::vector<std::vector<Event>> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({s[i]});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.push_back({s[i], s[j]});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) out.push_back({s[i], s[j], s[k]});
    }
  }
  if (n > 3) out.push_back(s);
  return out;
}

std::vector<std::vector<Event>> all_subsets_family(const SliceMeasure& mu) {
  const std::vector<Event> s = mu.support();
  if (s.size() > 20) throw DomainError("all_subsets_family: more than 20 atoms");
  std::vector<std::vector<Event>> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << s.size()); ++mask) {
    std::vector<Event> k;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (mask & (std::size_t{1} << i)) k.push_back(s[i]);
    }
    out.push_back(std::move(k));
  }
  return out;
}

EvolutionCheck check_causal_evolution(const Evolution& ev, const FeasibilityOptions& options) {
  EvolutionCheck out;
  for (std::size_t k = 0; k + 1 < ev.size(); ++k) {
    if (causal_coupling_feasible(ev.model, ev.slices[k], ev.slices[k + 1], options)) continue;
    out.causal = false;
    out.failing_step = k;
    try {
      find_causal_coupling(ev.model, ev.slices[k], ev.slices[k + 1], options.slack);
    } catch (const InfeasibleCouplingError& e) {
      out.certificate = e.certificate();
      out.certificate_margin = e.target_mass() - e.source_mass();
    }
    return out;
  }
  return out;
}

bool is_causal_evolution(const Evolution& ev, const FeasibilityOptions& options) {
  return check_causal_evolution(ev, options).causal;
}

Coupling compose_couplings(const Coupling& first, const Coupling& second) {
  if (!(first.target == second.source)) throw DomainError("compose_couplings: middle marginals differ");
  std::vector<std::vector<std::pair<std::size_t, Rational>>> out_of(second.source.atoms.size());
  for (const auto& [jk, w] : second.mass) out_of[jk.first].emplace_back(jk.second, w);
  Coupling out{first.source, second.target, {}};
  for (const auto& [ij, w] : first.mass) {
    const Rational& middle = first.target.atoms[ij.second].weight;
    for (const auto& [k, v] : out_of[ij.second]) out.mass[{ij.first, k}] += w * v / middle;
  }
  return out;
}

std::vector<double> trapezoid_weights(std::span<const double> times) {
  std::vector<double> w(times.size(), 0.0);
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double h = 0.5 * (times[k + 1] - times[k]);
    w[k] += h;
    w[k + 1] += h;
  }
  return w;
}

double eta_integral(const Evolution& ev, const std::function<double(const Event&)>& f) {
  const std::vector<double> w = trapezoid_weights(ev.times);
  KahanSum sum;
  for (std::size_t k = 0; k < ev.size(); ++k) {
    for (const Atom& a : ev.slices[k].atoms) sum.add(w[k] * to_double(a.weight) * f(a.event));
  }
  return sum.sum;
}

double eta_integral(const Evolution& ev, const std::vector<std::vector<double>>& values) {
  if (values.size() != ev.size()) throw DomainError("eta_integral: one value row per slice required");
  const std::vector<double> w = trapezoid_weights(ev.times);
  KahanSum sum;
  for (std::size_t k = 0; k < ev.size(); ++k) {
    if (values[k].size() != ev.slices[k].atoms.size()) throw DomainError("eta_integral: row size mismatch");
    for (std::size_t j = 0; j < values[k].size(); ++j) {
      sum.add(w[k] * to_double(ev.slices[k].atoms[j].weight) * values[k][j]);
    }
  }
  return sum.sum;
}

}  // namespace causevo
