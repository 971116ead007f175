#include "causevo/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "causevo/fixtures.hpp"
#include "causevo/io.hpp"
#include "causevo/observers.hpp"
#include "causevo/vector_field.hpp"

namespace causevo {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::optional<std::string> model;
  std::string input;
  std::vector<unsigned> levels{1, 2, 3};
  double dt = 1e-3;
  std::vector<std::string> frames{"canonical", "boost:0.3", "boost:0.6"};
  std::string out = "causevo_out";
  std::uint64_t seed = 20240611;
  std::string arith = "rational";
  double tolerance_scale = 1.0;
  std::string demo;
};

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string events_text(const std::vector<Event>& events) {
  std::string s;
  for (const Event& e : events) {
    if (!s.empty()) s += ';';
    s += "(" + num(e.t) + " " + num(e.x) + ")";
  }
  return s;
}

void validate_config(const RunConfig& c) {
  if (c.levels.empty()) throw InputError("--levels needs at least one level");
  for (unsigned l : c.levels) {
    if (l < 1) throw InputError("levels must be >= 1");
  }
  if (!(c.dt > 0.0)) throw InputError("--dt must be positive");
  if (!(c.tolerance_scale > 0.0)) throw InputError("tolerance_scale must be positive");
  if (c.arith != "rational" && c.arith != "float") throw InputError("--arith must be rational or float");
}

void apply_config_file(const std::string& path, RunConfig& c, const CLI::App& app) {
  const Json j = read_json_file(path);
  try {
    auto unset = [&](const char* flag) { return app.count(flag) == 0; };
    if (j.contains("model") && unset("--model")) {
      c.model = j.at("model").is_string() ? j.at("model").get<std::string>() : j.at("model").dump();
    }
    if (j.contains("input") && unset("--input")) c.input = j.at("input").get<std::string>();
    if (j.contains("levels") && unset("--levels")) c.levels = j.at("levels").get<std::vector<unsigned>>();
    if (j.contains("dt") && unset("--dt")) c.dt = j.at("dt").get<double>();
    if (j.contains("frames") && unset("--frames")) c.frames = j.at("frames").get<std::vector<std::string>>();
    if (j.contains("out") && unset("--out")) c.out = j.at("out").get<std::string>();
    if (j.contains("seed") && unset("--seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("arith") && unset("--arith")) c.arith = j.at("arith").get<std::string>();
    if (j.contains("tolerance_scale")) c.tolerance_scale = j.at("tolerance_scale").get<double>();
  } catch (const Json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void scale_tolerance(ResidualReport& r, double scale) {
  r.tolerance *= scale;
  r.pass = r.kind == "causality" ? r.value >= r.tolerance : r.value <= r.tolerance;
}

// Every `factor`-th sample of every curve.
CurveMeasure coarsen(const CurveMeasure& sigma, std::size_t factor) {
  if (factor == 1) return sigma;
  const std::size_t n = sigma.grid().size();
  if ((n - 1) % factor != 0) throw DomainError("grid cannot be coarsened by " + std::to_string(factor));
  std::vector<CurveAtom> atoms;
  for (const CurveAtom& c : sigma.atoms) {
    CausalCurve curve;
    curve.frame = c.curve.frame;
    for (std::size_t k = 0; k < n; k += factor) {
      curve.times.push_back(c.curve.times[k]);
      curve.points.push_back(c.curve.points[k]);
    }
    atoms.push_back({std::move(curve), c.weight});
  }
  return CurveMeasure::make(sigma.a, sigma.b, std::move(atoms));
}

// Bumps centred on the heaviest curve at 30, 50 and 70 percent of the window.
// Radii keep the support `margin` away from both ends; bumps that do not fit
// are left out.
std::vector<TestFunction> auto_bumps(const SpacetimeModel& model, const CurveMeasure& sigma, std::uint64_t seed,
                                     double margin = 0.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.9, 1.1);
  std::size_t heaviest = 0;
  for (std::size_t i = 1; i < sigma.atoms.size(); ++i) {
    if (sigma.atoms[i].weight > sigma.atoms[heaviest].weight) heaviest = i;
  }
  const CausalCurve& curve = sigma.atoms[heaviest].curve;
  const double span = sigma.b - sigma.a;
  std::vector<TestFunction> out;
  for (double frac : {0.3, 0.5, 0.7}) {
    const Event c = evaluate_curve(model, curve, sigma.a + frac * span);
    const double room = std::min(frac, 1.0 - frac) * span - margin;
    const double rt = std::min(span / 8.0 * jitter(rng), room);
    const double rx = (model.kind() == ModelKind::Cylinder ? 1.0 : 0.5) * jitter(rng);
    if (rt <= 0.0) continue;
    out.push_back(make_bump(model, {c.t, c.x}, rt, rx));
  }
  return out;
}

// The residual suite run on one field: continuity, clock, Lambda, Leibniz,
// square chain rule and causality against the model's battery.
std::vector<ResidualReport> field_suite(const FieldBuilder& builder, const std::vector<TestFunction>& bumps,
                                        double tolerance_scale) {
  const Evolution& ev = builder.evolution();
  std::vector<ResidualReport> rows;
  const std::vector<Event> seeds = ev.slices.front().support();
  const int ns[] = {1, 4};
  const std::vector<TestFunction> causal = causal_battery(ev.model, seeds, ns);
  for (std::size_t i = 0; i < bumps.size(); ++i) {
    const TestFunction& phi = bumps[i];
    rows.push_back(continuity_residual(builder, phi));
    rows.push_back(clock_normalization_residual(builder, phi));
    rows.push_back(lambda_derivative_check(builder, phi));
    const TestFunction sq[] = {phi};
    rows.push_back(chain_rule_residual(builder, square(), sq));
    if (i + 1 < bumps.size()) {
      const TestFunction pair[] = {phi, bumps[i + 1]};
      rows.push_back(chain_rule_residual(builder, leibniz_product(), pair));
    }
    for (const TestFunction& f : causal) rows.push_back(causality_residual(builder, f, phi));
  }
  for (ResidualReport& r : rows) scale_tolerance(r, tolerance_scale);
  return rows;
}

const ResidualReport* worst_offender(const std::vector<ResidualReport>& rows) {
  const ResidualReport* worst = nullptr;
  double worst_ratio = 0.0;
  for (const ResidualReport& r : rows) {
    if (r.pass) continue;
    const double ratio = r.kind == "causality" ? -r.value / std::max(-r.tolerance, 1e-300)
                                               : r.value / std::max(r.tolerance, 1e-300);
    if (!worst || ratio > worst_ratio) {
      worst = &r;
      worst_ratio = ratio;
    }
  }
  return worst;
}

std::string residual_csv(const std::vector<ResidualReport>& rows) {
  std::string s = residual_csv_header() + "\n";
  for (const ResidualReport& r : rows) s += residual_csv_row(r) + "\n";
  return s;
}

Evolution load_evolution(const RunConfig& c) {
  if (c.input.empty()) throw InputError("--input is required");
  Evolution ev = evolution_from_json(read_json_file(c.input));
  if (c.model && !(parse_model_spec(*c.model) == ev.model)) {
    throw InputError("--model differs from the model recorded in " + c.input);
  }
  return ev;
}

// A curve-measure file, or an evolution from which the full-resolution chain
// sigma is built.
LoadedCurveMeasure load_sigma(const RunConfig& c, std::ostream& out) {
  if (c.input.empty()) throw InputError("--input is required");
  const Json j = read_json_file(c.input);
  if (j.contains("interval")) {
    LoadedCurveMeasure m = curve_measure_from_json(j, false);
    if (c.model && !(parse_model_spec(*c.model) == m.model)) {
      throw InputError("--model differs from the model recorded in " + c.input);
    }
    return m;
  }
  Evolution ev = evolution_from_json(j);
  std::vector<std::size_t> nodes(ev.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) nodes[k] = k;
  out << "building sigma from the evolution on all " << ev.size() << " grid times\n";
  return {ev.model, chain_construct_sigma(ev, nodes)};
}

int cmd_check_causal(const RunConfig& c, std::ostream& out) {
  const Evolution ev = load_evolution(c);
  FeasibilityOptions opts;
  opts.arithmetic = c.arith == "float" ? Arithmetic::Float : Arithmetic::Rational;
  std::string csv = "step,t_from,t_to,feasible,upset_holds,worst_margin,certificate\n";
  bool causal = true;
  bool consistent = true;
  for (std::size_t k = 0; k + 1 < ev.size(); ++k) {
    const SliceMeasure& mu = ev.slices[k];
    const SliceMeasure& nu = ev.slices[k + 1];
    const bool feasible = causal_coupling_feasible(ev.model, mu, nu, opts);
    const auto family = default_k_family(mu);
    const UpsetResult up = upset_characterization_check(ev.model, mu, nu, family);
    std::string certificate;
    std::string margin = format_rational(up.worst_margin);
    if (!feasible) {
      causal = false;
      try {
        find_causal_coupling(ev.model, mu, nu);
      } catch (const InfeasibleCouplingError& e) {
        certificate = events_text(e.certificate());
        margin = format_rational(e.target_mass() - e.source_mass());
        out << "step " << k << " [" << num(ev.times[k]) << ", " << num(ev.times[k + 1])
            << "] is not causal; certificate K = {" << certificate << "}\n";
      }
    }
    if (feasible && !up.holds) consistent = false;
    csv += std::to_string(k) + "," + num(ev.times[k]) + "," + num(ev.times[k + 1]) + "," +
           (feasible ? "true" : "false") + "," + (up.holds ? "true" : "false") + "," + margin + "," + certificate +
           "\n";
  }
  write_text_file(fs::path(c.out) / "causal_report.csv", csv);
  if (!consistent) out << "feasible step with a violated up-set condition\n";
  out << (causal ? "evolution is causal" : "evolution is not causal") << " (" << ev.size() - 1 << " steps)\n";
  return causal && consistent ? kExitPass : kExitPropertyFailure;
}

int cmd_build_sigma(const RunConfig& c, std::ostream& out) {
  const Evolution ev = load_evolution(c);
  std::vector<unsigned> levels = c.levels;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::string csv = "level,curves,marginals_exact,wasserstein_to_previous\n";
  std::optional<CurveMeasure> previous;
  bool exact_all = true;
  for (unsigned level : levels) {
    const CurveMeasure sigma = dyadic_construct_sigma(ev, level);
    validate_curve_measure(ev.model, sigma);
    bool exact = true;
    for (std::size_t k : dyadic_indices(ev, level)) {
      if (!(pushforward_eval(sigma, ev.times[k]) == ev.slices[k])) exact = false;
    }
    exact_all = exact_all && exact;
    std::string w = "";
    if (previous) w = num(wasserstein_curve_distance(ev.model, *previous, sigma, ev.start(), ev.end()));
    csv += std::to_string(level) + "," + std::to_string(sigma.atoms.size()) + "," + (exact ? "true" : "false") +
           "," + w + "\n";
    write_json_file(fs::path(c.out) / ("sigma_level_" + std::to_string(level) + ".json"),
                    curve_measure_to_json(ev.model, sigma));
    out << "level " << level << ": " << sigma.atoms.size() << " curve(s), marginals "
        << (exact ? "exact" : "NOT exact") << "\n";
    previous = sigma;
  }
  write_text_file(fs::path(c.out) / "sigma_diagnostics.csv", csv);
  return exact_all ? kExitPass : kExitPropertyFailure;
}

int cmd_verify_field(const RunConfig& c, std::ostream& out) {
  const LoadedCurveMeasure loaded = load_sigma(c, out);
  const SpacetimeModel& model = loaded.model;
  std::size_t invalid = 0;
  for (const CurveAtom& a : loaded.sigma.atoms) {
    if (!validate_curve(model, a.curve).valid) ++invalid;
  }
  const std::size_t intervals = loaded.sigma.grid().size() - 1;
  unsigned depth = *std::max_element(c.levels.begin(), c.levels.end());
  while (depth > 1 && intervals % (std::size_t{1} << (depth - 1)) != 0) --depth;
  if (depth < *std::max_element(c.levels.begin(), c.levels.end())) {
    out << "grid halves only " << depth - 1 << " time(s); refinement stops there\n";
  }
  double coarse_dt = 0.0;
  {
    const std::vector<double> g = coarsen(loaded.sigma, std::size_t{1} << (depth - 1)).grid();
    for (std::size_t k = 1; k < g.size(); ++k) coarse_dt = std::max(coarse_dt, g[k] - g[k - 1]);
  }
  const std::vector<TestFunction> bumps = auto_bumps(model, loaded.sigma, c.seed, 3.5 * coarse_dt);
  if (bumps.empty()) throw InputError("grid too coarse for test functions supported away from the ends");
  std::vector<ResidualReport> rows;
  ResidualReport curve_row{"sigma", "curve_causality", 0.0, static_cast<double>(invalid), 0.0, invalid == 0};
  rows.push_back(curve_row);
  for (unsigned l = 0; l < depth; ++l) {
    const std::size_t factor = std::size_t{1} << l;
    const CurveMeasure sigma = coarsen(loaded.sigma, factor);
    const FieldBuilder builder(sigma, evolution_from_sigma(model, sigma));
    const std::vector<ResidualReport> level_rows = field_suite(builder, bumps, c.tolerance_scale);
    rows.insert(rows.end(), level_rows.begin(), level_rows.end());
  }
  write_text_file(fs::path(c.out) / "field_residuals.csv", residual_csv(rows));
  if (const ResidualReport* w = worst_offender(rows)) {
    out << "residual breach: " << w->kind << " for " << w->phi_id << " at dt " << num(w->dt) << ": value "
        << num(w->value) << ", tolerance " << num(w->tolerance) << "\n";
    return kExitPropertyFailure;
  }
  out << "all " << rows.size() << " residual checks within tolerance\n";
  return kExitPass;
}

struct TransformRows {
  std::string report;
  std::string clock;
  double worst = 0.0;
  double worst_clock = 0.0;
  double dt = 0.0;
};

// Invariance of the current between the sigma's own frame and frame_b.
TransformRows transform_once(const SpacetimeModel& model, const CurveMeasure& sigma_a, const TemporalFunction& frame_b,
                             const std::vector<TestFunction>& psis, const std::vector<TestFunction>& phis) {
  TransformRows rows;
  const FieldBuilder builder_a(sigma_a, evolution_from_sigma(model, sigma_a));
  rows.dt = builder_a.dt();
  const std::vector<double> grid = uniform_frame_grid(model, sigma_a, frame_b, builder_a.dt());
  const CurveMeasure sigma_b = transform_sigma(model, sigma_a, frame_b, grid);
  const FieldBuilder builder_b(sigma_b, evolution_from_sigma(model, sigma_b));
  const EtaFieldTransform eta = transform_eta_and_field(builder_a, frame_b, {});
  double min_rate = std::numeric_limits<double>::infinity();
  for (const auto& row : eta.clock_rate) {
    for (double v : row) min_rate = std::min(min_rate, v);
  }
  rows.worst_clock = clock_residual_in_frame(builder_b);
  rows.clock = sigma_a.frame().id() + "," + frame_b.id() + "," + num(rows.dt) + "," + num(rows.worst_clock) + "," +
               num(min_rate) + "\n";
  const CurrentCheck check = invariant_current_check(builder_a, builder_b, psis, phis);
  rows.worst = check.worst;
  for (const CurrentPair& p : check.pairs) {
    rows.report += sigma_a.frame().id() + "," + frame_b.id() + ",\"" + p.psi_id + "\",\"" + p.phi_id + "\"," +
                   num(rows.dt) + "," + num(p.lhs) + "," + num(p.rhs) + "," + num(p.discrepancy) + "\n";
  }
  return rows;
}

std::vector<TestFunction> psi_battery(const SpacetimeModel& model, const std::vector<TestFunction>& bumps) {
  std::vector<TestFunction> psis{make_temporal(TemporalFunction::canonical())};
  if (model.kind() == ModelKind::Cylinder) {
    psis.push_back({"cos(x)", [](const Event& p) { return std::cos(p.x); },
                    [](const Event& p) -> Gradient { return {0.0, -std::sin(p.x)}; }});
  } else {
    psis.push_back(make_spatial_coordinate());
  }
  if (!bumps.empty()) psis.push_back(bumps.front());
  return psis;
}

int cmd_transform(const RunConfig& c, std::ostream& out) {
  const LoadedCurveMeasure loaded = load_sigma(c, out);
  const SpacetimeModel& model = loaded.model;
  validate_curve_measure(model, loaded.sigma);
  std::vector<TemporalFunction> frames;
  for (const std::string& f : c.frames) {
    const TemporalFunction frame = parse_frame_spec(f);
    frame.require_valid_on(model);
    frames.push_back(frame);
  }
  const std::vector<TestFunction> phis = auto_bumps(model, loaded.sigma, c.seed);
  const std::vector<TestFunction> psis = psi_battery(model, {phis.back()});
  std::string report = "frame_a,frame_b,psi_id,phi_id,dt,lhs,rhs,discrepancy\n";
  std::string clock = "frame_a,frame_b,dt,xb_tb_residual,min_xa_tb\n";
  std::string refine = "frame_b,dt,worst_discrepancy\n";
  bool pass = true;
  const unsigned depth = *std::max_element(c.levels.begin(), c.levels.end());
  for (const TemporalFunction& frame : frames) {
    for (unsigned l = 0; l < depth; ++l) {
      const std::size_t factor = std::size_t{1} << l;
      if ((loaded.sigma.grid().size() - 1) % factor != 0) break;
      const TransformRows rows = transform_once(model, coarsen(loaded.sigma, factor), frame, psis, phis);
      refine += frame.id() + "," + num(rows.dt) + "," + num(rows.worst) + "\n";
      if (l == 0) {
        report += rows.report;
        clock += rows.clock;
        const bool ok = rows.worst <= 30.0 * rows.dt * c.tolerance_scale && rows.worst_clock <= 1e-5 * c.tolerance_scale;
        out << frame.id() << ": worst discrepancy " << num(rows.worst) << ", X_B T_B residual "
            << num(rows.worst_clock) << (ok ? "" : "  (outside schedule)") << "\n";
        pass = pass && ok;
      }
    }
  }
  write_text_file(fs::path(c.out) / "transform_report.csv", report);
  write_text_file(fs::path(c.out) / "transform_clock.csv", clock);
  write_text_file(fs::path(c.out) / "transform_refinement.csv", refine);
  return pass ? kExitPass : kExitPropertyFailure;
}

int demo_example1(const RunConfig& c, std::ostream& out) {
  const std::size_t steps = fixtures::example1_steps_for(c.dt);
  const SpacetimeModel model = SpacetimeModel::minkowski();
  const Evolution ev = fixtures::example1_evolution(steps);
  const CurveMeasure sigma = fixtures::example1_sigma(steps);
  const fs::path dir(c.out);
  write_json_file(dir / "example1_evolution.json", evolution_to_json(ev));
  write_json_file(dir / "example1_sigma.json", curve_measure_to_json(model, sigma));

  bool pass = true;
  const bool causal = is_causal_evolution(ev);
  out << "example1: " << steps << " steps, evolution " << (causal ? "causal" : "NOT causal") << "\n";
  pass = pass && causal;

  const CurveMeasure level3 = dyadic_construct_sigma(ev, 3);
  write_json_file(dir / "sigma_level_3.json", curve_measure_to_json(model, level3));
  out << "level-3 construction: " << level3.atoms.size() << " curve(s)\n";
  pass = pass && level3.atoms.size() == 1;

  const FieldBuilder builder(sigma, ev);
  std::vector<ResidualReport> rows = field_suite(builder, fixtures::example1_bumps(), c.tolerance_scale);
  write_text_file(dir / "field_residuals.csv", residual_csv(rows));
  if (const ResidualReport* w = worst_offender(rows)) {
    out << "residual breach: " << w->kind << " for " << w->phi_id << "\n";
    pass = false;
  } else {
    out << "field residuals: " << rows.size() << " checks within tolerance\n";
  }

  std::string report = "frame_a,frame_b,psi_id,phi_id,dt,lhs,rhs,discrepancy\n";
  const std::vector<TestFunction> phis = fixtures::example1_bumps();
  const std::vector<TestFunction> psis = psi_battery(model, {phis[1]});
  for (const char* spec : {"canonical", "boost:0.3", "boost:0.6"}) {
    const TransformRows r = transform_once(model, sigma, parse_frame_spec(spec), psis, phis);
    report += r.report;
    const bool ok = r.worst <= 30.0 * r.dt * c.tolerance_scale && r.worst_clock <= 1e-5 * c.tolerance_scale;
    out << spec << ": worst discrepancy " << num(r.worst) << (ok ? "" : "  (outside schedule)") << "\n";
    pass = pass && ok;
  }
  write_text_file(dir / "transform_report.csv", report);
  out << (pass ? "example1 passed" : "example1 FAILED") << "\n";
  return pass ? kExitPass : kExitPropertyFailure;
}

int demo_example2(const RunConfig& c, std::ostream& out) {
  const SpacetimeModel model = SpacetimeModel::cylinder();
  const fs::path dir(c.out);
  bool pass = true;
  std::optional<Evolution> reference;
  std::vector<CurveMeasure> sigmas;
  std::vector<ResidualReport> rows;
  for (double drift : {0.0, 0.5, 1.0}) {
    const fixtures::RotatingFamily fam = fixtures::example2(drift);
    if (!reference) {
      reference = fam.evolution;
      write_json_file(dir / "example2_evolution.json", evolution_to_json(fam.evolution));
      pass = pass && is_causal_evolution(fam.evolution);
    } else if (!(fam.evolution == *reference)) {
      out << "drift " << drift << " changes the evolution\n";
      pass = false;
    }
    bool exact = true;
    for (std::size_t k = 0; k < fam.evolution.size(); ++k) {
      exact = exact && pushforward_eval(fam.sigma, fam.evolution.times[k]) == fam.evolution.slices[k];
    }
    pass = pass && exact;
    std::ostringstream name;
    name << "sigma_drift_" << drift << ".json";
    write_json_file(dir / name.str(), curve_measure_to_json(model, fam.sigma));
    const FieldBuilder builder(fam.sigma, fam.evolution);
    std::vector<ResidualReport> r = field_suite(builder, fixtures::example2_bumps(), c.tolerance_scale);
    for (ResidualReport& row : r) row.phi_id = "drift=" + num(drift) + ":" + row.phi_id;
    rows.insert(rows.end(), r.begin(), r.end());
    out << "drift " << drift << ": " << fam.sigma.atoms.size() << " curves, marginals "
        << (exact ? "exact" : "NOT exact") << "\n";
    for (const CurveMeasure& s : sigmas) {
      if (s == fam.sigma) {
        out << "drift " << drift << " reproduces an earlier sigma\n";
        pass = false;
      }
    }
    sigmas.push_back(fam.sigma);
  }
  const CurveMeasure constructed = dyadic_construct_sigma(*reference, 5);
  const bool rest = constructed == sigmas.front();
  out << "min-cost construction gives the rest curves: " << (rest ? "yes" : "no") << "\n";
  pass = pass && rest;
  write_text_file(dir / "field_residuals.csv", residual_csv(rows));
  if (const ResidualReport* w = worst_offender(rows)) {
    out << "residual breach: " << w->kind << " for " << w->phi_id << "\n";
    pass = false;
  }
  out << (pass ? "example2 passed" : "example2 FAILED") << "\n";
  return pass ? kExitPass : kExitPropertyFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causal evolutions of measures on 1+1 dimensional spacetimes"};
  app.require_subcommand(1);
  RunConfig config;
  std::string model_text;
  std::string config_path;
  std::string levels_text;
  std::string frames_text;
  app.add_option("--model", model_text, "minkowski | cylinder | flrw:<eps> | JSON descriptor");
  app.add_option("--input", config.input, "evolution or curve-measure JSON file");
  app.add_option("--levels", levels_text, "comma-separated refinement levels");
  app.add_option("--dt", config.dt, "time step for the demos");
  app.add_option("--frames", frames_text, "comma-separated frames: canonical, boost:<v>, sheared:<l>");
  app.add_option("--out", config.out, "output directory");
  app.add_option("--seed", config.seed, "seed for randomized batteries");
  app.add_option("--arith", config.arith, "rational | float");
  app.add_option("--config", config_path, "JSON file with defaults for the flags above");

  auto* check = app.add_subcommand("check-causal", "check that an evolution is causal")->fallthrough();
  auto* build = app.add_subcommand("build-sigma", "dyadic construction of curve measures")->fallthrough();
  auto* verify = app.add_subcommand("verify-field", "residual suite of the field of a curve measure")->fallthrough();
  auto* transform = app.add_subcommand("transform", "observer invariance across frames")->fallthrough();
  auto* demo = app.add_subcommand("demo", "run a worked example end to end")->fallthrough();
  demo->add_option("example", config.demo, "example1 | example2")->required();

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream eo;
    const int code = app.exit(e, o, eo);
    out << o.str();
    err << eo.str();
    return code == 0 ? kExitPass : kExitInputError;
  }

  try {
    if (!model_text.empty()) config.model = model_text;
    auto split = [](const std::string& s) {
      std::vector<std::string> parts;
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) parts.push_back(item);
      }
      return parts;
    };
    if (!levels_text.empty()) {
      config.levels.clear();
      for (const std::string& p : split(levels_text)) {
        try {
          std::size_t used = 0;
          const long v = std::stol(p, &used);
          if (used != p.size() || v < 1) throw InputError("");
          config.levels.push_back(static_cast<unsigned>(v));
        } catch (const std::exception&) {
          throw InputError("bad level '" + p + "'");
        }
      }
    }
    if (!frames_text.empty()) config.frames = split(frames_text);
    if (!config_path.empty()) apply_config_file(config_path, config, app);
    validate_config(config);
    if (check->parsed()) return cmd_check_causal(config, out);
    if (build->parsed()) return cmd_build_sigma(config, out);
    if (verify->parsed()) return cmd_verify_field(config, out);
    if (transform->parsed()) return cmd_transform(config, out);
    if (demo->parsed()) {
      if (config.demo == "example1") return demo_example1(config, out);
      if (config.demo == "example2") return demo_example2(config, out);
      throw InputError("unknown demo '" + config.demo + "'");
    }
  } catch (const InfeasibleCouplingError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPropertyFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace causevo
