#include "causevo/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace causevo {

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const Json::exception& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

Rational weight_from_json(const Json& w) {
  if (w.is_string()) return parse_rational(w.get<std::string>());
  if (w.is_number()) return parse_rational(w.dump());
  throw InputError("weight must be a string or a number");
}

Json event_to_json(const Event& e) { return Json::array({e.t, e.x}); }

Event event_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw InputError("event must be [t, x]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

void check_schema(const Json& j) {
  if (j.contains("schema") && j.at("schema").get<int>() != kSchemaVersion) {
    throw InputError("unsupported schema version " + j.at("schema").dump());
  }
}

}  // namespace

Json model_to_json(const SpacetimeModel& model) {
  Json j{{"kind", to_string(model.kind())}};
  if (model.kind() == ModelKind::Flrw) j["scale"] = {{"eps", model.eps()}};
  return j;
}

SpacetimeModel model_from_json(const Json& j) {
  return guarded("model", [&] {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "minkowski") return SpacetimeModel::minkowski();
    if (kind == "cylinder") return SpacetimeModel::cylinder();
    if (kind == "flrw") {
      double eps = 0.0;
      if (j.contains("scale")) eps = j.at("scale").at("eps").get<double>();
      return SpacetimeModel::flrw(eps);
    }
    throw InputError("unknown model kind '" + kind + "'");
  });
}

SpacetimeModel parse_model_spec(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::exception& e) {
      throw InputError(std::string("model descriptor: ") + e.what());
    }
    return model_from_json(j);
  }
  if (text == "minkowski") return SpacetimeModel::minkowski();
  if (text == "cylinder") return SpacetimeModel::cylinder();
  if (text.rfind("flrw", 0) == 0) {
    if (text == "flrw") return SpacetimeModel::flrw(0.0);
    if (text.size() > 5 && text[4] == ':') {
      try {
        std::size_t used = 0;
        const double eps = std::stod(text.substr(5), &used);
        if (used == text.size() - 5) return SpacetimeModel::flrw(eps);
      } catch (const std::exception&) {
      }
    }
  }
  throw InputError("unknown model '" + text + "'");
}

Json frame_to_json(const TemporalFunction& frame) {
  switch (frame.kind()) {
    case TemporalKind::Canonical:
      return {{"kind", "canonical"}};
    case TemporalKind::Boost:
      return {{"kind", "boost"}, {"v", frame.parameter()}};
    case TemporalKind::Sheared:
      return {{"kind", "sheared"}, {"lambda", frame.parameter()}};
  }
  return {{"kind", "canonical"}};
}

TemporalFunction frame_from_json(const Json& j) {
  return guarded("frame", [&] {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "canonical") return TemporalFunction::canonical();
    if (kind == "boost") return TemporalFunction::boost(j.at("v").get<double>());
    if (kind == "sheared") return TemporalFunction::sheared(j.at("lambda").get<double>());
    throw InputError("unknown frame kind '" + kind + "'");
  });
}

TemporalFunction parse_frame_spec(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::exception& e) {
      throw InputError(std::string("frame descriptor: ") + e.what());
    }
    return frame_from_json(j);
  }
  if (text == "canonical") return TemporalFunction::canonical();
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string kind = text.substr(0, colon);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(text.substr(colon + 1), &used);
      if (used != text.size() - colon - 1) throw InputError("bad number");
    } catch (const std::exception&) {
      throw InputError("bad frame parameter in '" + text + "'");
    }
    if (kind == "boost") return TemporalFunction::boost(value);
    if (kind == "sheared") return TemporalFunction::sheared(value);
  }
  throw InputError("unknown frame '" + text + "'");
}

Json curve_to_json(const CausalCurve& curve) {
  Json points = Json::array();
  for (const Event& p : curve.points) points.push_back(event_to_json(p));
  Json j{{"times", curve.times}, {"points", std::move(points)}};
  if (!curve.frame.is_canonical()) j["frame"] = frame_to_json(curve.frame);
  return j;
}

CausalCurve curve_from_json(const Json& j) {
  return guarded("curve", [&] {
    CausalCurve c;
    c.times = j.at("times").get<std::vector<double>>();
    for (const Json& p : j.at("points")) c.points.push_back(event_from_json(p));
    if (j.contains("frame")) c.frame = frame_from_json(j.at("frame"));
    if (c.times.size() != c.points.size()) throw InputError("curve has different numbers of times and points");
    return c;
  });
}

Json evolution_to_json(const Evolution& ev) {
  Json slices = Json::array();
  for (const SliceMeasure& s : ev.slices) {
    Json atoms = Json::array();
    for (const Atom& a : s.atoms) atoms.push_back({{"event", event_to_json(a.event)}, {"w", format_rational(a.weight)}});
    slices.push_back({{"time", s.time}, {"atoms", std::move(atoms)}});
  }
  Json j{{"schema", kSchemaVersion}, {"model", model_to_json(ev.model)}, {"times", ev.times},
         {"slices", std::move(slices)}};
  if (!ev.frame.is_canonical()) j["frame"] = frame_to_json(ev.frame);
  return j;
}

Evolution evolution_from_json(const Json& j) {
  return guarded("evolution", [&] {
    check_schema(j);
    Evolution ev;
    ev.model = model_from_json(j.at("model"));
    if (j.contains("frame")) ev.frame = frame_from_json(j.at("frame"));
    ev.times = j.at("times").get<std::vector<double>>();
    for (const Json& s : j.at("slices")) {
      std::vector<Atom> atoms;
      for (const Json& a : s.at("atoms")) {
        Rational w = weight_from_json(a.at("w"));
        if (w <= 0) throw InputError("atom weights must be positive");
        atoms.push_back({event_from_json(a.at("event")), std::move(w)});
      }
      ev.slices.push_back(SliceMeasure::make(s.at("time").get<double>(), std::move(atoms)));
    }
    validate_evolution(ev);
    return ev;
  });
}

Json curve_measure_to_json(const SpacetimeModel& model, const CurveMeasure& sigma) {
  Json atoms = Json::array();
  for (const CurveAtom& c : sigma.atoms) atoms.push_back({{"w", format_rational(c.weight)}, {"curve", curve_to_json(c.curve)}});
  return {{"schema", kSchemaVersion},
          {"model", model_to_json(model)},
          {"interval", Json::array({sigma.a, sigma.b})},
          {"atoms", std::move(atoms)}};
}

LoadedCurveMeasure curve_measure_from_json(const Json& j, bool require_causal) {
  return guarded("curve measure", [&] {
    check_schema(j);
    LoadedCurveMeasure out;
    if (j.contains("model")) out.model = model_from_json(j.at("model"));
    const Json& interval = j.at("interval");
    if (!interval.is_array() || interval.size() != 2) throw InputError("interval must be [a, b]");
    std::vector<CurveAtom> atoms;
    for (const Json& a : j.at("atoms")) {
      Rational w = weight_from_json(a.at("w"));
      if (w <= 0) throw InputError("curve weights must be positive");
      atoms.push_back({curve_from_json(a.at("curve")), std::move(w)});
    }
    out.sigma = CurveMeasure::make(interval.at(0).get<double>(), interval.at(1).get<double>(), std::move(atoms));
    validate_curve_measure(out.model, out.sigma,
                           require_causal ? kDefaultCausalSlack : std::numeric_limits<double>::infinity());
    return out;
  });
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

void write_json_file(const std::filesystem::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

}  // namespace causevo
