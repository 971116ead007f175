#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "causevo/curve_measures.hpp"
#include "causevo/slice_measures.hpp"

namespace causevo {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

Json model_to_json(const SpacetimeModel& model);
SpacetimeModel model_from_json(const Json& j);
/// "minkowski", "cylinder", "flrw:<eps>", or a JSON model descriptor.
SpacetimeModel parse_model_spec(const std::string& text);

Json frame_to_json(const TemporalFunction& frame);
TemporalFunction frame_from_json(const Json& j);
/// "canonical", "boost:<v>", "sheared:<lambda>", or a JSON frame descriptor.
TemporalFunction parse_frame_spec(const std::string& text);

Json curve_to_json(const CausalCurve& curve);
CausalCurve curve_from_json(const Json& j);

Json evolution_to_json(const Evolution& ev);
/// Validates the result; throws InputError.
Evolution evolution_from_json(const Json& j);

/// The model is stored alongside so the file is self-contained.
Json curve_measure_to_json(const SpacetimeModel& model, const CurveMeasure& sigma);
struct LoadedCurveMeasure {
  SpacetimeModel model = SpacetimeModel::minkowski();
  CurveMeasure sigma;
};
/// With require_causal false only the structure is validated, so acausal
/// curves load and can be reported on.
LoadedCurveMeasure curve_measure_from_json(const Json& j, bool require_causal = true);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace causevo
