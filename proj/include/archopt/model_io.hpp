#pragma once

#include <string>

#include <json.hpp>

#include "archopt/model.hpp"

namespace archopt {

using json = nlohmann::ordered_json;

// Throws ParseError on malformed documents, ValidationError when the parsed
// model violates an invariant. Defaults (rep, speed_factor, ...) are filled.
ArchitectureModel load_model(const std::string& path);

ArchitectureModel model_from_json(const json& doc);
json model_to_json(const ArchitectureModel& model);

void save_model(const ArchitectureModel& model, const std::string& path);

json report_to_json(const ValidationReport& report);

}  // namespace archopt
