// JSON serialization for attack reports. Keys are emitted sorted and numbers
// formatted by the library's deterministic dtoa, so two identical runs
// serialize to identical bytes.
#pragma once

#include <string>

#include <json.hpp>

#include "defisim/scenario.hpp"
#include "defisim/strategies.hpp"

namespace defisim {

nlohmann::json report_to_json(const AttackReport& r);

// Full output file: tool stamp, scenario fingerprint, parameters, report.
nlohmann::json report_file(const AttackReport& r, const ScenarioConfig& scenario,
                           const nlohmann::json& params);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace defisim
