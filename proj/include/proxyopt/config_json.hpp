#pragma once

#include <json.hpp>

#include "proxyopt/harness.hpp"

namespace proxyopt {

nlohmann::json to_json(const PsoConfig& c);
nlohmann::json to_json(const GaConfig& c);
nlohmann::json to_json(const ExperimentConfig& c);
nlohmann::json to_json(const TableConfig& c);

/// Missing keys keep the value already in `c`; unknown keys are rejected.
void update_from_json(PsoConfig& c, const nlohmann::json& j);
void update_from_json(GaConfig& c, const nlohmann::json& j);
void update_from_json(ExperimentConfig& c, const nlohmann::json& j);
void update_from_json(TableConfig& c, const nlohmann::json& j);

/// Fills every optional field of a single-function config with the value the
/// run would use (domain, architecture, epochs, GA mutation rate).
ExperimentConfig materialize(ExperimentConfig c);

}  // namespace proxyopt
