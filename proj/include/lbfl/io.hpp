#pragma once

#include <string>

#include <json.hpp>

#include "lbfl/instance.hpp"

namespace lbfl {

nlohmann::json instance_to_json(const LbflInstance& inst);
LbflInstance instance_from_json(const nlohmann::json& j);

nlohmann::json solution_to_json(const LbflSolution& sol);
LbflSolution solution_from_json(const nlohmann::json& j);

/// Loading validates the metric and every field constraint; parse errors and
/// metric violations throw ErrorKind::malformed_input with context.
LbflInstance load_instance(const std::string& path);
void save_instance(const LbflInstance& inst, const std::string& path);

LbflSolution load_solution(const std::string& path);
void save_solution(const LbflSolution& sol, const std::string& path);

}  // namespace lbfl
