#pragma once

#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "gtb/space.hpp"

namespace gtbs {

// Space description read from a JSON document:
//   {"breakpoints": [...],
//    "sections": [{"family": "polynomial" | "trigonometric" | "exponential",
//                  "degree": p, "omega": w}, ...],
//    "smoothness": [r_1, ..., r_{m-1}],
//    "control_points": [[...], ...]}            (optional, N rows)
struct SpaceConfig {
  gtb::SpaceDefinition definition;
  Eigen::MatrixXd control_points;  // empty when absent
};

// Schema violations raise gtb::ConfigError.
SpaceConfig parse_config(const nlohmann::json& document);
SpaceConfig load_config(const std::string& path);

nlohmann::json family_to_json(const gtb::SectionFamily& family);
nlohmann::json definition_to_json(const gtb::SpaceDefinition& definition);
nlohmann::json matrix_to_json(const Eigen::MatrixXd& matrix);

}  // namespace gtbs
