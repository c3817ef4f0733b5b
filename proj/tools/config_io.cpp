#include "config_io.hpp"

#include <fstream>
#include <variant>

#include "gtb/errors.hpp"

namespace gtbs {

namespace {

using nlohmann::json;

const json& require(const json& object, const char* key, const std::string& where) {
  if (!object.is_object() || !object.contains(key)) {
    throw gtb::ConfigError(where + ": missing field \"" + key + "\"");
  }
  return object.at(key);
}

double number(const json& value, const std::string& where) {
  if (!value.is_number()) throw gtb::ConfigError(where + ": expected a number");
  return value.get<double>();
}

int integer(const json& value, const std::string& where) {
  if (!value.is_number_integer()) throw gtb::ConfigError(where + ": expected an integer");
  return value.get<int>();
}

gtb::SectionFamily parse_family(const json& section, const std::string& where) {
  const json& family = require(section, "family", where);
  if (!family.is_string()) throw gtb::ConfigError(where + ": family must be a string");
  const std::string name = family.get<std::string>();
  const int degree = integer(require(section, "degree", where), where + ".degree");
  if (name == "polynomial") return gtb::Polynomial{degree};
  const double omega = number(require(section, "omega", where), where + ".omega");
  if (name == "trigonometric") return gtb::Trigonometric{degree, omega};
  if (name == "exponential") return gtb::Exponential{degree, omega};
  throw gtb::ConfigError(where + ": unknown family \"" + name + "\"");
}

}  // namespace

SpaceConfig parse_config(const json& document) {
  if (!document.is_object()) throw gtb::ConfigError("config must be a JSON object");
  SpaceConfig config;
  const json& bps = require(document, "breakpoints", "config");
  const json& sections = require(document, "sections", "config");
  const json& smoothness = require(document, "smoothness", "config");
  if (!bps.is_array() || !sections.is_array() || !smoothness.is_array()) {
    throw gtb::ConfigError("breakpoints, sections and smoothness must be arrays");
  }
  for (std::size_t i = 0; i < bps.size(); ++i) {
    config.definition.breakpoints.push_back(number(bps[i], "breakpoints[" + std::to_string(i) + "]"));
  }
  for (std::size_t i = 0; i < sections.size(); ++i) {
    config.definition.sections.push_back(
        parse_family(sections[i], "sections[" + std::to_string(i) + "]"));
  }
  for (std::size_t i = 0; i < smoothness.size(); ++i) {
    config.definition.smoothness.push_back(
        integer(smoothness[i], "smoothness[" + std::to_string(i) + "]"));
  }
  const std::size_t m = bps.size() < 2 ? 0 : bps.size() - 1;
  if (bps.size() < 2) throw gtb::ConfigError("at least two breakpoints are needed");
  if (sections.size() != m) {
    throw gtb::ConfigError("expected " + std::to_string(m) + " sections for " +
                           std::to_string(bps.size()) + " breakpoints, got " +
                           std::to_string(sections.size()));
  }
  if (smoothness.size() + 1 != m) {
    throw gtb::ConfigError("expected " + std::to_string(m - 1) +
                           " interior smoothness values, got " +
                           std::to_string(smoothness.size()));
  }
  if (document.contains("control_points")) {
    const json& cps = document.at("control_points");
    if (!cps.is_array() || cps.empty() || !cps[0].is_array() || cps[0].empty()) {
      throw gtb::ConfigError("control_points must be a non-empty array of rows");
    }
    const std::size_t dim = cps[0].size();
    config.control_points.resize(static_cast<Eigen::Index>(cps.size()),
                                 static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < cps.size(); ++r) {
      if (!cps[r].is_array() || cps[r].size() != dim) {
        throw gtb::ConfigError("control point rows must share one dimension");
      }
      for (std::size_t c = 0; c < dim; ++c) {
        config.control_points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            number(cps[r][c], "control_points");
      }
    }
  }
  return config;
}

SpaceConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gtb::ConfigError("cannot read config file " + path);
  json document;
  try {
    in >> document;
  } catch (const json::exception& e) {
    throw gtb::ConfigError("invalid JSON in " + path + ": " + e.what());
  }
  return parse_config(document);
}

json family_to_json(const gtb::SectionFamily& family) {
  return std::visit(
      [](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, gtb::Polynomial>) {
          return {{"family", "polynomial"}, {"degree", f.degree}};
        } else if constexpr (std::is_same_v<T, gtb::Trigonometric>) {
          return {{"family", "trigonometric"}, {"degree", f.degree}, {"omega", f.omega}};
        } else if constexpr (std::is_same_v<T, gtb::Exponential>) {
          return {{"family", "exponential"}, {"degree", f.degree}, {"omega", f.omega}};
        } else {
          return {{"family", f.name}, {"degree", f.degree}};
        }
      },
      family);
}

json definition_to_json(const gtb::SpaceDefinition& definition) {
  json sections = json::array();
  for (const auto& f : definition.sections) sections.push_back(family_to_json(f));
  return {{"breakpoints", definition.breakpoints},
          {"sections", sections},
          {"smoothness", definition.smoothness}};
}

json matrix_to_json(const Eigen::MatrixXd& matrix) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) row.push_back(matrix(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace gtbs
