#pragma once

#include <exception>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "gtb/space.hpp"

namespace gtbs {

// Exit codes: 0 success, 1 runtime or degeneracy failure, 2 invalid input.
enum ExitCode { kSuccess = 0, kRuntimeError = 1, kValidationError = 2 };

int exit_code_for(const std::exception& error);

// Each command reports problems on `err` and returns an exit code. An empty
// or "-" output path means standard output.
int cmd_build(const std::string& config, const std::string& out, std::ostream& err);
int cmd_sample(const std::string& config, int n, int deriv, const std::string& csv,
               std::ostream& err);
int cmd_demo(const std::string& name, const std::string& out_dir, std::ostream& err);
int cmd_verify(const std::string& config, std::ostream& out, std::ostream& err);
int cmd_insert(const std::string& config, double at, const std::string& out, std::ostream& err);

// Summary document written by build: dimensions, knot vectors, the
// (u_k, v_k, r_u(k), r_v(k)) triples and the extraction matrix.
nlohmann::json space_summary(const gtb::GTSplineSpace& space);

// CSV with header x,B1..BN then dB1..dBN, d2B1.. up to `deriv`; n uniform
// samples on [a, b], 17 significant digits.
void write_samples_csv(std::ostream& out, const gtb::GTSplineSpace& space, int n, int deriv);

// The two worked examples as ready-made definitions.
gtb::SpaceDefinition example1_definition(int interior_smoothness = 2);
gtb::SpaceDefinition example2_definition();
Eigen::MatrixXd example2_control_points();

}  // namespace gtbs
