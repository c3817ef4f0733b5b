#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"GT-spline spaces: build, sample, verify and refine GTB-spline bases"};
  app.require_subcommand(1);

  std::string config, out, csv, demo_name, out_dir = ".";
  int n = 201;
  int deriv = 0;
  double at = 0.0;

  auto* build = app.add_subcommand("build", "Summarise a space: dimensions, knots, extraction");
  build->add_option("config", config, "Space config (JSON)")->required();
  build->add_option("-o,--out", out, "Output file (default: stdout)");

  auto* sample = app.add_subcommand("sample", "Sample the basis and its derivatives as CSV");
  sample->add_option("config", config, "Space config (JSON)")->required();
  sample->add_option("--n", n, "Number of uniform samples (>= 2)");
  sample->add_option("--deriv", deriv, "Highest derivative order");
  sample->add_option("--csv", csv, "Output CSV (default: stdout)");

  auto* demo = app.add_subcommand("demo", "Reproduce example1 or example2");
  demo->add_option("name", demo_name, "example1 | example2")->required();
  demo->add_option("--out-dir", out_dir, "Output directory");

  auto* verify = app.add_subcommand("verify", "Run the invariant checks on a space");
  verify->add_option("config", config, "Space config (JSON)")->required();

  auto* insert = app.add_subcommand("insert", "Insert a knot and report the coefficient map");
  insert->add_option("config", config, "Space config (JSON)")->required();
  insert->add_option("--at", at, "Knot location")->required();
  insert->add_option("-o,--out", out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gtbs::kValidationError;
  }

  if (*build) return gtbs::cmd_build(config, out, std::cerr);
  if (*sample) return gtbs::cmd_sample(config, n, deriv, csv, std::cerr);
  if (*demo) return gtbs::cmd_demo(demo_name, out_dir, std::cerr);
  if (*verify) return gtbs::cmd_verify(config, std::cout, std::cerr);
  if (*insert) return gtbs::cmd_insert(config, at, out, std::cerr);
  return gtbs::kValidationError;
}
