#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "checks.hpp"
#include "config_io.hpp"
#include "gtb/errors.hpp"

namespace gtbs {

namespace {

using nlohmann::json;

std::string num(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

// Runs a command body, mapping exceptions to exit codes.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

void report_warnings(const gtb::GTSplineSpace& space, std::ostream& err) {
  for (const auto& w : space.warnings()) err << "warning: " << w << "\n";
}

std::vector<double> uniform_samples(double a, double b, int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = i + 1 == n ? b : a + (b - a) * i / (n - 1);
  return xs;
}

}  // namespace

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const gtb::ConfigError*>(&error) ||
      dynamic_cast<const gtb::DomainError*>(&error) ||
      dynamic_cast<const gtb::OrderError*>(&error) ||
      dynamic_cast<const gtb::IndexError*>(&error) ||
      dynamic_cast<const gtb::InvalidFamilyError*>(&error) ||
      dynamic_cast<const nlohmann::json::exception*>(&error)) {
    return kValidationError;
  }
  return kRuntimeError;
}

json space_summary(const gtb::GTSplineSpace& space) {
  json triples = json::array();
  for (int k = 0; k < space.dimension(); ++k) {
    const auto s = gtb::supersmoothness(space.knots(), space.degrees(), k);
    triples.push_back({{"k", k + 1},
                       {"u", space.knots().u[k]},
                       {"v", space.knots().v[k]},
                       {"r_u", s.start},
                       {"r_v", s.end}});
  }
  const Eigen::MatrixXd& c = space.extraction().C;
  const bool identity = c.rows() == c.cols() && c.isIdentity(0.0);
  return {{"space", definition_to_json(space.definition())},
          {"degrees", space.degrees()},
          {"smoothness_full", space.smoothness()},
          {"N", space.dimension()},
          {"M", space.bernstein_dimension()},
          {"O", space.constraint_count()},
          {"knots", {{"u", space.knots().u}, {"v", space.knots().v}}},
          {"triples", triples},
          {"extraction", matrix_to_json(c)},
          {"extraction_is_identity", identity},
          {"warnings", space.warnings()}};
}

void write_samples_csv(std::ostream& out, const gtb::GTSplineSpace& space, int n, int deriv) {
  if (n < 2) throw gtb::ConfigError("--n must be at least 2");
  if (deriv < 0) throw gtb::ConfigError("--deriv must be non-negative");
  const int count = space.dimension();
  out << "x";
  for (int d = 0; d <= deriv; ++d) {
    const std::string prefix = d == 0 ? "B" : (d == 1 ? "dB" : "d" + std::to_string(d) + "B");
    for (int k = 1; k <= count; ++k) out << ',' << prefix << k;
  }
  out << '\n';
  for (double x : uniform_samples(space.partition().left(), space.partition().right(), n)) {
    const Eigen::MatrixXd values = space.eval_basis(x, deriv);
    out << num(x);
    for (int d = 0; d <= deriv; ++d) {
      for (int k = 0; k < count; ++k) out << ',' << num(values(k, d));
    }
    out << '\n';
  }
}

gtb::SpaceDefinition example1_definition(int interior_smoothness) {
  return {{0.0, 1.0, 2.5, 5.0},
          {gtb::Polynomial{2}, gtb::Trigonometric{3, std::numbers::pi / 2},
           gtb::Exponential{4, 10.0}},
          {interior_smoothness, interior_smoothness}};
}

gtb::SpaceDefinition example2_definition() {
  const double pi = std::numbers::pi;
  return {{-3.0 * pi / 4.0, 0.0, 2.0, 2.0 + pi},
          {gtb::Trigonometric{2, 1.0}, gtb::Polynomial{1}, gtb::Trigonometric{2, 0.5}},
          {1, 1}};
}

Eigen::MatrixXd example2_control_points() {
  const double r2 = std::sqrt(2.0);
  Eigen::MatrixXd p(4, 2);
  p << 2.0 + r2 / 2.0, -r2 / 2.0, 3.0 + r2, 1.0, -2.0, 1.0, -2.0, 3.0;
  return p;
}

int cmd_build(const std::string& config, const std::string& out, std::ostream& err) {
  return guarded(err, [&] {
    const SpaceConfig cfg = load_config(config);
    const gtb::GTSplineSpace space = gtb::build_space(cfg.definition);
    report_warnings(space, err);
    write_text(out, space_summary(space).dump(2) + "\n");
    return kSuccess;
  });
}

int cmd_sample(const std::string& config, int n, int deriv, const std::string& csv,
               std::ostream& err) {
  return guarded(err, [&] {
    const SpaceConfig cfg = load_config(config);
    const gtb::GTSplineSpace space = gtb::build_space(cfg.definition);
    report_warnings(space, err);
    std::ostringstream text;
    write_samples_csv(text, space, n, deriv);
    write_text(csv, text.str());
    return kSuccess;
  });
}

namespace {

void demo_example1(const std::filesystem::path& dir, std::ostream& err) {
  json stages = json::array();
  const char* labels[] = {"a", "b", "c", "d"};
  for (int r = -1; r <= 2; ++r) {
    const gtb::GTSplineSpace space = gtb::build_space(example1_definition(r));
    report_warnings(space, err);
    const std::string name = std::string("example1_stage_") + labels[r + 1] + ".csv";
    std::ostringstream text;
    write_samples_csv(text, space, 501, 2);
    write_text((dir / name).string(), text.str());
    json stage = space_summary(space);
    stage["stage"] = labels[r + 1];
    stage["samples"] = name;
    stages.push_back(std::move(stage));
  }
  write_text((dir / "example1_summary.json").string(), json{{"stages", stages}}.dump(2) + "\n");
}

void demo_example2(const std::filesystem::path& dir, std::ostream& err) {
  auto space = std::make_shared<const gtb::GTSplineSpace>(gtb::build_space(example2_definition()));
  report_warnings(*space, err);
  const gtb::SplineCurve curve(space, example2_control_points());
  const auto& bps = space->partition().breakpoints();

  std::ostringstream polygon;
  polygon << "X,Y\n";
  for (int k = 0; k < curve.control().rows(); ++k) {
    polygon << num(curve.control()(k, 0)) << ',' << num(curve.control()(k, 1)) << '\n';
  }
  write_text((dir / "example2_control_polygon.csv").string(), polygon.str());

  std::ostringstream samples;
  std::ostringstream residuals;
  samples << "x,X,Y,dX,dY\n";
  residuals << "x,segment,residual\n";
  double worst[3] = {0.0, 0.0, 0.0};
  for (int seg = 0; seg < 3; ++seg) {
    for (double x : uniform_samples(bps[seg], bps[seg + 1], 401)) {
      // Closed segments: breakpoints are evaluated from inside the segment.
      const gtb::Side side = x == bps[seg + 1] ? gtb::Side::Left : gtb::Side::Right;
      const Eigen::VectorXd p = curve.eval(x, 0, side);
      const Eigen::VectorXd dp = curve.eval(x, 1, side);
      double res = 0.0;
      if (seg == 0) res = (p(0) - 2.0) * (p(0) - 2.0) + p(1) * p(1) - 1.0;
      if (seg == 1) res = p(1) - 1.0;
      if (seg == 2) res = p(0) * p(0) + (p(1) - 3.0) * (p(1) - 3.0) - 4.0;
      worst[seg] = std::max(worst[seg], std::abs(res));
      samples << num(x) << ',' << num(p(0)) << ',' << num(p(1)) << ',' << num(dp(0)) << ','
              << num(dp(1)) << '\n';
      residuals << num(x) << ',' << seg + 1 << ',' << num(res) << '\n';
    }
  }
  write_text((dir / "example2_curve.csv").string(), samples.str());
  write_text((dir / "example2_residuals.csv").string(), residuals.str());

  json joins = json::array();
  for (int i = 1; i <= 2; ++i) {
    const Eigen::VectorXd jump =
        curve.eval(bps[i], 1, gtb::Side::Left) - curve.eval(bps[i], 1, gtb::Side::Right);
    joins.push_back({{"x", bps[i]}, {"first_derivative_jump", jump.cwiseAbs().maxCoeff()}});
  }
  const json summary = {
      {"N", space->dimension()},
      {"residual_max",
       {{"circle_(X-2)^2+Y^2=1", worst[0]}, {"line_Y=1", worst[1]}, {"circle_X^2+(Y-3)^2=4", worst[2]}}},
      {"joins", joins},
      {"start", {curve.eval(bps.front())(0), curve.eval(bps.front())(1)}},
      {"end", {curve.eval(bps.back())(0), curve.eval(bps.back())(1)}},
      {"control_points", matrix_to_json(curve.control())}};
  write_text((dir / "example2_summary.json").string(), summary.dump(2) + "\n");
}

}  // namespace

int cmd_demo(const std::string& name, const std::string& out_dir, std::ostream& err) {
  return guarded(err, [&] {
    if (name != "example1" && name != "example2") {
      throw gtb::ConfigError("unknown demo \"" + name + "\" (expected example1 or example2)");
    }
    const std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
    std::filesystem::create_directories(dir);
    if (name == "example1") {
      demo_example1(dir, err);
    } else {
      demo_example2(dir, err);
    }
    return kSuccess;
  });
}

int cmd_verify(const std::string& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SpaceConfig cfg = load_config(config);
    const gtb::GTSplineSpace space = gtb::build_space(cfg.definition);
    report_warnings(space, err);
    bool all = true;
    for (const auto& check : verify_space(space)) {
      out << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << "\n";
      all = all && check.passed;
    }
    return all ? kSuccess : kRuntimeError;
  });
}

int cmd_insert(const std::string& config, double at, const std::string& out, std::ostream& err) {
  return guarded(err, [&] {
    const SpaceConfig cfg = load_config(config);
    const gtb::GTSplineSpace space = gtb::build_space(cfg.definition);
    const gtb::KnotInsertion ins = gtb::insert_knot(space, at);
    report_warnings(ins.refined, err);

    json alpha = json::array();
    json beta = json::array();
    const gtb::Band band = ins.factor.band;
    for (int k = band.first; k < band.last; ++k) {
      alpha.push_back({{"k", k + 1}, {"value", ins.factor.alpha(k)}});
      beta.push_back({{"k", k + 2}, {"value", ins.factor.beta(k + 1)}});
    }
    json doc = {{"inserted_at", at},
                {"breakpoint", ins.breakpoint},
                {"new_breakpoint", ins.new_breakpoint},
                {"N_old", space.dimension()},
                {"N", ins.refined.dimension()},
                {"refined", space_summary(ins.refined)},
                {"transfer", matrix_to_json(ins.transfer)},
                {"transfer_row_sums", std::vector<double>(ins.transfer.rows())},
                {"alpha", alpha},
                {"beta", beta}};
    const Eigen::VectorXd sums = ins.transfer.rowwise().sum();
    for (Eigen::Index r = 0; r < sums.size(); ++r) doc["transfer_row_sums"][r] = sums(r);
    if (cfg.control_points.size() > 0) {
      if (cfg.control_points.rows() != space.dimension()) {
        throw gtb::ConfigError("config has " + std::to_string(cfg.control_points.rows()) +
                               " control points, the space needs " +
                               std::to_string(space.dimension()));
      }
      doc["control_points"] = matrix_to_json(ins.transfer * cfg.control_points);
    }
    write_text(out, doc.dump(2) + "\n");
    return kSuccess;
  });
}

}  // namespace gtbs
