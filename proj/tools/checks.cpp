#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <variant>

#include "gtb/errors.hpp"
#include "gtb/oracle.hpp"

namespace gtbs {

namespace {

std::string fmt(const char* format, double value) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, format, value);
  return buffer;
}

std::vector<double> uniform(const gtb::GTSplineSpace& space, int n) {
  std::vector<double> xs(n);
  const double a = space.partition().left();
  const double b = space.partition().right();
  for (int i = 0; i < n; ++i) xs[i] = i + 1 == n ? b : a + (b - a) * i / (n - 1);
  return xs;
}

CheckResult partition_of_unity(const gtb::GTSplineSpace& space) {
  double worst = 0.0;
  for (double x : uniform(space, 1000)) {
    worst = std::max(worst, std::abs(space.eval_basis(x, 0).col(0).sum() - 1.0));
  }
  return {"partition_of_unity", worst <= 1e-12, fmt("max |sum - 1| = %.3e", worst)};
}

CheckResult nonnegativity(const gtb::GTSplineSpace& space) {
  double lowest = 0.0;
  for (double x : uniform(space, 1000)) {
    lowest = std::min(lowest, space.eval_basis(x, 0).col(0).minCoeff());
  }
  return {"nonnegativity", lowest >= -1e-13, fmt("min value = %.3e", lowest)};
}

CheckResult local_support(const gtb::GTSplineSpace& space) {
  const auto& u = space.knots().u;
  const auto& v = space.knots().v;
  const double b = space.partition().right();
  double worst = 0.0;
  for (double x : uniform(space, 1000)) {
    const Eigen::VectorXd values = space.eval_basis(x, 0).col(0);
    for (int k = 0; k < space.dimension(); ++k) {
      if (x < u[k] || (x >= v[k] && v[k] < b)) worst = std::max(worst, std::abs(values(k)));
    }
  }
  return {"local_support", worst <= 1e-13, fmt("max |B_k| outside [u_k, v_k] = %.3e", worst)};
}

CheckResult smoothness_jumps(const gtb::GTSplineSpace& space) {
  double worst_smooth = 0.0;
  double weakest_band = INFINITY;
  double worst_outside = 0.0;
  int skipped = 0;
  for (int i = 1; i < space.intervals(); ++i) {
    const int r = space.smoothness()[i];
    // The band prediction for the first non-vanishing jump needs r_i < min(p_i, p_{i+1}).
    const bool banded = r < std::min(space.degrees()[i - 1], space.degrees()[i]);
    if (!banded) ++skipped;
    for (int j = 0; j <= r + 1; ++j) {
      const double scale = std::max(jump_scale(space, i, j), 1e-300);
      const Eigen::VectorXd jumps = gtb::jumps(space, i, j) / scale;
      if (j <= r) {
        worst_smooth = std::max(worst_smooth, jumps.cwiseAbs().maxCoeff());
        continue;
      }
      if (!banded) continue;
      const gtb::Band band = gtb::jump_band(space.degrees(), space.smoothness(), i);
      for (int k = 0; k < space.dimension(); ++k) {
        if (k >= band.first && k <= band.last) {
          weakest_band = std::min(weakest_band, std::abs(jumps(k)));
        } else {
          worst_outside = std::max(worst_outside, std::abs(jumps(k)));
        }
      }
    }
  }
  const bool any_band = std::isfinite(weakest_band);
  const bool ok = worst_smooth <= 1e-9 && (!any_band || weakest_band > 1e-8) &&
                  worst_outside <= 1e-10;
  std::string detail = fmt("max |J| for j <= r_i: %.3e", worst_smooth);
  if (any_band) {
    detail += fmt(", min in-band |J| for j = r_i+1: %.3e", weakest_band) +
              fmt(", max out-of-band: %.3e", worst_outside);
  }
  if (skipped > 0) {
    detail += ", band test not applicable at " + std::to_string(skipped) +
              " breakpoint(s) with r_i = min(p_i, p_{i+1})";
  }
  return {"smoothness_jumps", ok, detail};
}

CheckResult extraction_entries(const gtb::GTSplineSpace& space) {
  const Eigen::MatrixXd& c = space.extraction().C;
  const double lo = c.minCoeff();
  const double hi = c.maxCoeff();
  return {"extraction_entries", lo >= -1e-14 && hi <= 1.0 + 1e-14,
          fmt("entries in [%.17g", lo) + fmt(", %.17g]", hi)};
}

CheckResult extraction_column_sums(const gtb::GTSplineSpace& space) {
  const Eigen::MatrixXd& c = space.extraction().C;
  const double worst = (c.colwise().sum().array() - 1.0).abs().maxCoeff();
  return {"extraction_column_sums", worst <= 1e-12, fmt("max |column sum - 1| = %.3e", worst)};
}

CheckResult factor_structure(const gtb::GTSplineSpace& space) {
  int bad = 0;
  double worst_sum = 0.0;
  for (const auto& f : space.extraction().factors) {
    const Eigen::MatrixXd m = f.matrix();
    const int n = static_cast<int>(m.cols());
    for (int row = 0; row < n - 1; ++row) {
      for (int col = 0; col < n; ++col) {
        const double value = m(row, col);
        bool allowed = false;
        if (row < f.band.first) {
          allowed = col == row;
          if (allowed && value != 1.0) ++bad;
        } else if (row >= f.band.last) {
          allowed = col == row + 1;
          if (allowed && value != 1.0) ++bad;
        } else {
          allowed = col == row || col == row + 1;
          if (allowed && !(value > 0.0)) ++bad;
        }
        if (!allowed && value != 0.0) ++bad;
      }
    }
    worst_sum = std::max(worst_sum, (m.colwise().sum().array() - 1.0).abs().maxCoeff());
  }
  return {"factor_structure", bad == 0 && worst_sum <= 1e-12,
          std::to_string(space.extraction().factors.size()) + " factors, " +
              std::to_string(bad) + " template violations" +
              fmt(", max |column sum - 1| = %.3e", worst_sum)};
}

CheckResult recurrence_oracle(const gtb::GTSplineSpace& space) {
  try {
    const gtb::WeightAdmissibility admissible = gtb::check_weight_admissibility(space);
    if (!admissible.admissible) {
      return {"recurrence_oracle", true,
              "skipped: weights not admissible at x_" + std::to_string(admissible.breakpoint) +
                  " (D^" + std::to_string(admissible.order) + " w_" +
                  std::to_string(admissible.weight) + fmt(" differs by %.3e)", admissible.mismatch)};
    }
    const gtb::RecurrenceOracle local(space, gtb::RecurrenceKind::Local);
    const gtb::RecurrenceOracle global(space, gtb::RecurrenceKind::Global);
    double worst = 0.0;
    for (double x : uniform(space, 50)) {
      const Eigen::VectorXd basis = space.eval_basis(x, 0).col(0);
      worst = std::max(worst, (basis - local.eval_all(x)).cwiseAbs().maxCoeff());
      worst = std::max(worst, (basis - global.eval_all(x)).cwiseAbs().maxCoeff());
    }
    return {"recurrence_oracle", worst <= 1e-7,
            fmt("max deviation from local/global recurrences = %.3e", worst)};
  } catch (const gtb::OracleUnsupportedError& e) {
    return {"recurrence_oracle", true, std::string("skipped: ") + e.what()};
  }
}

bool uniform_polynomial(const gtb::GTSplineSpace& space, int& degree) {
  degree = -1;
  for (const auto& f : space.definition().sections) {
    const auto* poly = std::get_if<gtb::Polynomial>(&f);
    if (!poly || (degree >= 0 && poly->degree != degree)) return false;
    degree = poly->degree;
  }
  return true;
}

CheckResult cox_de_boor(const gtb::GTSplineSpace& space, int degree) {
  const auto knots = gtb::open_knot_sequence(space.partition(), degree, space.smoothness());
  const int order = degree >= 1 ? 1 : 0;
  double worst = 0.0;
  for (double x : uniform(space, 500)) {
    const Eigen::MatrixXd ours = space.eval_basis(x, order);
    const Eigen::MatrixXd ref = gtb::cox_de_boor(knots, degree, x, order);
    worst = std::max(worst, (ours - ref).cwiseAbs().maxCoeff());
  }
  return {"cox_de_boor", worst <= 1e-12,
          fmt("max deviation of values and first derivatives = %.3e", worst)};
}

}  // namespace

double jump_scale(const gtb::GTSplineSpace& space, int breakpoint, int order) {
  const double x = space.partition().breakpoint(breakpoint);
  const double left = space.piece_derivatives(breakpoint - 1, x, order).col(order).cwiseAbs().maxCoeff();
  const double right = space.piece_derivatives(breakpoint, x, order).col(order).cwiseAbs().maxCoeff();
  return std::max(left, right);
}

std::vector<CheckResult> verify_space(const gtb::GTSplineSpace& space) {
  std::vector<CheckResult> results{
      partition_of_unity(space),  nonnegativity(space),      local_support(space),
      smoothness_jumps(space),    extraction_entries(space), extraction_column_sums(space),
      factor_structure(space),    recurrence_oracle(space),
  };
  int degree = 0;
  if (uniform_polynomial(space, degree)) results.push_back(cox_de_boor(space, degree));
  return results;
}

}  // namespace gtbs
