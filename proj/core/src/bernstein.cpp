#include "gtb/bernstein.hpp"

#include <cmath>
#include <sstream>
#include <variant>

#include "gtb/errors.hpp"

namespace gtb {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Polynomial Bernstein b_j = C(p,j) s^j (1-s)^{p-j}, s = (x-lo)/h, in the
// (x-lo)^k basis.
Eigen::MatrixXd polynomial_coefficients(int p, double h) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(p + 1, p + 1);
  for (int j = 0; j <= p; ++j) {
    for (int k = j; k <= p; ++k) {
      const double sign = (k - j) % 2 == 0 ? 1.0 : -1.0;
      c(j, k) = sign * binomial(p, j) * binomial(p - j, k - j) / std::pow(h, k);
    }
  }
  return c;
}

}  // namespace

BernsteinBasis::BernsteinBasis(SectionSpace section, Eigen::MatrixXd coefficients,
                               double condition_estimate)
    : section_(std::move(section)),
      coefficients_(std::move(coefficients)),
      condition_estimate_(condition_estimate) {
  const int n = section_.dimension();
  left_table_.resize(n, n);
  right_table_.resize(n, n);
  derivatives_into(section_.lo(), n - 1, left_table_);
  derivatives_into(section_.hi(), n - 1, right_table_);
  if (condition_estimate_ > 1e12) {
    std::ostringstream os;
    os << describe(section_.family()) << " on [" << section_.lo() << ", " << section_.hi()
       << "]: Hermite system condition estimate " << condition_estimate_;
    warnings_.push_back(os.str());
  }
}

void BernsteinBasis::derivatives_into(double x, int max_order,
                                      Eigen::Ref<Eigen::MatrixXd> out) const {
  Eigen::MatrixXd span(section_.dimension(), max_order + 1);
  section_.span_derivatives(x, max_order, span);
  out.noalias() = coefficients_ * span;
}

Eigen::MatrixXd BernsteinBasis::derivatives(double x, int max_order) const {
  if (!(x >= section_.lo() && x <= section_.hi())) {
    throw DomainError("x outside the Bernstein basis interval");
  }
  if (max_order < 0 || max_order > degree()) {
    throw OrderError("derivative order outside [0, p]");
  }
  Eigen::MatrixXd out(section_.dimension(), max_order + 1);
  derivatives_into(x, max_order, out);
  return out;
}

BernsteinBasis build_bernstein(const SectionSpace& section) {
  const int p = section.degree();
  const int n = p + 1;
  const double h = section.length();
  const bool has_constants = section.contains_constants();

  Eigen::MatrixXd left(n, n);
  Eigen::MatrixXd right(n, n);
  section.span_derivatives(section.lo(), p, left);
  section.span_derivatives(section.hi(), p, right);

  // Row j: coefficients of a function with D^l(lo) = 0 for l < j and
  // D^l(hi) = 0 for l < p - j, normalised by h^j D^j(lo) = 1. Without
  // constants (degree 1 kernel pairs) the last one uses b_p(hi) = 1 instead.
  Eigen::MatrixXd shapes(n, n);
  double worst = 1.0;
  for (int j = 0; j <= p; ++j) {
    Eigen::MatrixXd m(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    int row = 0;
    const bool by_right_value = !has_constants && j == p;
    const int left_rows = by_right_value ? j : j + 1;
    for (int l = 0; l < left_rows; ++l, ++row) m.row(row) = std::pow(h, l) * left.col(l).transpose();
    const int right_rows = by_right_value ? 1 : p - j;
    for (int l = 0; l < right_rows; ++l, ++row) m.row(row) = std::pow(h, l) * right.col(l).transpose();
    rhs(by_right_value ? n - 1 : j) = 1.0;

    Eigen::VectorXd scale(n);
    for (int c = 0; c < n; ++c) {
      scale(c) = m.col(c).cwiseAbs().maxCoeff();
      if (!(scale(c) > 0.0)) {
        throw EctViolationError(describe(section.family()) +
                                ": span function vanishes in the Hermite system");
      }
      m.col(c) /= scale(c);
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-15)) {
      throw EctViolationError(describe(section.family()) +
                              ": singular Hermite system for Bernstein function " +
                              std::to_string(j));
    }
    worst = std::max(worst, 1.0 / rcond);
    Eigen::VectorXd sol = lu.solve(rhs);
    // One step of iterative refinement.
    sol += lu.solve(rhs - m * sol);
    shapes.row(j) = sol.cwiseQuotient(scale).transpose();
  }

  // Scale factors: partition of unity when the space holds constants (the
  // first span function is 1), otherwise b_0(lo) = 1 and b_p(hi) = 1.
  Eigen::VectorXd factor(n);
  if (has_constants) {
    Eigen::MatrixXd system = shapes.transpose();
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(n);
    unit(0) = 1.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    factor = lu.solve(unit);
    factor += lu.solve(unit - system * factor);
    worst = std::max(worst, 1.0 / lu.rcond());
  } else {
    factor.setOnes();
    factor(0) = 1.0 / shapes.row(0).dot(left.col(0));
  }
  for (int j = 0; j <= p; ++j) {
    if (!(factor(j) > 0.0)) {
      throw EctViolationError(describe(section.family()) + ": Bernstein function " +
                              std::to_string(j) + " is not positive");
    }
  }
  Eigen::MatrixXd coeffs = factor.asDiagonal() * shapes;
  return BernsteinBasis(section, std::move(coeffs), worst);
}

std::optional<BernsteinBasis> closed_form_bernstein(const SectionSpace& section) {
  const int p = section.degree();
  const double lo = section.lo();
  const double hi = section.hi();
  const double h = section.length();
  const auto& family = section.family();

  if (std::holds_alternative<Polynomial>(family)) {
    return BernsteinBasis(section, polynomial_coefficients(p, h));
  }
  if (p == 2 && section.remainder_kernels()) {
    // Span order: 1, R_1(wt)/R_1(wh), R_2(wt)/R_2(wh) with t = x - lo, where
    // R_1 = sin / sinh and R_2 = 1 - cos / cosh - 1.
    const bool trig = std::holds_alternative<Trigonometric>(family);
    const double wh = h * (trig ? std::get<Trigonometric>(family).omega
                                : std::get<Exponential>(family).omega);
    const double s = trig ? std::sin(wh) : std::sinh(wh);
    const double c = trig ? std::cos(wh) : std::cosh(wh);
    const double d = trig ? 1.0 - c : c - 1.0;
    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(3, 3);
    coeffs.row(0) << 1.0, -s * s / d, c;
    coeffs(2, 2) = 1.0;
    coeffs.row(1) = -coeffs.row(0) - coeffs.row(2);
    coeffs(1, 0) += 1.0;
    return BernsteinBasis(section, std::move(coeffs));
  }
  if (const auto* trig = std::get_if<Trigonometric>(&family)) {
    const double w = trig->omega;
    // Span order: [1 (p = 2 only)], cos(wx), sin(wx).
    if (p == 1) {
      // b_0 = sin(w(hi-x))/sin(wh), b_1 = sin(w(x-lo))/sin(wh)
      const double s = std::sin(w * h);
      Eigen::MatrixXd c(2, 2);
      c << std::sin(w * hi) / s, -std::cos(w * hi) / s,  //
          -std::sin(w * lo) / s, std::cos(w * lo) / s;
      return BernsteinBasis(section, std::move(c));
    }
    if (p == 2) {
      // b_0 = (1 - cos(w(hi-x)))/(1 - cos wh), b_2 = (1 - cos(w(x-lo)))/(1 - cos wh)
      const double d = 1.0 - std::cos(w * h);
      Eigen::MatrixXd c(3, 3);
      c.row(0) << 1.0 / d, -std::cos(w * hi) / d, -std::sin(w * hi) / d;
      c.row(2) << 1.0 / d, -std::cos(w * lo) / d, -std::sin(w * lo) / d;
      c.row(1) = -c.row(0) - c.row(2);
      c(1, 0) += 1.0;
      return BernsteinBasis(section, std::move(c));
    }
    return std::nullopt;
  }
  if (const auto* expo = std::get_if<Exponential>(&family)) {
    // Span order: [1 (p = 2 only)], sinh(w(hi-x))/sinh(wh), sinh(w(x-lo))/sinh(wh).
    if (p == 1) {
      return BernsteinBasis(section, Eigen::MatrixXd::Identity(2, 2));
    }
    if (p == 2) {
      // cosh(w(hi-x)) = cosh(wh) g1 + g2, cosh(w(x-lo)) = g1 + cosh(wh) g2.
      const double c_wh = expo->omega * h;
      const double inv_d = 1.0 / (1.0 - std::cosh(c_wh));
      const double ratio = 1.0 / (1.0 / std::cosh(c_wh) - 1.0);  // cosh / (1 - cosh)
      Eigen::MatrixXd c(3, 3);
      c.row(0) << inv_d, -ratio, -inv_d;
      c.row(2) << inv_d, -inv_d, -ratio;
      c.row(1) = -c.row(0) - c.row(2);
      c(1, 0) += 1.0;
      return BernsteinBasis(section, std::move(c));
    }
    return std::nullopt;
  }
  return std::nullopt;
}

EndpointJumpTable endpoint_jump_table(const BernsteinBasis& basis, int order) {
  if (order < 0 || order > basis.degree()) {
    throw OrderError("jump table order " + std::to_string(order) + " outside [0, " +
                     std::to_string(basis.degree()) + "]");
  }
  return {basis.right_table().col(order), basis.left_table().col(order)};
}

}  // namespace gtb
