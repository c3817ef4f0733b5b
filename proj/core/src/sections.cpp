#include "gtb/sections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gtb/errors.hpp"

namespace gtb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// D^order of t^j.
double monomial(int j, double t, int order) {
  if (order > j) return 0.0;
  double factor = 1.0;
  for (int k = 0; k < order; ++k) factor *= static_cast<double>(j - k);
  const int power = j - order;
  return power == 0 ? factor : factor * std::pow(t, power);
}

// sinh(a) / sinh(c) and cosh(a) / sinh(c) for 0 <= a <= c, without overflow.
double sinh_ratio(double a, double c) {
  return std::exp(a - c) * (-std::expm1(-2.0 * a)) / (-std::expm1(-2.0 * c));
}
double cosh_ratio(double a, double c) {
  return std::exp(a - c) * (1.0 + std::exp(-2.0 * a)) / (-std::expm1(-2.0 * c));
}

// R_n(z) = sum over k >= n, k = n mod 2, of s^((k-n)/2) z^k / k!, with
// s = -1 for cos/sin and +1 for cosh/sinh. D R_n = R_{n-1}, R_0 = cos or cosh;
// n <= 0 returns D^{-n} R_0.
double taylor_remainder(int n, double z, bool trig) {
  if (n <= 0) {
    const int m = -n;
    if (!trig) return m % 2 == 0 ? std::cosh(z) : std::sinh(z);
    switch (m % 4) {
      case 0: return std::cos(z);
      case 1: return -std::sin(z);
      case 2: return -std::cos(z);
      default: return std::sin(z);
    }
  }
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= z / k;
  double sum = term;
  const double s = trig ? -1.0 : 1.0;
  for (int k = n; k < n + 200; k += 2) {
    term *= s * z * z / ((k + 1.0) * (k + 2.0));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

Partition::Partition(std::vector<double> breakpoints) : breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.size() < 2) {
    throw ConfigError("partition needs at least two breakpoints");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!std::isfinite(breakpoints_[i])) {
      throw ConfigError("breakpoint x_" + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(breakpoints_[i - 1] < breakpoints_[i])) {
      throw ConfigError("breakpoints must be strictly increasing at x_" + std::to_string(i));
    }
  }
}

int Partition::locate(double x) const {
  if (!(x >= left() && x <= right())) {
    throw DomainError("x = " + format_double(x) + " outside [" + format_double(left()) + ", " +
                      format_double(right()) + "]");
  }
  // First breakpoint strictly greater than x; the last interval is closed.
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const int i = static_cast<int>(it - breakpoints_.begin()) - 1;
  return std::min(i, intervals() - 1);
}

int degree_of(const SectionFamily& family) {
  return std::visit([](const auto& f) { return f.degree; }, family);
}

std::string describe(const SectionFamily& family) {
  return std::visit(
      overloaded{
          [](const Polynomial& f) { return "polynomial(p=" + std::to_string(f.degree) + ")"; },
          [](const Trigonometric& f) {
            return "trigonometric(p=" + std::to_string(f.degree) +
                   ", omega=" + format_double(f.omega) + ")";
          },
          [](const Exponential& f) {
            return "exponential(p=" + std::to_string(f.degree) +
                   ", omega=" + format_double(f.omega) + ")";
          },
          [](const GeneralizedPolynomial& f) {
            return f.name + "(p=" + std::to_string(f.degree) + ")";
          }},
      family);
}

bool same_space(const SectionFamily& a, const SectionFamily& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      overloaded{[&](const Polynomial& f) { return f.degree == std::get<Polynomial>(b).degree; },
                 [&](const Trigonometric& f) {
                   const auto& g = std::get<Trigonometric>(b);
                   return f.degree == g.degree && f.omega == g.omega;
                 },
                 [&](const Exponential& f) {
                   const auto& g = std::get<Exponential>(b);
                   return f.degree == g.degree && f.omega == g.omega;
                 },
                 [&](const GeneralizedPolynomial& f) {
                   const auto& g = std::get<GeneralizedPolynomial>(b);
                   return f.degree == g.degree && f.name == g.name;
                 }},
      a);
}

SectionSpace::SectionSpace(double lo, double hi, SectionFamily family)
    : lo_(lo), hi_(hi), family_(std::move(family)), degree_(degree_of(family_)) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw ConfigError("section interval [" + format_double(lo) + ", " + format_double(hi) +
                      "] is empty or not finite");
  }
  const double h = hi - lo;
  std::visit(
      overloaded{
          [](const Polynomial& f) {
            if (f.degree < 0) throw InvalidFamilyError("polynomial degree must be >= 0");
          },
          [h](const Trigonometric& f) {
            if (f.degree < 1) throw InvalidFamilyError("trigonometric degree must be >= 1");
            if (!(std::isfinite(f.omega) && f.omega > 0.0)) {
              throw InvalidFamilyError("trigonometric omega must be positive");
            }
            if (!(f.omega * h < std::numbers::pi)) {
              throw InvalidFamilyError("trigonometric section needs omega * length < pi, got " +
                                       format_double(f.omega * h));
            }
          },
          [](const Exponential& f) {
            if (f.degree < 1) throw InvalidFamilyError("exponential degree must be >= 1");
            if (!(std::isfinite(f.omega) && f.omega > 0.0)) {
              throw InvalidFamilyError("exponential omega must be positive");
            }
          },
          [](const GeneralizedPolynomial& f) {
            if (f.degree < 1) throw InvalidFamilyError("generalized polynomial degree must be >= 1");
            if (!f.u || !f.v) throw InvalidFamilyError("generalized polynomial needs both kernels");
          }},
      family_);

  double omega = 0.0;
  if (const auto* t = std::get_if<Trigonometric>(&family_)) omega = t->omega;
  if (const auto* e = std::get_if<Exponential>(&family_)) omega = e->omega;
  if (omega > 0.0 && degree_ >= 2 && omega * h <= kRemainderLimit) {
    remainder_ = true;
    const bool trig = std::holds_alternative<Trigonometric>(family_);
    remainder_scale_[0] = taylor_remainder(degree_ - 1, omega * h, trig);
    remainder_scale_[1] = taylor_remainder(degree_, omega * h, trig);
  }

  // Custom pairs get the heuristic ECT checks: nonsingular endpoint Hermite
  // systems and positive weights at samples.
  if (std::holds_alternative<GeneralizedPolynomial>(family_)) {
    if (endpoint_collocation_rcond(*this) < 1e-13) {
      throw InvalidFamilyError(describe(family_) +
                               " is not an ECT-space on the interval (singular Hermite system)");
    }
    gpb_weights(*this);
  }
}

bool SectionSpace::contains_constants() const noexcept {
  return std::holds_alternative<Polynomial>(family_) || degree_ >= 2;
}

double SectionSpace::kernel(int which, double x, int order) const {
  if (remainder_) {
    const bool trig = std::holds_alternative<Trigonometric>(family_);
    const double w = trig ? std::get<Trigonometric>(family_).omega
                          : std::get<Exponential>(family_).omega;
    const int n = which == 0 ? degree_ - 1 : degree_;
    return std::pow(w, order) * taylor_remainder(n - order, w * (x - lo_), trig) /
           remainder_scale_[which];
  }
  return std::visit(
      overloaded{
          [&](const Polynomial&) {
            return monomial(which == 0 ? degree_ - 1 : degree_, x - lo_, order);
          },
          [&](const Trigonometric& f) {
            const double wx = f.omega * x;
            const double scale = std::pow(f.omega, order);
            // D^d cos = cos, -sin, -cos, sin; D^d sin = sin, cos, -sin, -cos.
            const int phase = (order + (which == 0 ? 0 : 3)) % 4;
            switch (phase) {
              case 0: return scale * std::cos(wx);
              case 1: return -scale * std::sin(wx);
              case 2: return -scale * std::cos(wx);
              default: return scale * std::sin(wx);
            }
          },
          [&](const Exponential& f) {
            const double c = f.omega * (hi_ - lo_);
            const double a = which == 0 ? f.omega * (hi_ - x) : f.omega * (x - lo_);
            const double sign = (which == 0 && order % 2 == 1) ? -1.0 : 1.0;
            const double r = order % 2 == 0 ? sinh_ratio(a, c) : cosh_ratio(a, c);
            return sign * std::pow(f.omega, order) * r;
          },
          [&](const GeneralizedPolynomial& f) { return which == 0 ? f.u(x, order) : f.v(x, order); }},
      family_);
}

double SectionSpace::span_function(int j, double x, int order) const {
  if (std::holds_alternative<Polynomial>(family_) || j <= degree_ - 2) {
    return monomial(j, x - lo_, order);
  }
  return kernel(j == degree_ - 1 ? 0 : 1, x, order);
}

void SectionSpace::span_derivatives(double x, int max_order,
                                    Eigen::Ref<Eigen::MatrixXd> out) const {
  for (int j = 0; j <= degree_; ++j) {
    for (int d = 0; d <= max_order; ++d) out(j, d) = span_function(j, x, d);
  }
}

SectionSpace SectionSpace::restricted(double lo, double hi) const {
  if (!(lo >= lo_ && hi <= hi_)) {
    throw DomainError("restriction [" + format_double(lo) + ", " + format_double(hi) +
                      "] not inside the section interval");
  }
  return SectionSpace(lo, hi, family_);
}

Eigen::MatrixXd eval_span_derivatives(const SectionSpace& section, double x, int max_order) {
  if (!(x >= section.lo() && x <= section.hi())) {
    throw DomainError("x = " + format_double(x) + " outside section interval [" +
                      format_double(section.lo()) + ", " + format_double(section.hi()) + "]");
  }
  if (max_order < 0 || max_order > section.degree()) {
    throw OrderError("derivative order " + std::to_string(max_order) + " outside [0, " +
                     std::to_string(section.degree()) + "]");
  }
  Eigen::MatrixXd out(section.dimension(), max_order + 1);
  section.span_derivatives(x, max_order, out);
  return out;
}

Eigen::MatrixXd hermite_collocation(const SectionSpace& section, int left_conditions) {
  const int n = section.dimension();
  if (left_conditions < 0 || left_conditions > n) {
    throw OrderError("hermite split outside [0, p+1]");
  }
  const int right_conditions = n - left_conditions;
  Eigen::MatrixXd left(n, std::max(left_conditions, 1));
  Eigen::MatrixXd right(n, std::max(right_conditions, 1));
  if (left_conditions > 0) section.span_derivatives(section.lo(), left_conditions - 1, left);
  if (right_conditions > 0) section.span_derivatives(section.hi(), right_conditions - 1, right);
  Eigen::MatrixXd m(n, n);
  const double h = section.length();
  for (int l = 0; l < left_conditions; ++l) m.row(l) = std::pow(h, l) * left.col(l).transpose();
  for (int l = 0; l < right_conditions; ++l) {
    m.row(left_conditions + l) = std::pow(h, l) * right.col(l).transpose();
  }
  return m;
}

double endpoint_collocation_rcond(const SectionSpace& section) {
  double worst = std::numeric_limits<double>::infinity();
  for (int left = 0; left <= section.dimension(); ++left) {
    Eigen::MatrixXd m = hermite_collocation(section, left);
    // Column equilibration so that the estimate is basis-scale independent.
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double s = m.col(c).cwiseAbs().maxCoeff();
      if (s > 0.0) m.col(c) /= s;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    worst = std::min(worst, lu.rank() < m.rows() ? 0.0 : lu.rcond());
  }
  return worst;
}

NormalizedPair::NormalizedPair(SectionSpace section) : section_(std::move(section)) {
  const int p = section_.degree();
  if (p < 1) throw InvalidFamilyError("normalized pair needs degree >= 1");
  const int base = p - 1;
  Eigen::Matrix2d g;
  g << section_.span_function(p - 1, section_.lo(), base), section_.span_function(p, section_.lo(), base),
      section_.span_function(p - 1, section_.hi(), base), section_.span_function(p, section_.hi(), base);
  const double scale = g.cwiseAbs().maxCoeff();
  if (!(std::abs(g.determinant()) > 1e-13 * scale * scale)) {
    throw InvalidFamilyError(describe(section_.family()) +
                             ": degenerate endpoint system for the normalized pair");
  }
  const Eigen::Matrix2d inv = g.inverse();
  u_coeffs_ = inv.col(0);
  v_coeffs_ = inv.col(1);
}

double NormalizedPair::combine(const Eigen::Vector2d& c, double x, int order) const {
  const int p = section_.degree();
  return c(0) * section_.span_function(p - 1, x, p - 1 + order) +
         c(1) * section_.span_function(p, x, p - 1 + order);
}

double NormalizedPair::U(double x, int order) const { return combine(u_coeffs_, x, order); }
double NormalizedPair::V(double x, int order) const { return combine(v_coeffs_, x, order); }

NormalizedPair normalized_pair(const SectionSpace& section) { return NormalizedPair(section); }

double GpbWeights::penultimate(double x) const { return pair_.U(x) + pair_.V(x); }

double GpbWeights::last(double x) const {
  const double u = pair_.U(x);
  const double v = pair_.V(x);
  const double s = u + v;
  return (u * pair_.V(x, 1) - v * pair_.U(x, 1)) / (s * s);
}

double GpbWeights::weight(int j, double x) const {
  const int p = pair_.section().degree();
  if (j < 0 || j > p) throw IndexError("weight index outside [0, p]");
  if (j == p) return last(x);
  if (j == p - 1) return penultimate(x);
  return 1.0;
}

Eigen::VectorXd GpbWeights::weight_derivatives(int j, double x, int max_order) const {
  const int p = pair_.section().degree();
  if (j < 0 || j > p) throw IndexError("weight index outside [0, p]");
  if (max_order < 0) throw OrderError("negative derivative order");
  const int n = max_order + 1;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  if (j < p - 1) {
    out(0) = 1.0;
    return out;
  }
  // Truncated Taylor series at x: t[d] = D^d f(x) / d!.
  Eigen::VectorXd u(n + 1), v(n + 1);
  double factorial = 1.0;
  for (int d = 0; d <= n; ++d) {
    if (d > 0) factorial *= d;
    u(d) = pair_.U(x, d) / factorial;
    v(d) = pair_.V(x, d) / factorial;
  }
  auto product = [n](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k <= i; ++k) c(i) += a(k) * b(i - k);
    }
    return c;
  };
  const Eigen::VectorXd sum = (u + v).head(n);
  Eigen::VectorXd series(n);
  if (j == p - 1) {
    series = sum;
  } else {
    Eigen::VectorXd du(n), dv(n);
    for (int d = 0; d < n; ++d) {
      du(d) = (d + 1) * u(d + 1);
      dv(d) = (d + 1) * v(d + 1);
    }
    const Eigen::VectorXd num = product(u.head(n), dv) - product(v.head(n), du);
    const Eigen::VectorXd den = product(sum, sum);
    for (int i = 0; i < n; ++i) {
      double acc = num(i);
      for (int k = 1; k <= i; ++k) acc -= den(k) * series(i - k);
      series(i) = acc / den(0);
    }
  }
  factorial = 1.0;
  for (int d = 0; d < n; ++d) {
    if (d > 0) factorial *= d;
    out(d) = series(d) * factorial;
  }
  return out;
}

GpbWeights gpb_weights(const SectionSpace& section, int samples) {
  GpbWeights weights(normalized_pair(section));
  const int n = std::max(samples, 2);
  for (int s = 0; s < n; ++s) {
    const double x = section.lo() + section.length() * s / (n - 1);
    if (!(weights.penultimate(x) > 0.0) || !(weights.last(x) > 0.0)) {
      throw InvalidFamilyError(describe(section.family()) + ": non-positive weight at x = " +
                               format_double(x));
    }
  }
  return weights;
}

}  // namespace gtb
