#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace gtb {

// Strictly increasing breakpoints x_0 < x_1 < ... < x_m, m >= 1.
// Interval i (0-based) is [x_i, x_{i+1}); the last one is closed.
class Partition {
 public:
  explicit Partition(std::vector<double> breakpoints);

  int intervals() const noexcept { return static_cast<int>(breakpoints_.size()) - 1; }
  double breakpoint(int i) const { return breakpoints_.at(static_cast<std::size_t>(i)); }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  double left() const noexcept { return breakpoints_.front(); }
  double right() const noexcept { return breakpoints_.back(); }

  // Interval containing x under the half-open convention. Throws DomainError
  // outside [left(), right()].
  int locate(double x) const;

 private:
  std::vector<double> breakpoints_;
};

// D^order f(x) for a user supplied kernel function.
using DerivativeFunction = std::function<double(double x, int order)>;

// span{1, x, ..., x^p}
struct Polynomial {
  int degree = 0;
};

// span{1, x, ..., x^{p-2}, cos(omega x), sin(omega x)}; needs omega * length < pi.
struct Trigonometric {
  int degree = 2;
  double omega = 1.0;
};

// span{1, x, ..., x^{p-2}, sinh(omega x), cosh(omega x)}
struct Exponential {
  int degree = 2;
  double omega = 1.0;
};

// span{1, x, ..., x^{p-2}, u(x), v(x)} for a user supplied pair (u, v).
// Both callbacks must return derivatives up to order p + 1.
struct GeneralizedPolynomial {
  int degree = 2;
  DerivativeFunction u;
  DerivativeFunction v;
  std::string name = "custom";
};

using SectionFamily = std::variant<Polynomial, Trigonometric, Exponential, GeneralizedPolynomial>;

int degree_of(const SectionFamily& family);
std::string describe(const SectionFamily& family);

// True when both families generate the same function space on any common
// interval. Custom pairs compare by name.
bool same_space(const SectionFamily& a, const SectionFamily& b);

// One ECT-space on a closed interval [lo, hi], represented by a span basis
// with closed-form derivatives of every order:
//   index j <= p-2 : (x - lo)^j
//   index p-1, p   : the family kernel pair
// Polynomial sections use (x - lo)^j for every index. The exponential kernel
// is the interval-normalised pair sinh(w(hi-x))/sinh(wh), sinh(w(x-lo))/sinh(wh)
// so that values stay in [0, 1]. For degree >= 2 and w h <= kRemainderLimit
// both trigonometric and exponential kernels are replaced by the Taylor
// remainders R_{p-1}(w(x-lo)), R_p(w(x-lo)) of cos/sin (cosh/sinh), scaled to
// 1 at hi: they tend to monomials as w h -> 0, which keeps the Hermite
// systems well conditioned for small frequencies.
//
// Immutable; evaluation is safe from multiple threads.
class SectionSpace {
 public:
  SectionSpace(double lo, double hi, SectionFamily family);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double length() const noexcept { return hi_ - lo_; }
  int degree() const noexcept { return degree_; }
  int dimension() const noexcept { return degree_ + 1; }
  const SectionFamily& family() const noexcept { return family_; }

  // Whether the constant function lies in the space (w_0 = 1).
  bool contains_constants() const noexcept;

  // Writes D^d phi_j(x) into out(j, d) for d = 0..max_order. No domain or
  // order checks; derivatives above p are the exact analytic ones.
  void span_derivatives(double x, int max_order, Eigen::Ref<Eigen::MatrixXd> out) const;

  // D^order of span function j at x.
  double span_function(int j, double x, int order) const;

  // Same family on a subinterval (used by knot insertion).
  SectionSpace restricted(double lo, double hi) const;

  // Whether the kernel pair is the Taylor remainder pair described above.
  bool remainder_kernels() const noexcept { return remainder_; }
  static constexpr double kRemainderLimit = 2.0;

 private:
  double kernel(int which, double x, int order) const;

  double lo_;
  double hi_;
  SectionFamily family_;
  int degree_;
  bool remainder_ = false;
  double remainder_scale_[2] = {1.0, 1.0};
};

// Checked evaluation: (p+1) x (max_order+1) matrix with entry (j, d) the d-th
// derivative of span function j at x. Throws DomainError / OrderError.
Eigen::MatrixXd eval_span_derivatives(const SectionSpace& section, double x, int max_order);

// Hermite collocation matrix with rows D^l at lo (l < left_conditions)
// followed by D^l at hi (l < p + 1 - left_conditions); columns are span
// functions. Rows are scaled by length^l.
Eigen::MatrixXd hermite_collocation(const SectionSpace& section, int left_conditions);

// Reciprocal condition estimate over all endpoint Hermite splits; the ECT
// property requires every split to be nonsingular.
double endpoint_collocation_rcond(const SectionSpace& section);

// The unique pair U*, V* in span{D^{p-1} u, D^{p-1} v} with
// U*(lo) = 1, U*(hi) = 0, V*(lo) = 0, V*(hi) = 1.
class NormalizedPair {
 public:
  explicit NormalizedPair(SectionSpace section);

  double U(double x, int order = 0) const;
  double V(double x, int order = 0) const;
  const SectionSpace& section() const noexcept { return section_; }

 private:
  double combine(const Eigen::Vector2d& c, double x, int order) const;

  SectionSpace section_;
  Eigen::Vector2d u_coeffs_;
  Eigen::Vector2d v_coeffs_;
};

// Throws InvalidFamilyError for degree 0 or a degenerate endpoint system.
NormalizedPair normalized_pair(const SectionSpace& section);

// The two non-trivial weights of a generalised polynomial space:
//   w_{p-1} = U* + V*,  w_p = (U* DV* - V* DU*) / (U* + V*)^2
// All lower weights equal 1.
class GpbWeights {
 public:
  explicit GpbWeights(NormalizedPair pair) : pair_(std::move(pair)) {}

  double penultimate(double x) const;
  double last(double x) const;
  // w_j for j = 0..p.
  double weight(int j, double x) const;
  // D^d w_j(x) for d = 0..max_order.
  Eigen::VectorXd weight_derivatives(int j, double x, int max_order) const;
  const NormalizedPair& pair() const noexcept { return pair_; }

 private:
  NormalizedPair pair_;
};

// Throws InvalidFamilyError when either weight is non-positive at one of
// `samples` uniformly spaced points of the closed interval.
GpbWeights gpb_weights(const SectionSpace& section, int samples = 101);

}  // namespace gtb
