#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gtb/sections.hpp"

namespace gtb {

// Bernstein-like basis b_0..b_p of one section, stored as coefficients in the
// section's span basis. Endpoint derivative tables are computed once.
//
//   b_0(lo) = 1, b_j(lo) = 0 (j >= 1), b_p(hi) = 1, b_j(hi) = 0 (j < p)
//   D^l b_j(lo) = 0 for l < j,  D^l b_j(hi) = 0 for l < p - j
//
// Immutable after construction.
class BernsteinBasis {
 public:
  // coefficients(j, k): weight of span function k in b_j.
  BernsteinBasis(SectionSpace section, Eigen::MatrixXd coefficients, double condition_estimate = 1.0);

  const SectionSpace& section() const noexcept { return section_; }
  int degree() const noexcept { return section_.degree(); }
  const Eigen::MatrixXd& coefficients() const noexcept { return coefficients_; }

  // (j, d) -> D^d b_j at lo / hi, d = 0..p.
  const Eigen::MatrixXd& left_table() const noexcept { return left_table_; }
  const Eigen::MatrixXd& right_table() const noexcept { return right_table_; }

  // (p+1) x (max_order+1) matrix of D^d b_j(x). Throws DomainError / OrderError.
  Eigen::MatrixXd derivatives(double x, int max_order) const;
  // Unchecked variant writing into a caller-provided block.
  void derivatives_into(double x, int max_order, Eigen::Ref<Eigen::MatrixXd> out) const;

  // Largest 1/rcond over the Hermite solves (1 for closed forms).
  double condition_estimate() const noexcept { return condition_estimate_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  SectionSpace section_;
  Eigen::MatrixXd coefficients_;
  Eigen::MatrixXd left_table_;
  Eigen::MatrixXd right_table_;
  double condition_estimate_;
  std::vector<std::string> warnings_;
};

// Solves the Hermite problems for b_0, b_1, ... in order; the condition on
// D^j b_j(lo) uses the already built b_0..b_{j-1}. For a section without
// constants (degree 1 kernels only) the last condition becomes b_p(hi) = 1.
// Throws EctViolationError on a singular collocation system.
BernsteinBasis build_bernstein(const SectionSpace& section);

// Closed-form basis for polynomial sections of any degree and for
// trigonometric / exponential sections of degree 1 or 2; nullopt otherwise.
std::optional<BernsteinBasis> closed_form_bernstein(const SectionSpace& section);

struct EndpointJumpTable {
  Eigen::VectorXd right;  // D^order b_j(hi)
  Eigen::VectorXd left;   // D^order b_j(lo)
};

EndpointJumpTable endpoint_jump_table(const BernsteinBasis& basis, int order);

}  // namespace gtb
