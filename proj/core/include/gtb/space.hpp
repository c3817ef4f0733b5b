#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gtb/bernstein.hpp"
#include "gtb/extraction.hpp"
#include "gtb/sections.hpp"

namespace gtb {

// Input description of a GT-spline space: one section family per interval
// and the interior smoothness r_1..r_{m-1} (the ends are -1).
struct SpaceDefinition {
  std::vector<double> breakpoints;
  std::vector<SectionFamily> sections;
  std::vector<int> smoothness;
};

// Which limit to take at an interior breakpoint.
enum class Side { Left, Right };

// A GT-spline space with its GTB-spline basis B = C b, where b is the global
// Bernstein basis. Immutable; evaluation is safe from multiple threads.
class GTSplineSpace {
 public:
  const SpaceDefinition& definition() const noexcept { return definition_; }
  const Partition& partition() const noexcept { return partition_; }
  const std::vector<SectionSpace>& sections() const noexcept { return sections_; }
  const std::vector<BernsteinBasis>& bernstein() const noexcept { return bernstein_; }
  const std::vector<int>& degrees() const noexcept { return degrees_; }
  // r_0..r_m
  const std::vector<int>& smoothness() const noexcept { return smoothness_; }
  const KnotVectors& knots() const noexcept { return knots_; }
  const ExtractionMatrix& extraction() const noexcept { return extraction_; }
  // First global Bernstein index of each interval (m+1 entries).
  const std::vector<int>& offsets() const noexcept { return offsets_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  int intervals() const noexcept { return partition_.intervals(); }
  int dimension() const noexcept { return static_cast<int>(extraction_.C.rows()); }
  int bernstein_dimension() const noexcept { return static_cast<int>(extraction_.C.cols()); }
  int constraint_count() const noexcept { return bernstein_dimension() - dimension(); }
  int max_degree() const noexcept;

  // Basis functions that are non-zero on an interval (p_i + 1 of them).
  Band active(int interval) const;

  // N x (max_order+1) matrix of D^d B_k(x). Interior breakpoints give the
  // right limit; x = b gives the left limit. Throws DomainError / OrderError.
  Eigen::MatrixXd eval_basis(double x, int max_order = 0) const;

  // One-sided variant: at an interior breakpoint x_i, Side::Left uses the
  // interval ending at x_i.
  Eigen::MatrixXd eval_basis(double x, int max_order, Side side) const;

  // Evaluation with the piece of a given interval; x must lie in its closure.
  Eigen::MatrixXd eval_on_interval(int interval, double x, int max_order) const;

  // Like eval_on_interval without the order bound: orders above p_i are
  // taken from the span functions (used for jumps of order p_i + 1).
  Eigen::MatrixXd piece_derivatives(int interval, double x, int max_order) const;

 private:
  friend GTSplineSpace build_space(const SpaceDefinition& definition);
  explicit GTSplineSpace(SpaceDefinition definition);

  SpaceDefinition definition_;
  Partition partition_;
  std::vector<SectionSpace> sections_;
  std::vector<BernsteinBasis> bernstein_;
  std::vector<int> degrees_;
  std::vector<int> smoothness_;
  KnotVectors knots_;
  ExtractionMatrix extraction_;
  std::vector<int> offsets_;
  std::vector<std::string> warnings_;
};

// Validates the definition, builds the local Bernstein bases, the constraint
// matrix and the extraction operator. Throws ConfigError, InvalidFamilyError,
// EctViolationError or BasisNonexistenceError.
GTSplineSpace build_space(const SpaceDefinition& definition);

// J[x_i, order] B_k = D^order_- B_k(x_i) - D^order_+ B_k(x_i), 1 <= i <= m-1.
double jump(const GTSplineSpace& space, int breakpoint, int order, int k);
// The same for all k at once.
Eigen::VectorXd jumps(const GTSplineSpace& space, int breakpoint, int order);

// Parametric curve sum_k d_k B_k(x) with control points as rows.
class SplineCurve {
 public:
  SplineCurve(std::shared_ptr<const GTSplineSpace> space, Eigen::MatrixXd control);

  const GTSplineSpace& space() const noexcept { return *space_; }
  std::shared_ptr<const GTSplineSpace> shared_space() const noexcept { return space_; }
  const Eigen::MatrixXd& control() const noexcept { return control_; }
  int dimension() const noexcept { return static_cast<int>(control_.cols()); }

  // D^order of the curve at x (same limit conventions as eval_basis).
  Eigen::VectorXd eval(double x, int order = 0) const;
  Eigen::VectorXd eval(double x, int order, Side side) const;

 private:
  std::shared_ptr<const GTSplineSpace> space_;
  Eigen::MatrixXd control_;
};

Eigen::VectorXd eval_curve(const SplineCurve& curve, double x);

struct KnotInsertion {
  GTSplineSpace refined;
  // new coefficients = transfer * old coefficients (N_new x N_old); this is
  // the transpose of the knot-removal factor below.
  Eigen::MatrixXd transfer;
  KnotRemovalFactor factor;
  int breakpoint;       // index of the inserted knot in the refined partition
  bool new_breakpoint;  // false when the multiplicity of an existing one grew
};

// Inserting an existing interior breakpoint lowers its smoothness by one
// (needs r_i >= 0); any other x in (a, b) becomes a new breakpoint splitting
// its section, with smoothness p_i - 1 there.
KnotInsertion insert_knot(const GTSplineSpace& space, double x);
SplineCurve insert_knot(const SplineCurve& curve, double x);

// Integrals of every B_k over [a, b] (adaptive Gauss-Legendre per interval).
Eigen::VectorXd basis_integrals(const GTSplineSpace& space);

// s_k = 1 / integral(B_k), so that s_k B_k has unit integral.
Eigen::VectorXd unit_integral_scaling(const GTSplineSpace& space);

}  // namespace gtb
