#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gtb/sections.hpp"
#include "gtb/space.hpp"

namespace gtb {

// Piecewise Chebyshev-Lobatto representation on a mesh whose elements refine
// a partition. A function is a (points x elements) sample matrix; it is
// interpolated barycentrically inside each element, so jumps at partition
// breakpoints are represented exactly.
class ChebyshevMesh {
 public:
  ChebyshevMesh(const Partition& partition, const std::vector<int>& elements_per_interval,
                int points = 32);

  int elements() const noexcept { return static_cast<int>(lo_.size()); }
  int points() const noexcept { return static_cast<int>(reference_.size()); }
  double lo(int e) const { return lo_[e]; }
  double hi(int e) const { return hi_[e]; }
  int interval_of(int e) const { return interval_[e]; }
  double node(int e, int j) const;

  // Element holding x: right limit at breakpoints, left limit at b.
  int locate(double x) const;
  double interpolate(const Eigen::MatrixXd& samples, double x) const;
  // Samples of the antiderivative starting from zero at the left end.
  Eigen::MatrixXd cumulative(const Eigen::MatrixXd& samples) const;
  double integral(const Eigen::MatrixXd& samples) const;

 private:
  Partition partition_;
  std::vector<double> lo_, hi_;
  std::vector<int> interval_;
  std::vector<int> first_element_;  // per interval
  Eigen::VectorXd reference_;       // nodes on [-1, 1], ascending
  Eigen::VectorXd bary_;
  Eigen::MatrixXd cumulative_;      // reference integration matrix
  Eigen::VectorXd quadrature_;      // reference weights
};

// Number of mesh elements used to resolve a section of the given family.
int oracle_elements(const SectionSpace& section);

enum class RecurrenceKind { Local, Global };

// The integral recurrences building B_{k,q}, q = 0..p, from weight
// functions, evaluated on a Chebyshev mesh. Requires generalised polynomial
// sections; other weight systems raise OracleUnsupportedError.
class RecurrenceOracle {
 public:
  RecurrenceOracle(const GTSplineSpace& space, RecurrenceKind kind, int points = 32);

  int dimension() const noexcept { return n_; }
  int max_degree() const noexcept { return p_; }
  // k is 0-based; level defaults to p (the GTB-splines).
  double eval(int k, double x) const;
  double eval(int k, int level, double x) const;
  Eigen::VectorXd eval_all(double x) const;
  // d_{k,q}; zero for undefined or vanishing functions.
  double integral(int k, int level) const;
  const ChebyshevMesh& mesh() const noexcept { return mesh_; }

 private:
  double weight(int interval, int j, double x) const;
  bool in_support(int k1, int level, int interval) const;  // k1 is 1-based

  ChebyshevMesh mesh_;
  RecurrenceKind kind_;
  int n_ = 0;
  int p_ = 0;
  std::vector<int> degrees_;
  std::vector<double> breakpoints_;
  std::vector<double> u_, v_;
  std::vector<GpbWeights> weights_;  // placeholder entry for degree 0
  std::vector<bool> has_weights_;
  // levels_[q][k1], k1 = 1..N (index 0 unused); empty matrix = undefined.
  std::vector<std::vector<Eigen::MatrixXd>> levels_;
  std::vector<std::vector<double>> integrals_;
};

// Admissibility of the generalised polynomial weights of a space: at every
// interior x_i and j <= r_i, D^l w_j must agree from both sides for
// l <= r_i - j. The recurrences reproduce the basis only for admissible
// weights; this always holds when r_i < min(p_i, p_{i+1}).
struct WeightAdmissibility {
  bool admissible = true;
  int breakpoint = -1;  // first offending breakpoint
  int weight = -1;
  int order = -1;
  double mismatch = 0.0;
};
WeightAdmissibility check_weight_admissibility(const GTSplineSpace& space, double tol = 1e-9);

double local_recurrence_eval(const GTSplineSpace& space, int k, double x);
double global_recurrence_eval(const GTSplineSpace& space, int k, double x);

// Bernstein functions b_{j,q} of one generalised polynomial section built by
// repeated integration from b_{0,1} = U*, b_{1,1} = V*.
class BernsteinRecurrence {
 public:
  explicit BernsteinRecurrence(const SectionSpace& section, int points = 32);

  int degree() const noexcept { return p_; }
  double eval(int j, double x) const;
  double eval(int j, int level, double x) const;
  Eigen::VectorXd eval_all(double x) const;
  // b_{j,q} integrals over the section.
  double integral(int j, int level) const;

 private:
  NormalizedPair pair_;
  ChebyshevMesh mesh_;
  int p_;
  std::vector<std::vector<Eigen::MatrixXd>> levels_;  // levels_[q][j], q >= 1
  std::vector<std::vector<double>> integrals_;
};

BernsteinRecurrence bernstein_recurrence(const SectionSpace& section);

// Open knot sequence of a uniform-degree polynomial spline space: the ends
// repeated degree+1 times, x_i repeated degree - r_i times.
std::vector<double> open_knot_sequence(const Partition& partition, int degree,
                                       std::span<const int> smoothness);

// Classical polynomial B-splines by the Cox-de Boor recurrence: a
// (count x (max_order+1)) matrix of D^d B_k(x), right limits at interior
// knots and the left limit at the last knot.
Eigen::MatrixXd cox_de_boor(const std::vector<double>& knots, int degree, double x,
                            int max_order = 0);

}  // namespace gtb
