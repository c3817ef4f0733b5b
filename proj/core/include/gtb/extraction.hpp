#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gtb/bernstein.hpp"
#include "gtb/sections.hpp"

namespace gtb {

// Throws ConfigError unless degrees has one entry >= 0 per interval and
// smoothness has m+1 entries with r_0 = r_m = -1 and
// -1 <= r_i <= min(p_i, p_{i+1}) in between. Messages name the breakpoint.
void validate_smoothness(const Partition& partition, std::span<const int> degrees,
                         std::span<const int> smoothness);

// Support descriptors of the B-spline-like basis: B_k lives on [u[k], v[k]].
// Indices are 0-based; sigma and mu keep their 1-based counting meaning
// (sigma(i) = sum_{j<i} (p_{j+1} - r_j), mu(i) = sum_{j<=i} (p_j - r_j),
// indexed by breakpoint i = 0..m).
struct KnotVectors {
  std::vector<double> u;
  std::vector<double> v;
  std::vector<int> u_breakpoint;  // breakpoint index of u[k]
  std::vector<int> v_breakpoint;  // breakpoint index of v[k]
  std::vector<int> sigma;
  std::vector<int> mu;

  int size() const noexcept { return static_cast<int>(u.size()); }
};

// degrees: p_1..p_m (one per interval); smoothness: r_0..r_m.
KnotVectors build_knot_vectors(const Partition& partition, std::span<const int> degrees,
                               std::span<const int> smoothness);

struct Supersmoothness {
  int start;  // r_u(k): exact smoothness order at u_k
  int end;    // r_v(k): exact smoothness order at v_k
};

// k is 0-based. Throws IndexError outside [0, N).
Supersmoothness supersmoothness(const KnotVectors& knots, std::span<const int> degrees, int k);

// Inclusive 0-based index range.
struct Band {
  int first = 0;
  int last = -1;

  int size() const noexcept { return last - first + 1; }
};

// Basis functions with a jump in the (r_i+1)-th derivative at breakpoint i
// (1 <= i <= m-1): 1-based mu(i)..sigma(i)+1, returned 0-based and clipped
// to [0, N).
Band jump_band(std::span<const int> degrees, std::span<const int> smoothness, int breakpoint);

struct ConstraintIndex {
  int breakpoint;  // i, 1..m-1
  int order;       // j, 0..r_i
};

// Column rho(i, j) holds the jump J[x_i, j] of every global Bernstein
// function; columns are ordered by breakpoint, then by order.
struct SmoothnessConstraints {
  Eigen::MatrixXd columns;  // M x O
  std::vector<ConstraintIndex> index;
  std::vector<int> degrees;
  std::vector<int> smoothness;
  std::vector<int> offsets;  // first global Bernstein index of each interval
  // Per interval, (p+1) x (p+1) tables of D^d b_j at lo / hi scaled by length^d.
  std::vector<Eigen::MatrixXd> start_tables;
  std::vector<Eigen::MatrixXd> end_tables;
  std::vector<double> lengths;
};

SmoothnessConstraints build_constraints(std::span<const BernsteinBasis> bases,
                                        std::span<const int> smoothness);

// One knot-removal matrix of size (n-1) x n: identity above the band, a
// two-diagonal band, shifted identity below. Only the band is stored.
struct KnotRemovalFactor {
  int size = 0;  // n
  Band band;
  ConstraintIndex constraint{-1, -1};
  std::vector<double> diagonal;  // F(k, k) for k = band.first .. band.last-1
  std::vector<double> upper;     // F(k, k+1) for the same rows

  double entry(int row, int col) const;
  // alpha_k = F(k, k), beta_k = F(k-1, k).
  double alpha(int k) const { return entry(k, k); }
  double beta(int k) const { return entry(k - 1, k); }
  Eigen::MatrixXd matrix() const;
  // F * x in O(n * cols).
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
};

// Nullspace of a single jump vector whose non-zero entries occupy `band`.
// Entries outside the band must be below 1e-10 ||a||; an in-band entry below
// 1e-12 ||a|| or a non-positive cascade coefficient raises
// BasisNonexistenceError.
KnotRemovalFactor nullspace_step(const Eigen::VectorXd& a, Band band);

// Same, with the band located by exact zero tests.
KnotRemovalFactor nullspace_step(const Eigen::VectorXd& a);

struct ExtractionMatrix {
  Eigen::MatrixXd C;  // N x M
  std::vector<KnotRemovalFactor> factors;
};

// C = F_O ... F_1 with each factor computed from the jumps of the current
// basis. Bands are predicted from the intermediate knot vectors. After each
// breakpoint the rows changed there are projected onto the functions with
// their support and end vanishing orders, which keeps round-off from
// compounding along long chains of maximally smooth breakpoints.
ExtractionMatrix extraction_operator(const SmoothnessConstraints& constraints);

}  // namespace gtb
