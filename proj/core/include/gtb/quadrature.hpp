#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace gtb {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre nodes and weights (Newton iteration on P_n).
// Rules are cached per n; the returned reference stays valid.
const GaussRule& gauss_legendre(int n);

// Integral over [a, b] of a vector-valued integrand using the n-point rule on
// adaptively bisected panels. A panel is accepted when the one-panel and
// two-half-panel estimates agree to rel_tol times the magnitude of the whole
// integral (max norm, at least 16 ulps) or max_depth is hit.
// The integrand writes its value at x into the supplied vector.
Eigen::VectorXd integrate_adaptive(
    const std::function<void(double, Eigen::Ref<Eigen::VectorXd>)>& f, Eigen::Index size,
    double a, double b, int n, double rel_tol = 1e-15, int max_depth = 30);

}  // namespace gtb
