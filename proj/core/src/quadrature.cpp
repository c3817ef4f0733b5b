#include "gtb/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace gtb {

namespace {

GaussRule compute_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on the three-term recurrence.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

void panel(const std::function<void(double, Eigen::Ref<Eigen::VectorXd>)>& f,
           const GaussRule& rule, double a, double b, Eigen::Ref<Eigen::VectorXd> out,
           Eigen::Ref<Eigen::VectorXd> scratch) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  out.setZero();
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    f(mid + half * rule.nodes[q], scratch);
    out += (half * rule.weights[q]) * scratch;
  }
}

void refine(const std::function<void(double, Eigen::Ref<Eigen::VectorXd>)>& f,
            const GaussRule& rule, double a, double b, const Eigen::VectorXd& whole,
            double abs_tol, int depth, Eigen::VectorXd& acc, Eigen::VectorXd& scratch) {
  const double mid = 0.5 * (a + b);
  Eigen::VectorXd left(whole.size());
  Eigen::VectorXd right(whole.size());
  panel(f, rule, a, mid, left, scratch);
  panel(f, rule, mid, b, right, scratch);
  const Eigen::VectorXd both = left + right;
  if (depth <= 0 || (both - whole).cwiseAbs().maxCoeff() <= abs_tol) {
    acc += both;
    return;
  }
  refine(f, rule, a, mid, left, abs_tol, depth - 1, acc, scratch);
  refine(f, rule, mid, b, right, abs_tol, depth - 1, acc, scratch);
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

Eigen::VectorXd integrate_adaptive(
    const std::function<void(double, Eigen::Ref<Eigen::VectorXd>)>& f, Eigen::Index size,
    double a, double b, int n, double rel_tol, int max_depth) {
  const GaussRule& rule = gauss_legendre(n);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(size);
  Eigen::VectorXd scratch(size);
  Eigen::VectorXd whole(size);
  panel(f, rule, a, b, whole, scratch);
  // Panels are judged against the magnitude of the whole integral, never
  // below a few ulps of it, so rounding noise cannot force refinement.
  const double floor = 16.0 * std::numeric_limits<double>::epsilon();
  const double abs_tol =
      std::max(rel_tol, floor) * std::max(whole.cwiseAbs().maxCoeff(), 1e-300);
  refine(f, rule, a, b, whole, abs_tol, max_depth, acc, scratch);
  return acc;
}

}  // namespace gtb
