#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ref {

std::vector<double> open_knots(const std::vector<double>& breakpoints, int degree,
                               const std::vector<int>& interior_smoothness) {
  std::vector<double> t(degree + 1, breakpoints.front());
  for (std::size_t i = 1; i + 1 < breakpoints.size(); ++i) {
    for (int c = 0; c < degree - interior_smoothness[i - 1]; ++c) t.push_back(breakpoints[i]);
  }
  t.insert(t.end(), degree + 1, breakpoints.back());
  return t;
}

namespace {

int find_span(const std::vector<double>& t, int degree, double x) {
  const int n = static_cast<int>(t.size()) - degree - 1;
  if (x >= t[n]) {
    int s = n - 1;
    while (t[s] == t[s + 1]) --s;
    return s;
  }
  int s = degree;
  while (!(t[s] <= x && x < t[s + 1])) ++s;
  return s;
}

}  // namespace

Eigen::MatrixXd bspline_derivatives(const std::vector<double>& t, int p, double x, int order) {
  const int n = static_cast<int>(t.size()) - p - 1;
  const int s = find_span(t, p, x);
  // ndu: basis values (upper triangle) and knot differences (lower).
  Eigen::MatrixXd ndu(p + 1, p + 1);
  std::vector<double> left(p + 1), right(p + 1);
  ndu(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - t[s + 1 - j];
    right[j] = t[s + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right[r + 1] + left[j - r];
      const double temp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu(j, j) = saved;
  }
  Eigen::MatrixXd ders = Eigen::MatrixXd::Zero(p + 1, order + 1);
  for (int j = 0; j <= p; ++j) ders(j, 0) = ndu(j, p);
  Eigen::MatrixXd a(2, p + 1);
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a(0, 0) = 1.0;
    for (int k = 1; k <= std::min(order, p); ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
        d = a(s2, 0) * ndu(rk, pk);
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = r - 1 <= pk ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
        d += a(s2, j) * ndu(rk + j, pk);
      }
      if (r <= pk) {
        a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
        d += a(s2, k) * ndu(r, pk);
      }
      ders(r, k) = d;
      std::swap(s1, s2);
    }
  }
  int factor = p;
  for (int k = 1; k <= std::min(order, p); ++k) {
    ders.col(k) *= factor;
    factor *= p - k;
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, order + 1);
  for (int j = 0; j <= p; ++j) out.row(s - p + j) = ders.row(j);
  return out;
}

Eigen::MatrixXd boehm_matrix(const std::vector<double>& t, int p, double x) {
  const int n = static_cast<int>(t.size()) - p - 1;
  const int k = find_span(t, p, x);
  const int mult = static_cast<int>(std::count(t.begin(), t.end(), x));
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n + 1, n);
  for (int i = 0; i <= n; ++i) {
    if (i <= k - p) {
      q(i, i) = 1.0;
    } else if (i >= k - mult + 1) {
      q(i, i - 1) = 1.0;
    } else {
      const double alpha = (x - t[i]) / (t[i + p] - t[i]);
      q(i, i) = alpha;
      q(i, i - 1) = 1.0 - alpha;
    }
  }
  return q;
}

namespace {

// D^d of binom(q, j) t^j (1-t)^(q-j) with respect to t.
double bernstein_poly(int q, int j, double t, int d) {
  if (j < 0 || j > q) return 0.0;
  if (d == 0) {
    return std::tgamma(q + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(q - j + 1.0)) *
           std::pow(t, j) * std::pow(1.0 - t, q - j);
  }
  if (q == 0) return 0.0;
  return q * (bernstein_poly(q - 1, j - 1, t, d - 1) - bernstein_poly(q - 1, j, t, d - 1));
}

}  // namespace

Eigen::MatrixXd polynomial_bernstein(int q, double lo, double hi, double x) {
  const double h = hi - lo;
  const double t = (x - lo) / h;
  Eigen::MatrixXd out(q + 1, 3);
  for (int j = 0; j <= q; ++j) {
    for (int d = 0; d < 3; ++d) out(j, d) = bernstein_poly(q, j, t, d) / std::pow(h, d);
  }
  return out;
}

namespace {

// Trigonometric or hyperbolic closed forms with a = w (hi - x), b = w (x - lo).
Eigen::MatrixXd kernel_bernstein(int q, double w, double lo, double hi, double x, bool trig) {
  auto c = [trig](double z) { return trig ? std::cos(z) : std::cosh(z); };
  auto s = [trig](double z) { return trig ? std::sin(z) : std::sinh(z); };
  // s'' = sc * s
  const double sc = trig ? -1.0 : 1.0;
  const double a = w * (hi - x);
  const double b = w * (x - lo);
  const double wh = w * (hi - lo);
  Eigen::MatrixXd out(q + 1, 3);
  if (q == 1) {
    const double den = s(wh);
    out.row(0) << s(a) / den, -w * c(a) / den, sc * w * w * s(a) / den;
    out.row(1) << s(b) / den, w * c(b) / den, sc * w * w * s(b) / den;
    return out;
  }
  const double den = 1.0 - c(wh);
  if (trig) {
    out.row(0) << (1.0 - c(a)) / den, -w * s(a) / den, w * w * c(a) / den;
    out.row(2) << (1.0 - c(b)) / den, w * s(b) / den, w * w * c(b) / den;
    out.row(1) << (c(a) + c(b) - c(wh) - 1.0) / den, (w * s(a) - w * s(b)) / den,
        (-w * w * c(a) - w * w * c(b)) / den;
  } else {
    out.row(0) << (1.0 - c(a)) / den, w * s(a) / den, -w * w * c(a) / den;
    out.row(2) << (1.0 - c(b)) / den, -w * s(b) / den, -w * w * c(b) / den;
    out.row(1) << (c(a) + c(b) - c(wh) - 1.0) / den, (-w * s(a) + w * s(b)) / den,
        (w * w * c(a) + w * w * c(b)) / den;
  }
  return out;
}

}  // namespace

Eigen::MatrixXd trig_bernstein(int q, double omega, double lo, double hi, double x) {
  return kernel_bernstein(q, omega, lo, hi, x, true);
}

Eigen::MatrixXd exp_bernstein(int q, double omega, double lo, double hi, double x) {
  return kernel_bernstein(q, omega, lo, hi, x, false);
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

gtb::SpaceDefinition random_polynomial_space(std::mt19937& rng, int degree, int intervals) {
  std::uniform_real_distribution<double> gap(0.2, 2.0);
  std::uniform_int_distribution<int> smooth(-1, degree - 1);
  gtb::SpaceDefinition def;
  def.breakpoints.push_back(std::uniform_real_distribution<double>(-1.0, 1.0)(rng));
  for (int i = 0; i < intervals; ++i) {
    def.breakpoints.push_back(def.breakpoints.back() + gap(rng));
    def.sections.push_back(gtb::Polynomial{degree});
    if (i > 0) def.smoothness.push_back(smooth(rng));
  }
  return def;
}

gtb::SpaceDefinition random_mixed_space(std::mt19937& rng, int max_intervals) {
  std::uniform_int_distribution<int> count(1, max_intervals);
  std::uniform_real_distribution<double> gap(0.3, 2.0);
  std::uniform_int_distribution<int> family(0, 2);
  std::uniform_int_distribution<int> degree(2, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  gtb::SpaceDefinition def;
  const int m = count(rng);
  def.breakpoints.push_back(0.0);
  for (int i = 0; i < m; ++i) {
    const double h = gap(rng);
    def.breakpoints.push_back(def.breakpoints.back() + h);
    const int p = degree(rng);
    switch (family(rng)) {
      case 0:
        def.sections.push_back(gtb::Polynomial{p});
        break;
      case 1:
        def.sections.push_back(gtb::Trigonometric{p, (0.1 + 0.85 * unit(rng)) * std::numbers::pi / h});
        break;
      default:
        def.sections.push_back(gtb::Exponential{p, 0.2 + 6.0 * unit(rng)});
        break;
    }
  }
  for (int i = 1; i < m; ++i) {
    int bound = std::min(gtb::degree_of(def.sections[i - 1]), gtb::degree_of(def.sections[i]));
    if (!gtb::same_space(def.sections[i - 1], def.sections[i])) --bound;
    def.smoothness.push_back(std::uniform_int_distribution<int>(-1, bound)(rng));
  }
  return def;
}

std::vector<double> uniform_samples(double a, double b, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = i + 1 == n ? b : a + (b - a) * i / (n - 1);
  return x;
}

}  // namespace ref
