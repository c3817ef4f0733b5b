#include "gtb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>

#include "gtb/errors.hpp"
#include "gtb/quadrature.hpp"

namespace gtb {

namespace {

double barycentric(const Eigen::VectorXd& nodes, const Eigen::VectorXd& bary,
                   const Eigen::Ref<const Eigen::VectorXd>& values, double t) {
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index j = 0; j < nodes.size(); ++j) {
    const double diff = t - nodes(j);
    if (diff == 0.0) return values(j);
    const double c = bary(j) / diff;
    num += c * values(j);
    den += c;
  }
  return num / den;
}

}  // namespace

ChebyshevMesh::ChebyshevMesh(const Partition& partition,
                             const std::vector<int>& elements_per_interval, int points)
    : partition_(partition) {
  if (points < 2) throw ConfigError("Chebyshev mesh needs at least two points");
  const int m = partition.intervals();
  if (static_cast<int>(elements_per_interval.size()) != m) {
    throw ConfigError("one element count per interval expected");
  }
  for (int i = 0; i < m; ++i) {
    first_element_.push_back(static_cast<int>(lo_.size()));
    const int count = std::max(1, elements_per_interval[i]);
    const double a = partition.breakpoint(i);
    const double b = partition.breakpoint(i + 1);
    for (int e = 0; e < count; ++e) {
      lo_.push_back(e == 0 ? a : a + (b - a) * e / count);
      hi_.push_back(e + 1 == count ? b : a + (b - a) * (e + 1) / count);
      interval_.push_back(i);
    }
  }
  first_element_.push_back(static_cast<int>(lo_.size()));

  const int n = points;
  reference_.resize(n);
  bary_.resize(n);
  for (int j = 0; j < n; ++j) {
    reference_(j) = -std::cos(std::numbers::pi * j / (n - 1));
    bary_(j) = (j % 2 == 0 ? 1.0 : -1.0) * ((j == 0 || j == n - 1) ? 0.5 : 1.0);
  }
  reference_(0) = -1.0;
  reference_(n - 1) = 1.0;

  // cumulative_(j, l) = integral over [-1, t_j] of the l-th Lagrange function.
  const GaussRule& rule = gauss_legendre(n);
  cumulative_ = Eigen::MatrixXd::Zero(n, n);
  quadrature_ = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(n);
  for (int l = 0; l < n; ++l) {
    unit.setZero();
    unit(l) = 1.0;
    for (int j = 1; j < n; ++j) {
      const double half = 0.5 * (reference_(j) + 1.0);
      double sum = 0.0;
      for (int g = 0; g < n; ++g) {
        const double t = -1.0 + half * (rule.nodes[g] + 1.0);
        sum += rule.weights[g] * barycentric(reference_, bary_, unit, t);
      }
      cumulative_(j, l) = half * sum;
    }
    quadrature_(l) = cumulative_(n - 1, l);
  }
}

double ChebyshevMesh::node(int e, int j) const {
  return 0.5 * (lo_[e] + hi_[e]) + 0.5 * (hi_[e] - lo_[e]) * reference_(j);
}

int ChebyshevMesh::locate(double x) const {
  const int i = partition_.locate(x);
  const int first = first_element_[i];
  const int last = first_element_[i + 1] - 1;
  int e = first;
  while (e < last && x >= hi_[e]) ++e;
  return e;
}

double ChebyshevMesh::interpolate(const Eigen::MatrixXd& samples, double x) const {
  const int e = locate(x);
  const double t = (2.0 * x - lo_[e] - hi_[e]) / (hi_[e] - lo_[e]);
  return barycentric(reference_, bary_, samples.col(e), std::clamp(t, -1.0, 1.0));
}

Eigen::MatrixXd ChebyshevMesh::cumulative(const Eigen::MatrixXd& samples) const {
  Eigen::MatrixXd out(points(), elements());
  double offset = 0.0;
  for (int e = 0; e < elements(); ++e) {
    const double half = 0.5 * (hi_[e] - lo_[e]);
    out.col(e) = (offset + half * (cumulative_ * samples.col(e)).array()).matrix();
    offset = out(points() - 1, e);
  }
  return out;
}

double ChebyshevMesh::integral(const Eigen::MatrixXd& samples) const {
  double total = 0.0;
  for (int e = 0; e < elements(); ++e) {
    total += 0.5 * (hi_[e] - lo_[e]) * quadrature_.dot(samples.col(e));
  }
  return total;
}

int oracle_elements(const SectionSpace& section) {
  const double h = section.length();
  return std::visit(
      [h](const auto& f) -> int {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Polynomial>) {
          return 1;
        } else if constexpr (std::is_same_v<T, Trigonometric>) {
          return std::max(1, static_cast<int>(std::ceil(2.0 * f.omega * h)));
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return std::max(1, static_cast<int>(std::ceil(f.omega * h)));
        } else {
          return 8;
        }
      },
      section.family());
}

namespace {

std::vector<int> element_counts(const std::vector<SectionSpace>& sections) {
  std::vector<int> counts;
  for (const auto& s : sections) counts.push_back(oracle_elements(s));
  return counts;
}

GpbWeights weights_or_throw(const SectionSpace& section) {
  try {
    return gpb_weights(section);
  } catch (const InvalidFamilyError& e) {
    throw OracleUnsupportedError(std::string("no computable weights: ") + e.what());
  }
}

}  // namespace

RecurrenceOracle::RecurrenceOracle(const GTSplineSpace& space, RecurrenceKind kind, int points)
    : mesh_(space.partition(), element_counts(space.sections()), points), kind_(kind) {
  n_ = space.dimension();
  p_ = space.max_degree();
  degrees_ = space.degrees();
  breakpoints_ = space.partition().breakpoints();
  u_ = space.knots().u;
  v_ = space.knots().v;
  for (const auto& section : space.sections()) {
    if (section.degree() == 0) {
      has_weights_.push_back(false);
      weights_.push_back(GpbWeights(normalized_pair(
          SectionSpace(section.lo(), section.hi(), Polynomial{1}))));
    } else {
      has_weights_.push_back(true);
      weights_.push_back(weights_or_throw(section));
    }
  }

  const int np = mesh_.points();
  const int ne = mesh_.elements();
  levels_.assign(p_ + 1, std::vector<Eigen::MatrixXd>(n_ + 2));
  integrals_.assign(p_ + 1, std::vector<double>(n_ + 2, 0.0));

  for (int q = 0; q <= p_; ++q) {
    // Normalised antiderivatives of level q-1, indexed by 1-based k.
    std::vector<Eigen::MatrixXd> primitive(n_ + 2);
    if (q > 0) {
      for (int j = p_ - q + 1; j <= n_ + 1; ++j) {
        if (j > n_) {
          primitive[j] = Eigen::MatrixXd::Zero(np, ne);
          continue;
        }
        const Eigen::MatrixXd& prev = levels_[q - 1][j];
        if (prev.size() == 0 || (prev.array() == 0.0).all()) {
          // Zero integral: the antiderivative is the step 1{x >= u_j}.
          primitive[j] = Eigen::MatrixXd::Zero(np, ne);
          for (int e = 0; e < ne; ++e) {
            if (mesh_.lo(e) >= u_[j - 1]) primitive[j].col(e).setOnes();
          }
        } else {
          primitive[j] = mesh_.cumulative(prev) / integrals_[q - 1][j];
        }
      }
    }
    for (int k = p_ - q + 1; k <= n_; ++k) {
      Eigen::MatrixXd s = Eigen::MatrixXd::Zero(np, ne);
      for (int e = 0; e < ne; ++e) {
        const int i = mesh_.interval_of(e);
        const int pi = degrees_[i];
        const bool local = kind_ == RecurrenceKind::Local;
        if (q == 0 || (local && q == p_ - pi)) {
          if (q != p_ - pi || !in_support(k, q, i)) continue;
          for (int j = 0; j < np; ++j) s(j, e) = weight(i, pi, mesh_.node(e, j));
          continue;
        }
        if (local && (q < p_ - pi || !in_support(k, q, i))) continue;
        const int wj = p_ - q;
        if (wj > pi) continue;  // zero-padded global weight
        for (int j = 0; j < np; ++j) {
          s(j, e) = weight(i, wj, mesh_.node(e, j)) * (primitive[k](j, e) - primitive[k + 1](j, e));
        }
      }
      integrals_[q][k] = mesh_.integral(s);
      levels_[q][k] = std::move(s);
    }
  }
}

bool RecurrenceOracle::in_support(int k1, int level, int interval) const {
  const double start = u_[k1 - 1];
  const double end = v_[k1 - p_ + level - 1];
  return breakpoints_[interval] >= start && breakpoints_[interval + 1] <= end;
}

double RecurrenceOracle::weight(int interval, int j, double x) const {
  if (!has_weights_[interval]) return 1.0;
  return weights_[interval].weight(j, x);
}

double RecurrenceOracle::eval(int k, int level, double x) const {
  if (k < 0 || k >= n_) throw IndexError("basis index out of range");
  if (level < 0 || level > p_) throw OrderError("recurrence level out of range");
  if (!(x >= breakpoints_.front() && x <= breakpoints_.back())) {
    throw DomainError("x outside the spline domain");
  }
  const Eigen::MatrixXd& s = levels_[level][k + 1];
  if (s.size() == 0) return 0.0;
  return mesh_.interpolate(s, x);
}

double RecurrenceOracle::eval(int k, double x) const { return eval(k, p_, x); }

Eigen::VectorXd RecurrenceOracle::eval_all(double x) const {
  Eigen::VectorXd out(n_);
  for (int k = 0; k < n_; ++k) out(k) = eval(k, x);
  return out;
}

double RecurrenceOracle::integral(int k, int level) const {
  if (k < 0 || k >= n_ || level < 0 || level > p_) throw IndexError("index out of range");
  return integrals_[level][k + 1];
}

WeightAdmissibility check_weight_admissibility(const GTSplineSpace& space, double tol) {
  auto derivatives = [&space](int interval, int j, double x, int order) -> Eigen::VectorXd {
    const SectionSpace& section = space.sections()[interval];
    if (section.degree() == 0) {
      Eigen::VectorXd unit = Eigen::VectorXd::Zero(order + 1);
      unit(0) = 1.0;
      return unit;
    }
    return weights_or_throw(section).weight_derivatives(j, x, order);
  };
  WeightAdmissibility report;
  for (int i = 1; i < space.intervals(); ++i) {
    const double x = space.partition().breakpoint(i);
    const int r = space.smoothness()[i];
    for (int j = 0; j <= r; ++j) {
      const Eigen::VectorXd left = derivatives(i - 1, j, x, r - j);
      const Eigen::VectorXd right = derivatives(i, j, x, r - j);
      for (int l = 0; l <= r - j; ++l) {
        const double gap = std::abs(left(l) - right(l));
        const double scale = std::max({1.0, std::abs(left(l)), std::abs(right(l))});
        if (gap > tol * scale && gap > report.mismatch) {
          report = {false, i, j, l, gap};
        }
      }
    }
  }
  return report;
}

double local_recurrence_eval(const GTSplineSpace& space, int k, double x) {
  return RecurrenceOracle(space, RecurrenceKind::Local).eval(k, x);
}

double global_recurrence_eval(const GTSplineSpace& space, int k, double x) {
  return RecurrenceOracle(space, RecurrenceKind::Global).eval(k, x);
}

BernsteinRecurrence::BernsteinRecurrence(const SectionSpace& section, int points)
    : pair_([&section] {
        if (section.degree() < 1) {
          throw OracleUnsupportedError("Bernstein recurrence needs degree >= 1");
        }
        weights_or_throw(section);
        return normalized_pair(section);
      }()),
      mesh_(Partition({section.lo(), section.hi()}), {oracle_elements(section)}, points),
      p_(section.degree()) {
  const int np = mesh_.points();
  const int ne = mesh_.elements();
  levels_.resize(p_ + 1);
  integrals_.resize(p_ + 1);
  Eigen::MatrixXd u(np, ne), v(np, ne);
  for (int e = 0; e < ne; ++e) {
    for (int j = 0; j < np; ++j) {
      u(j, e) = pair_.U(mesh_.node(e, j));
      v(j, e) = pair_.V(mesh_.node(e, j));
    }
  }
  levels_[1] = {u, v};
  for (int q = 1; q <= p_; ++q) {
    if (q > 1) {
      std::vector<Eigen::MatrixXd> primitive;
      for (int j = 0; j < q; ++j) {
        primitive.push_back(mesh_.cumulative(levels_[q - 1][j]) / integrals_[q - 1][j]);
      }
      levels_[q].resize(q + 1);
      levels_[q][0] = (1.0 - primitive[0].array()).matrix();
      for (int j = 1; j < q; ++j) levels_[q][j] = primitive[j - 1] - primitive[j];
      levels_[q][q] = primitive[q - 1];
    }
    for (const auto& s : levels_[q]) integrals_[q].push_back(mesh_.integral(s));
  }
}

double BernsteinRecurrence::eval(int j, int level, double x) const {
  if (level < 1 || level > p_) throw OrderError("recurrence level out of range");
  if (j < 0 || j > level) throw IndexError("Bernstein index out of range");
  const SectionSpace& s = pair_.section();
  if (!(x >= s.lo() && x <= s.hi())) throw DomainError("x outside the section");
  if (level == 1) return j == 0 ? pair_.U(x) : pair_.V(x);
  return mesh_.interpolate(levels_[level][j], x);
}

double BernsteinRecurrence::eval(int j, double x) const { return eval(j, p_, x); }

Eigen::VectorXd BernsteinRecurrence::eval_all(double x) const {
  Eigen::VectorXd out(p_ + 1);
  for (int j = 0; j <= p_; ++j) out(j) = eval(j, x);
  return out;
}

double BernsteinRecurrence::integral(int j, int level) const {
  if (level < 1 || level > p_ || j < 0 || j > level) throw IndexError("index out of range");
  return integrals_[level][j];
}

BernsteinRecurrence bernstein_recurrence(const SectionSpace& section) {
  return BernsteinRecurrence(section);
}

std::vector<double> open_knot_sequence(const Partition& partition, int degree,
                                       std::span<const int> smoothness) {
  const int m = partition.intervals();
  if (static_cast<int>(smoothness.size()) != m + 1) {
    throw ConfigError("smoothness needs m+1 entries");
  }
  std::vector<double> t(degree + 1, partition.left());
  for (int i = 1; i < m; ++i) {
    if (smoothness[i] < -1 || smoothness[i] > degree) throw ConfigError("smoothness out of range");
    t.insert(t.end(), degree - smoothness[i], partition.breakpoint(i));
  }
  t.insert(t.end(), degree + 1, partition.right());
  return t;
}

Eigen::MatrixXd cox_de_boor(const std::vector<double>& knots, int degree, double x,
                            int max_order) {
  const int count = static_cast<int>(knots.size()) - degree - 1;
  if (degree < 0 || count < 1) throw ConfigError("knot sequence too short");
  if (max_order < 0) throw OrderError("negative derivative order");
  const double a = knots[degree];
  const double b = knots[count];
  if (!(x >= a && x <= b)) throw DomainError("x outside the knot span");

  // Span with t_s <= x < t_{s+1}; the last non-empty span at x = b.
  int span = degree;
  if (x >= b) {
    span = count - 1;
    while (knots[span] == knots[span + 1]) --span;
  } else {
    while (!(x >= knots[span] && x < knots[span + 1])) ++span;
  }

  const int total = static_cast<int>(knots.size()) - 1;
  // ders[d](q, k) = D^d B_{k,q}(x)
  std::vector<Eigen::MatrixXd> ders(max_order + 1, Eigen::MatrixXd::Zero(degree + 1, total));
  ders[0](0, span) = 1.0;
  auto ratio = [](double num, double den) { return den == 0.0 ? 0.0 : num / den; };
  for (int q = 1; q <= degree; ++q) {
    for (int k = 0; k + q < total; ++k) {
      const double left = knots[k + q] - knots[k];
      const double right = knots[k + q + 1] - knots[k + 1];
      ders[0](q, k) = ratio(x - knots[k], left) * ders[0](q - 1, k) +
                      ratio(knots[k + q + 1] - x, right) * ders[0](q - 1, k + 1);
      for (int d = 1; d <= max_order; ++d) {
        ders[d](q, k) = q * (ratio(ders[d - 1](q - 1, k), left) -
                             ratio(ders[d - 1](q - 1, k + 1), right));
      }
    }
  }
  Eigen::MatrixXd out(count, max_order + 1);
  for (int d = 0; d <= max_order; ++d) out.col(d) = ders[d].row(degree).head(count).transpose();
  return out;
}

}  // namespace gtb
