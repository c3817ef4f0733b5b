#include "gtb/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gtb/errors.hpp"

namespace gtb {

namespace {

int interval_degree(std::span<const int> degrees, int l) {  // 1-based interval
  return degrees[static_cast<std::size_t>(l - 1)];
}

int sigma_at(std::span<const int> degrees, std::span<const int> smoothness, int i) {
  int s = 0;
  for (int j = 0; j < i; ++j) s += interval_degree(degrees, j + 1) - smoothness[j];
  return s;
}

int mu_at(std::span<const int> degrees, std::span<const int> smoothness, int i) {
  int s = 0;
  for (int j = 1; j <= i; ++j) s += interval_degree(degrees, j) - smoothness[j];
  return s;
}

}  // namespace

void validate_smoothness(const Partition& partition, std::span<const int> degrees,
                         std::span<const int> smoothness) {
  const int m = partition.intervals();
  if (static_cast<int>(degrees.size()) != m) {
    throw ConfigError("expected " + std::to_string(m) + " degrees, got " +
                      std::to_string(degrees.size()));
  }
  if (static_cast<int>(smoothness.size()) != m + 1) {
    throw ConfigError("expected " + std::to_string(m + 1) + " smoothness entries, got " +
                      std::to_string(smoothness.size()));
  }
  for (int i = 0; i < m; ++i) {
    if (degrees[i] < 0) throw ConfigError("negative degree on interval " + std::to_string(i + 1));
  }
  if (smoothness.front() != -1 || smoothness.back() != -1) {
    throw ConfigError("end smoothness r_0 and r_m must be -1");
  }
  for (int i = 1; i < m; ++i) {
    const int bound = std::min(degrees[i - 1], degrees[i]);
    if (smoothness[i] < -1 || smoothness[i] > bound) {
      std::ostringstream os;
      os.precision(17);
      os << "smoothness r_" << i << " = " << smoothness[i] << " at breakpoint x_" << i << " = "
         << partition.breakpoint(i) << " outside [-1, min(p_" << i << ", p_" << i + 1
         << ") = " << bound << "]";
      throw ConfigError(os.str());
    }
  }
}

KnotVectors build_knot_vectors(const Partition& partition, std::span<const int> degrees,
                               std::span<const int> smoothness) {
  validate_smoothness(partition, degrees, smoothness);
  const int m = partition.intervals();
  KnotVectors kv;
  for (int i = 0; i < m; ++i) {
    const int copies = degrees[i] - smoothness[i];  // p_{i+1} - r_i
    for (int c = 0; c < copies; ++c) {
      kv.u.push_back(partition.breakpoint(i));
      kv.u_breakpoint.push_back(i);
    }
  }
  for (int i = 1; i <= m; ++i) {
    const int copies = degrees[i - 1] - smoothness[i];  // p_i - r_i
    for (int c = 0; c < copies; ++c) {
      kv.v.push_back(partition.breakpoint(i));
      kv.v_breakpoint.push_back(i);
    }
  }
  kv.sigma.resize(m + 1);
  kv.mu.resize(m + 1);
  for (int i = 0; i <= m; ++i) {
    kv.sigma[i] = sigma_at(degrees, smoothness, i);
    kv.mu[i] = mu_at(degrees, smoothness, i);
  }
  if (kv.u.size() != kv.v.size()) {
    throw ConfigError("knot vectors u and v differ in length");
  }
  return kv;
}

Supersmoothness supersmoothness(const KnotVectors& knots, std::span<const int> degrees, int k) {
  const int n = knots.size();
  if (k < 0 || k >= n) throw IndexError("basis index " + std::to_string(k) + " out of range");
  int ahead = 0;
  while (k + ahead + 1 < n && knots.u[k + ahead + 1] == knots.u[k]) ++ahead;
  int behind = 0;
  while (k - behind - 1 >= 0 && knots.v[k - behind - 1] == knots.v[k]) ++behind;
  const int i = knots.u_breakpoint[k];
  const int j = knots.v_breakpoint[k];
  // u_k = x_i uses p_{i+1}; v_k = x_j uses p_j.
  return {interval_degree(degrees, i + 1) - 1 - ahead, interval_degree(degrees, j) - 1 - behind};
}

Band jump_band(std::span<const int> degrees, std::span<const int> smoothness, int breakpoint) {
  const int m = static_cast<int>(degrees.size());
  if (breakpoint < 1 || breakpoint > m - 1) {
    throw IndexError("jump band needs an interior breakpoint");
  }
  // With r_i = min(p_i, p_{i+1}) the band runs past an end of the index range.
  const int n = sigma_at(degrees, smoothness, m);
  return {std::max(0, mu_at(degrees, smoothness, breakpoint) - 1),
          std::min(n - 1, sigma_at(degrees, smoothness, breakpoint))};
}

SmoothnessConstraints build_constraints(std::span<const BernsteinBasis> bases,
                                        std::span<const int> smoothness) {
  const int m = static_cast<int>(bases.size());
  if (static_cast<int>(smoothness.size()) != m + 1) {
    throw ConfigError("smoothness needs m+1 entries");
  }
  SmoothnessConstraints out;
  out.smoothness.assign(smoothness.begin(), smoothness.end());
  out.offsets.resize(m + 1);
  int total = 0;
  for (int i = 0; i < m; ++i) {
    out.degrees.push_back(bases[i].degree());
    out.offsets[i] = total;
    total += bases[i].degree() + 1;
  }
  out.offsets[m] = total;
  for (int i = 0; i < m; ++i) {
    const double h = bases[i].section().length();
    Eigen::MatrixXd start = bases[i].left_table();
    Eigen::MatrixXd end = bases[i].right_table();
    double scale = 1.0;
    for (int d = 0; d < start.cols(); ++d, scale *= h) {
      start.col(d) *= scale;
      end.col(d) *= scale;
    }
    out.start_tables.push_back(std::move(start));
    out.end_tables.push_back(std::move(end));
    out.lengths.push_back(h);
  }
  int count = 0;
  for (int i = 1; i < m; ++i) count += smoothness[i] + 1;
  out.columns = Eigen::MatrixXd::Zero(total, count);
  int rho = 0;
  for (int i = 1; i < m; ++i) {
    const BernsteinBasis& left = bases[i - 1];
    const BernsteinBasis& right = bases[i];
    for (int j = 0; j <= smoothness[i]; ++j, ++rho) {
      const EndpointJumpTable lt = endpoint_jump_table(left, j);
      const EndpointJumpTable rt = endpoint_jump_table(right, j);
      out.columns.col(rho).segment(out.offsets[i - 1], left.degree() + 1) = lt.right;
      out.columns.col(rho).segment(out.offsets[i], right.degree() + 1) = -rt.left;
      out.index.push_back({i, j});
    }
  }
  return out;
}

KnotRemovalFactor nullspace_step(const Eigen::VectorXd& a, Band band) {
  const int n = static_cast<int>(a.size());
  if (band.first < 0 || band.last >= n || band.size() < 2) {
    throw IndexError("nullspace_step: band [" + std::to_string(band.first) + ", " +
                     std::to_string(band.last) + "] is not a valid band of length >= 2");
  }
  const double norm = a.cwiseAbs().maxCoeff();
  if (!(norm > 0.0)) throw BasisNonexistenceError("nullspace_step: zero jump vector");
  for (int k = 0; k < n; ++k) {
    if ((k < band.first || k > band.last) && std::abs(a(k)) > 1e-10 * norm) {
      throw BasisNonexistenceError("jump at index " + std::to_string(k) +
                                   " outside the predicted band");
    }
  }

  KnotRemovalFactor f;
  f.size = n;
  f.band = band;

  // The cascade alpha_first = 1, beta_{k+1} = -alpha_k a_k / a_{k+1},
  // alpha_{k+1} = 1 - beta_{k+1} has the closed form alpha_k = S_k / a_k,
  // beta_{k+1} = -S_k / a_{k+1} with S_k the partial sum a_first + ... + a_k.
  // When the band sums to zero (jumps of a partition of unity) S_k also equals
  // minus the tail sum, and the better conditioned of the two is used.
  double band_abs = 0.0;
  double band_sum = 0.0;
  for (int k = band.first; k <= band.last; ++k) {
    if (!(std::abs(a(k)) > 1e-12 * norm)) {
      throw BasisNonexistenceError("vanishing jump at band index " + std::to_string(k));
    }
    band_abs += std::abs(a(k));
    band_sum += a(k);
  }
  const bool balanced = std::abs(band_sum) <= 1e-10 * band_abs;
  const int len = band.size();
  std::vector<double> head(len), tail(len), head_abs(len), tail_abs(len);
  double sum = 0.0, mag = 0.0;
  for (int t = 0; t < len; ++t) {
    sum += a(band.first + t);
    mag += std::abs(a(band.first + t));
    head[t] = sum;
    head_abs[t] = mag;
  }
  sum = 0.0;
  mag = 0.0;
  for (int t = len - 1; t >= 0; --t) {
    tail[t] = sum;  // a_{k+1} + ... + a_last
    tail_abs[t] = mag;
    sum += a(band.first + t);
    mag += std::abs(a(band.first + t));
  }
  for (int t = 0; t + 1 < len; ++t) {
    const int k = band.first + t;
    const double s = (balanced && tail_abs[t] < head_abs[t]) ? -tail[t] : head[t];
    const double alpha = t == 0 ? 1.0 : s / a(k);
    const double beta = (balanced && t + 2 == len) ? 1.0 : -s / a(k + 1);
    if (!(alpha > 0.0) || !(beta > 0.0)) {
      throw BasisNonexistenceError("non-positive knot insertion coefficient at index " +
                                   std::to_string(!(alpha > 0.0) ? k : k + 1));
    }
    f.diagonal.push_back(alpha);
    f.upper.push_back(beta);
  }
  return f;
}

KnotRemovalFactor nullspace_step(const Eigen::VectorXd& a) {
  const int n = static_cast<int>(a.size());
  int first = 0;
  while (first < n && a(first) == 0.0) ++first;
  if (first == n) throw BasisNonexistenceError("nullspace_step: zero jump vector");
  int last = first;
  while (last + 1 < n && a(last + 1) != 0.0) ++last;
  return nullspace_step(a, Band{first, last});
}

double KnotRemovalFactor::entry(int row, int col) const {
  if (row < 0 || row >= size - 1 || col < 0 || col >= size) {
    throw IndexError("factor entry (" + std::to_string(row) + ", " + std::to_string(col) +
                     ") out of range");
  }
  if (row < band.first) return col == row ? 1.0 : 0.0;
  if (row >= band.last) return col == row + 1 ? 1.0 : 0.0;
  const auto t = static_cast<std::size_t>(row - band.first);
  if (col == row) return diagonal[t];
  if (col == row + 1) return upper[t];
  return 0.0;
}

Eigen::MatrixXd KnotRemovalFactor::matrix() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(size - 1, size);
  for (int k = 0; k < band.first; ++k) out(k, k) = 1.0;
  for (int k = band.last; k < size - 1; ++k) out(k, k + 1) = 1.0;
  for (int k = band.first; k < band.last; ++k) {
    out(k, k) = diagonal[static_cast<std::size_t>(k - band.first)];
    out(k, k + 1) = upper[static_cast<std::size_t>(k - band.first)];
  }
  return out;
}

Eigen::MatrixXd KnotRemovalFactor::apply(const Eigen::MatrixXd& x) const {
  if (x.rows() != size) throw IndexError("factor applied to a matrix of the wrong height");
  Eigen::MatrixXd out(size - 1, x.cols());
  out.topRows(band.first) = x.topRows(band.first);
  for (int k = band.first; k < band.last; ++k) {
    const auto t = static_cast<std::size_t>(k - band.first);
    out.row(k) = diagonal[t] * x.row(k) + upper[t] * x.row(k + 1);
  }
  out.bottomRows(size - 1 - band.last) = x.bottomRows(size - 1 - band.last);
  return out;
}

namespace {

// A row of C stored over its column range [begin, begin + values.size()).
struct SparseRow {
  int begin = 0;
  Eigen::VectorXd values;

  int end() const { return begin + static_cast<int>(values.size()); }
};

SparseRow combine(double alpha, const SparseRow& a, double beta, const SparseRow& b) {
  SparseRow out;
  out.begin = std::min(a.begin, b.begin);
  out.values = Eigen::VectorXd::Zero(std::max(a.end(), b.end()) - out.begin);
  out.values.segment(a.begin - out.begin, a.values.size()) += alpha * a.values;
  out.values.segment(b.begin - out.begin, b.values.size()) += beta * b.values;
  return out;
}

double dot(const SparseRow& row, const Eigen::VectorXd& column, int begin) {
  const int lo = std::max(row.begin, begin);
  const int hi = std::min(row.end(), begin + static_cast<int>(column.size()));
  if (lo >= hi) return 0.0;
  return row.values.segment(lo - row.begin, hi - lo).dot(column.segment(lo - begin, hi - lo));
}

// Projects row k onto the span of functions sharing its support and its
// vanishing orders at both support ends.
bool polish_row(const SmoothnessConstraints& constraints, const std::vector<int>& first_rho,
                const std::vector<int>& current, const KnotVectors& knots, int k,
                SparseRow& row) {
  const int a = knots.u_breakpoint[static_cast<std::size_t>(k)];
  const int b = knots.v_breakpoint[static_cast<std::size_t>(k)];
  // The support descriptors are exact only where r_l < min(p_l, p_{l+1}).
  const int m = static_cast<int>(constraints.degrees.size());
  for (int l = std::max(a, 1); l <= std::min(b, m - 1); ++l) {
    const auto ul = static_cast<std::size_t>(l);
    if (current[ul] >= std::min(constraints.degrees[ul - 1], constraints.degrees[ul])) return false;
  }
  const Supersmoothness ends = supersmoothness(knots, constraints.degrees, k);
  const int begin = constraints.offsets[static_cast<std::size_t>(a)];
  const int width = constraints.offsets[static_cast<std::size_t>(b)] - begin;
  int count = ends.start + 1 + ends.end + 1;
  for (int l = a + 1; l < b; ++l) count += current[static_cast<std::size_t>(l)] + 1;
  if (count == 0) return false;

  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(count, width);
  int r = 0;
  const auto& start = constraints.start_tables[static_cast<std::size_t>(a)];
  for (int d = 0; d <= ends.start; ++d, ++r) {
    system.row(r).head(start.rows()) = start.col(d).transpose();
  }
  const auto& end = constraints.end_tables[static_cast<std::size_t>(b - 1)];
  for (int d = 0; d <= ends.end; ++d, ++r) {
    system.row(r).tail(end.rows()) = end.col(d).transpose();
  }
  for (int l = a + 1; l < b; ++l) {
    const auto ul = static_cast<std::size_t>(l);
    const int lo = constraints.offsets[ul - 1];
    const int hi = constraints.offsets[ul + 1];
    const double h = std::min(constraints.lengths[ul - 1], constraints.lengths[ul]);
    double scale = 1.0;
    for (int j = 0; j <= current[ul]; ++j, ++r, scale *= h) {
      system.row(r).segment(lo - begin, hi - lo) =
          scale * constraints.columns.col(first_rho[ul] + j).segment(lo, hi - lo).transpose();
    }
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-8 * top) ++rank;
  const int nullity = width - rank;
  if (nullity <= 0) return false;

  Eigen::VectorXd local = Eigen::VectorXd::Zero(width);
  const int lo = std::max(row.begin, begin);
  const int hi = std::min(row.end(), begin + width);
  if (lo < hi) local.segment(lo - begin, hi - lo) = row.values.segment(lo - row.begin, hi - lo);
  const auto basis = svd.matrixV().rightCols(nullity);
  row.begin = begin;
  row.values = basis * (basis.transpose() * local);
  // Vanishing to order r at an end zeroes the first / last r+1 coefficients.
  row.values.head(ends.start + 1).setZero();
  row.values.tail(ends.end + 1).setZero();
  return true;
}

// Rescales the given rows so that all rows sum to one on the columns they
// cover; the remaining rows are held fixed.
void restore_unity(std::vector<SparseRow>& rows, const std::vector<int>& chosen) {
  if (chosen.empty()) return;
  int lo = rows[static_cast<std::size_t>(chosen.front())].begin;
  int hi = rows[static_cast<std::size_t>(chosen.front())].end();
  for (int k : chosen) {
    lo = std::min(lo, rows[static_cast<std::size_t>(k)].begin);
    hi = std::max(hi, rows[static_cast<std::size_t>(k)].end());
  }
  const int width = hi - lo;
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(width, static_cast<Eigen::Index>(chosen.size()));
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(width);
  std::size_t next = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const SparseRow& row = rows[k];
    const int a = std::max(lo, row.begin);
    const int b = std::min(hi, row.end());
    if (a >= b) continue;
    const auto piece = row.values.segment(a - row.begin, b - a);
    if (next < chosen.size() && chosen[next] == static_cast<int>(k)) {
      system.col(static_cast<Eigen::Index>(next++)).segment(a - lo, b - a) = piece;
    } else {
      rhs.segment(a - lo, b - a) -= piece;
    }
  }
  const Eigen::VectorXd scales = system.colPivHouseholderQr().solve(rhs);
  for (std::size_t t = 0; t < chosen.size(); ++t) {
    rows[static_cast<std::size_t>(chosen[t])].values *= scales(static_cast<Eigen::Index>(t));
  }
}

}  // namespace

ExtractionMatrix extraction_operator(const SmoothnessConstraints& constraints) {
  const int total = static_cast<int>(constraints.columns.rows());
  const int count = static_cast<int>(constraints.columns.cols());
  const int m = static_cast<int>(constraints.degrees.size());
  ExtractionMatrix out;

  std::vector<SparseRow> rows(static_cast<std::size_t>(total));
  for (int k = 0; k < total; ++k) rows[static_cast<std::size_t>(k)] = {k, Eigen::VectorXd::Ones(1)};
  std::vector<int> first_rho(static_cast<std::size_t>(m + 1), 0);
  for (int rho = count - 1; rho >= 0; --rho) {
    first_rho[static_cast<std::size_t>(constraints.index[rho].breakpoint)] = rho;
  }
  std::vector<double> ticks(static_cast<std::size_t>(m + 1));
  for (int i = 0; i <= m; ++i) ticks[static_cast<std::size_t>(i)] = i;
  const Partition ticks_partition(ticks);

  std::vector<int> current(constraints.smoothness.size(), -1);
  Eigen::VectorXd jump(total);
  for (int rho = 0; rho < count; ++rho) {
    const auto [i, j] = constraints.index[rho];
    current[i] = j - 1;
    const Band band = jump_band(constraints.degrees, current, i);
    const int lo = constraints.offsets[static_cast<std::size_t>(i - 1)];
    const int hi = constraints.offsets[static_cast<std::size_t>(i + 1)];
    const Eigen::VectorXd column = constraints.columns.col(rho).segment(lo, hi - lo);
    const int n = static_cast<int>(rows.size());
    jump.resize(n);
    for (int k = 0; k < n; ++k) jump(k) = dot(rows[static_cast<std::size_t>(k)], column, lo);

    KnotRemovalFactor factor;
    try {
      factor = nullspace_step(jump, band);
    } catch (const BasisNonexistenceError& e) {
      std::ostringstream os;
      os << "no B-spline-like basis: constraint J[x_" << i << ", " << j << "]: " << e.what();
      throw BasisNonexistenceError(os.str(), i, j);
    }
    factor.constraint = {i, j};
    for (int k = band.first; k < band.last; ++k) {
      const auto t = static_cast<std::size_t>(k - band.first);
      rows[static_cast<std::size_t>(k)] =
          combine(factor.diagonal[t], rows[static_cast<std::size_t>(k)], factor.upper[t],
                  rows[static_cast<std::size_t>(k + 1)]);
    }
    rows.erase(rows.begin() + band.last);
    current[i] = j;
    out.factors.push_back(std::move(factor));

    if (rho + 1 == count || constraints.index[rho + 1].breakpoint != i) {
      const KnotVectors knots = build_knot_vectors(ticks_partition, constraints.degrees, current);
      std::vector<int> polished;
      for (int k = 0; k < knots.size(); ++k) {
        const auto uk = static_cast<std::size_t>(k);
        if (knots.u_breakpoint[uk] < i && knots.v_breakpoint[uk] > i &&
            polish_row(constraints, first_rho, current, knots, k, rows[uk])) {
          polished.push_back(k);
        }
      }
      restore_unity(rows, polished);
    }
  }

  out.C = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), total);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.C.row(static_cast<Eigen::Index>(k)).segment(rows[k].begin, rows[k].values.size()) =
        rows[k].values.transpose();
  }
  return out;
}

}  // namespace gtb
