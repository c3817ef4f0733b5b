#include "gtb/space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gtb/errors.hpp"
#include "gtb/quadrature.hpp"

namespace gtb {

namespace {

std::vector<int> full_smoothness(const SpaceDefinition& definition) {
  std::vector<int> r;
  r.reserve(definition.smoothness.size() + 2);
  r.push_back(-1);
  r.insert(r.end(), definition.smoothness.begin(), definition.smoothness.end());
  r.push_back(-1);
  return r;
}

}  // namespace

GTSplineSpace::GTSplineSpace(SpaceDefinition definition)
    : definition_(std::move(definition)), partition_(definition_.breakpoints) {}

int GTSplineSpace::max_degree() const noexcept {
  return *std::max_element(degrees_.begin(), degrees_.end());
}

Band GTSplineSpace::active(int interval) const {
  if (interval < 0 || interval >= intervals()) throw IndexError("interval index out of range");
  // 1-based sigma(i) - p_i .. sigma(i) for interval i = interval + 1.
  const int sigma = knots_.sigma[interval + 1];
  return {sigma - degrees_[interval] - 1, sigma - 1};
}

Eigen::MatrixXd GTSplineSpace::eval_on_interval(int interval, double x, int max_order) const {
  const BernsteinBasis& basis = bernstein_[interval];
  if (max_order < 0 || max_order > basis.degree()) {
    std::ostringstream os;
    os << "derivative order " << max_order << " exceeds degree " << basis.degree()
       << " of interval " << interval + 1;
    throw OrderError(os.str());
  }
  return piece_derivatives(interval, x, max_order);
}

Eigen::MatrixXd GTSplineSpace::piece_derivatives(int interval, double x, int max_order) const {
  const BernsteinBasis& basis = bernstein_[interval];
  Eigen::MatrixXd local(basis.degree() + 1, max_order + 1);
  basis.derivatives_into(x, max_order, local);
  return extraction_.C.middleCols(offsets_[interval], basis.degree() + 1) * local;
}

Eigen::MatrixXd GTSplineSpace::eval_basis(double x, int max_order) const {
  return eval_on_interval(partition_.locate(x), x, max_order);
}

Eigen::MatrixXd GTSplineSpace::eval_basis(double x, int max_order, Side side) const {
  int interval = partition_.locate(x);
  if (side == Side::Left && interval > 0 && x == partition_.breakpoint(interval)) --interval;
  return eval_on_interval(interval, x, max_order);
}

GTSplineSpace build_space(const SpaceDefinition& definition) {
  GTSplineSpace space(definition);
  const Partition& partition = space.partition_;
  const int m = partition.intervals();
  if (static_cast<int>(definition.sections.size()) != m) {
    throw ConfigError("expected " + std::to_string(m) + " sections, got " +
                      std::to_string(definition.sections.size()));
  }
  if (static_cast<int>(definition.smoothness.size()) != m - 1) {
    throw ConfigError("expected " + std::to_string(m - 1) + " interior smoothness values, got " +
                      std::to_string(definition.smoothness.size()));
  }
  for (const auto& family : definition.sections) space.degrees_.push_back(degree_of(family));
  space.smoothness_ = full_smoothness(definition);
  validate_smoothness(partition, space.degrees_, space.smoothness_);

  for (int i = 0; i < m; ++i) {
    space.sections_.emplace_back(partition.breakpoint(i), partition.breakpoint(i + 1),
                                 definition.sections[i]);
    if (!space.sections_.back().contains_constants()) {
      throw ConfigError("section " + std::to_string(i + 1) + " (" +
                        describe(definition.sections[i]) +
                        ") does not contain constants; partition of unity needs degree >= 2");
    }
  }
  for (const SectionSpace& section : space.sections_) {
    space.bernstein_.push_back(build_bernstein(section));
    const auto& w = space.bernstein_.back().warnings();
    space.warnings_.insert(space.warnings_.end(), w.begin(), w.end());
  }
  for (int i = 1; i < m; ++i) {
    const int bound = std::min(space.degrees_[i - 1], space.degrees_[i]);
    if (space.smoothness_[i] == bound &&
        !same_space(definition.sections[i - 1], definition.sections[i])) {
      std::ostringstream os;
      os.precision(17);
      os << "breakpoint x_" << i << " = " << partition.breakpoint(i) << " joins "
         << describe(definition.sections[i - 1]) << " and " << describe(definition.sections[i])
         << " with r = min(p_i, p_{i+1}) = " << bound
         << "; admissible weights are only guaranteed for r < min";
      space.warnings_.push_back(os.str());
    }
  }

  space.knots_ = build_knot_vectors(partition, space.degrees_, space.smoothness_);
  const SmoothnessConstraints constraints =
      build_constraints(space.bernstein_, space.smoothness_);
  space.offsets_ = constraints.offsets;
  space.extraction_ = extraction_operator(constraints);
  return space;
}

Eigen::VectorXd jumps(const GTSplineSpace& space, int breakpoint, int order) {
  if (breakpoint < 1 || breakpoint >= space.intervals()) {
    throw IndexError("jump needs an interior breakpoint index, got " + std::to_string(breakpoint));
  }
  const double x = space.partition().breakpoint(breakpoint);
  if (order < 0) throw OrderError("negative jump order");
  const Eigen::MatrixXd left = space.piece_derivatives(breakpoint - 1, x, order);
  const Eigen::MatrixXd right = space.piece_derivatives(breakpoint, x, order);
  return left.col(order) - right.col(order);
}

double jump(const GTSplineSpace& space, int breakpoint, int order, int k) {
  if (k < 0 || k >= space.dimension()) throw IndexError("basis index out of range");
  return jumps(space, breakpoint, order)(k);
}

SplineCurve::SplineCurve(std::shared_ptr<const GTSplineSpace> space, Eigen::MatrixXd control)
    : space_(std::move(space)), control_(std::move(control)) {
  if (!space_) throw ConfigError("curve needs a space");
  if (control_.rows() != space_->dimension()) {
    throw ConfigError("curve needs " + std::to_string(space_->dimension()) +
                      " control points, got " + std::to_string(control_.rows()));
  }
}

Eigen::VectorXd SplineCurve::eval(double x, int order) const {
  return control_.transpose() * space_->eval_basis(x, order).col(order);
}

Eigen::VectorXd SplineCurve::eval(double x, int order, Side side) const {
  return control_.transpose() * space_->eval_basis(x, order, side).col(order);
}

Eigen::VectorXd eval_curve(const SplineCurve& curve, double x) { return curve.eval(x); }

KnotInsertion insert_knot(const GTSplineSpace& space, double x) {
  const Partition& partition = space.partition();
  if (!(x > partition.left() && x < partition.right())) {
    std::ostringstream os;
    os.precision(17);
    os << "knot " << x << " must lie strictly inside (" << partition.left() << ", "
       << partition.right() << ")";
    throw DomainError(os.str());
  }
  SpaceDefinition refined = space.definition();
  const auto& bps = partition.breakpoints();
  auto it = std::find(bps.begin(), bps.end(), x);
  int breakpoint = 0;
  int order = 0;
  bool fresh = false;
  if (it != bps.end()) {
    breakpoint = static_cast<int>(it - bps.begin());
    const int r = space.smoothness()[breakpoint];
    if (r < 0) {
      throw ConfigError("breakpoint x_" + std::to_string(breakpoint) +
                        " is already fully discontinuous (r = -1)");
    }
    refined.smoothness[breakpoint - 1] = r - 1;
    order = r;
  } else {
    const int interval = partition.locate(x);
    const int p = space.degrees()[interval];
    breakpoint = interval + 1;
    refined.breakpoints.insert(refined.breakpoints.begin() + breakpoint, x);
    refined.sections.insert(refined.sections.begin() + interval,
                            space.definition().sections[interval]);
    refined.smoothness.insert(refined.smoothness.begin() + interval, p - 1);
    order = p;
    fresh = true;
  }

  GTSplineSpace fine = build_space(refined);
  const Band band = jump_band(fine.degrees(), fine.smoothness(), breakpoint);
  KnotRemovalFactor factor = nullspace_step(jumps(fine, breakpoint, order), band);
  factor.constraint = {breakpoint, order};
  Eigen::MatrixXd transfer = factor.matrix().transpose();
  return KnotInsertion{std::move(fine), std::move(transfer), std::move(factor), breakpoint, fresh};
}

SplineCurve insert_knot(const SplineCurve& curve, double x) {
  KnotInsertion ins = insert_knot(curve.space(), x);
  Eigen::MatrixXd control = ins.transfer * curve.control();
  return SplineCurve(std::make_shared<const GTSplineSpace>(std::move(ins.refined)),
                     std::move(control));
}

Eigen::VectorXd basis_integrals(const GTSplineSpace& space) {
  const int n = space.dimension();
  const int points = 2 * space.max_degree() + 2;
  Eigen::VectorXd total = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < space.intervals(); ++i) {
    auto f = [&space, i](double x, Eigen::Ref<Eigen::VectorXd> out) {
      out = space.eval_on_interval(i, x, 0).col(0);
    };
    total += integrate_adaptive(f, n, space.partition().breakpoint(i),
                                space.partition().breakpoint(i + 1), points);
  }
  return total;
}

Eigen::VectorXd unit_integral_scaling(const GTSplineSpace& space) {
  return basis_integrals(space).cwiseInverse();
}

}  // namespace gtb
