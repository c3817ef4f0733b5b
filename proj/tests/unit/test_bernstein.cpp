#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "gtb/bernstein.hpp"
#include "gtb/errors.hpp"
#include "gtb/oracle.hpp"
#include "reference.hpp"

namespace {

using gtb::SectionSpace;
constexpr double kPi = std::numbers::pi;

std::vector<SectionSpace> sample_sections() {
  return {SectionSpace(0, 1, gtb::Polynomial{0}),
          SectionSpace(0, 1, gtb::Polynomial{2}),
          SectionSpace(-1, 2, gtb::Polynomial{5}),
          SectionSpace(1, 2.5, gtb::Trigonometric{3, kPi / 2}),
          SectionSpace(2.5, 5, gtb::Exponential{4, 10.0}),
          SectionSpace(0, 1, gtb::Trigonometric{1, 2.0}),
          SectionSpace(0, 1, gtb::Exponential{1, 3.0}),
          SectionSpace(0, 2, gtb::Trigonometric{5, 1.4}),
          SectionSpace(0, 1.5, gtb::Exponential{4, 0.3}),
          SectionSpace(0, 1, gtb::Trigonometric{3, 0.5})};
}

TEST(Bernstein, QuadraticMatchesHandSolution) {
  auto b = gtb::build_bernstein(SectionSpace(0, 1, gtb::Polynomial{2}));
  for (double x : {0.0, 0.25, 0.7, 1.0}) {
    const Eigen::MatrixXd d = b.derivatives(x, 0);
    EXPECT_NEAR(d(0, 0), (1 - x) * (1 - x), 1e-15);
    EXPECT_NEAR(d(1, 0), 2 * x * (1 - x), 1e-15);
    EXPECT_NEAR(d(2, 0), x * x, 1e-15);
  }
}

TEST(Bernstein, EndpointConditions) {
  for (const auto& s : sample_sections()) {
    auto b = gtb::build_bernstein(s);
    const int p = b.degree();
    const Eigen::MatrixXd& left = b.left_table();
    const Eigen::MatrixXd& right = b.right_table();
    const double h = s.length();
    EXPECT_NEAR(left(0, 0), 1.0, 1e-13) << gtb::describe(s.family());
    EXPECT_NEAR(right(p, 0), 1.0, 1e-13) << gtb::describe(s.family());
    for (int j = 0; j <= p; ++j) {
      for (int l = 0; l < j; ++l) {
        EXPECT_NEAR(left(j, l) * std::pow(h, l), 0.0, 1e-11) << gtb::describe(s.family());
      }
      for (int l = 0; l < p - j; ++l) {
        EXPECT_NEAR(right(j, l) * std::pow(h, l), 0.0, 1e-11) << gtb::describe(s.family());
      }
    }
  }
}

TEST(Bernstein, PartitionOfUnityAndPositivity) {
  for (const auto& s : sample_sections()) {
    if (!s.contains_constants()) continue;
    auto b = gtb::build_bernstein(s);
    for (double x : ref::uniform_samples(s.lo(), s.hi(), 200)) {
      const Eigen::VectorXd v = b.derivatives(x, 0).col(0);
      EXPECT_NEAR(v.sum(), 1.0, 1e-12) << gtb::describe(s.family());
      EXPECT_GT(v.minCoeff(), -1e-14) << gtb::describe(s.family());
    }
    const Eigen::VectorXd mid = b.derivatives(0.5 * (s.lo() + s.hi()), 0).col(0);
    EXPECT_GT(mid.minCoeff(), 1e-10) << gtb::describe(s.family());
  }
}

TEST(Bernstein, ClosedFormsAgreeWithHermiteSolve) {
  for (const auto& s : sample_sections()) {
    auto closed = gtb::closed_form_bernstein(s);
    if (!closed) continue;
    auto solved = gtb::build_bernstein(s);
    const int order = std::min(2, s.degree());
    for (double x : ref::uniform_samples(s.lo(), s.hi(), 50)) {
      const Eigen::MatrixXd a = closed->derivatives(x, order);
      const Eigen::MatrixXd b = solved.derivatives(x, order);
      for (int d = 0; d <= order; ++d) {
        const double scale = std::max(1.0, a.col(d).cwiseAbs().maxCoeff());
        EXPECT_LE((a.col(d) - b.col(d)).cwiseAbs().maxCoeff(), 1e-12 * scale)
            << gtb::describe(s.family()) << " order " << d;
      }
    }
  }
  EXPECT_FALSE(gtb::closed_form_bernstein(SectionSpace(0, 1, gtb::Trigonometric{3, 1.0})));
}

TEST(Bernstein, TrigonometricQuadraticClosedForm) {
  const double w = 2.0;
  auto b = gtb::build_bernstein(SectionSpace(0, 1, gtb::Trigonometric{2, w}));
  for (double x : ref::uniform_samples(0, 1, 11)) {
    EXPECT_NEAR(b.derivatives(x, 0)(0, 0), (1 - std::cos(w * (1 - x))) / (1 - std::cos(w)), 1e-14);
  }
}

TEST(Bernstein, ExponentialLinearClosedForm) {
  const double w = 3.0;
  auto b = gtb::build_bernstein(SectionSpace(0, 1, gtb::Exponential{1, w}));
  for (double x : ref::uniform_samples(0, 1, 11)) {
    EXPECT_NEAR(b.derivatives(x, 0)(0, 0), std::sinh(w * (1 - x)) / std::sinh(w), 1e-14);
  }
}

TEST(Bernstein, CubicPolynomialClosedForm) {
  auto closed = gtb::closed_form_bernstein(SectionSpace(0, 1, gtb::Polynomial{3}));
  ASSERT_TRUE(closed);
  for (double x : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(closed->derivatives(x, 0)(1, 0), 3 * x * (1 - x) * (1 - x), 1e-15);
  }
}

TEST(Bernstein, EndpointJumpTables) {
  auto hat_left = gtb::build_bernstein(SectionSpace(0, 1, gtb::Polynomial{1}));
  auto hat_right = gtb::build_bernstein(SectionSpace(1, 2, gtb::Polynomial{1}));
  const auto t0 = gtb::endpoint_jump_table(hat_left, 0);
  EXPECT_NEAR(t0.right(0), 0.0, 1e-15);
  EXPECT_NEAR(t0.right(1), 1.0, 1e-15);
  const auto t1 = gtb::endpoint_jump_table(hat_right, 0);
  EXPECT_NEAR(t1.left(0), 1.0, 1e-15);
  EXPECT_NEAR(t1.left(1), 0.0, 1e-15);
  auto quad = gtb::build_bernstein(SectionSpace(0, 1, gtb::Polynomial{2}));
  const auto t2 = gtb::endpoint_jump_table(quad, 1);
  EXPECT_NEAR(t2.left(0), -2.0, 1e-14);
  EXPECT_NEAR(t2.left(1), 2.0, 1e-14);
  EXPECT_NEAR(t2.left(2), 0.0, 1e-14);
  EXPECT_THROW(gtb::endpoint_jump_table(quad, 3), gtb::OrderError);
}

TEST(Bernstein, EvaluationChecks) {
  auto b = gtb::build_bernstein(SectionSpace(0, 1, gtb::Polynomial{2}));
  EXPECT_THROW(b.derivatives(1.5, 0), gtb::DomainError);
  EXPECT_THROW(b.derivatives(0.5, 3), gtb::OrderError);
}

TEST(Bernstein, RecurrenceOracleReproducesBasis) {
  for (const auto& s : sample_sections()) {
    if (s.degree() < 2) continue;
    auto b = gtb::build_bernstein(s);
    const gtb::BernsteinRecurrence rec = gtb::bernstein_recurrence(s);
    for (double x : ref::uniform_samples(s.lo(), s.hi(), 40)) {
      const Eigen::VectorXd expected = b.derivatives(x, 0).col(0);
      EXPECT_LE((rec.eval_all(x) - expected).cwiseAbs().maxCoeff(), 1e-10)
          << gtb::describe(s.family());
    }
  }
}

}  // namespace
