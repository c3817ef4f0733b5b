#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gtb/errors.hpp"
#include "gtb/sections.hpp"

namespace {

using gtb::SectionSpace;
constexpr double kPi = std::numbers::pi;

std::vector<gtb::SectionFamily> sample_families() {
  return {gtb::Polynomial{0},          gtb::Polynomial{3},          gtb::Trigonometric{1, 1.0},
          gtb::Trigonometric{3, 1.2},  gtb::Exponential{2, 4.0},    gtb::Exponential{4, 10.0},
          gtb::Trigonometric{2, 0.5}};
}

TEST(Partition, LocateUsesHalfOpenIntervals) {
  gtb::Partition p({0.0, 1.0, 2.5, 5.0});
  EXPECT_EQ(p.intervals(), 3);
  EXPECT_EQ(p.locate(0.0), 0);
  EXPECT_EQ(p.locate(0.999), 0);
  EXPECT_EQ(p.locate(1.0), 1);
  EXPECT_EQ(p.locate(2.5), 2);
  EXPECT_EQ(p.locate(5.0), 2);
  EXPECT_THROW(p.locate(5.0001), gtb::DomainError);
  EXPECT_THROW(p.locate(-1e-9), gtb::DomainError);
}

TEST(Partition, RejectsInvalidBreakpoints) {
  EXPECT_THROW(gtb::Partition({1.0}), gtb::ConfigError);
  EXPECT_THROW(gtb::Partition({0.0, 1.0, 1.0}), gtb::ConfigError);
  EXPECT_THROW(gtb::Partition({0.0, NAN}), gtb::ConfigError);
}

TEST(SectionSpace, FamilyParametersValidated) {
  EXPECT_THROW(SectionSpace(0, 3, gtb::Trigonometric{2, 1.2}), gtb::InvalidFamilyError);
  EXPECT_THROW(SectionSpace(0, 1, gtb::Trigonometric{2, kPi}), gtb::InvalidFamilyError);
  EXPECT_THROW(SectionSpace(0, 1, gtb::Exponential{2, -1.0}), gtb::InvalidFamilyError);
  EXPECT_THROW(SectionSpace(0, 1, gtb::Polynomial{-1}), gtb::InvalidFamilyError);
  EXPECT_THROW(SectionSpace(1, 1, gtb::Polynomial{1}), gtb::ConfigError);
  EXPECT_NO_THROW(SectionSpace(0, 1, gtb::Trigonometric{2, 0.999 * kPi}));
}

TEST(SectionSpace, ConstantsOnlyWithDegreeTwoKernels) {
  EXPECT_TRUE(SectionSpace(0, 1, gtb::Polynomial{0}).contains_constants());
  EXPECT_TRUE(SectionSpace(0, 1, gtb::Trigonometric{2, 1.0}).contains_constants());
  EXPECT_FALSE(SectionSpace(0, 1, gtb::Trigonometric{1, 1.0}).contains_constants());
  EXPECT_FALSE(SectionSpace(0, 1, gtb::Exponential{1, 1.0}).contains_constants());
}

TEST(SectionSpace, FirstDerivativeMatchesFiniteDifferences) {
  std::mt19937 rng(7);
  for (const auto& family : sample_families()) {
    if (gtb::degree_of(family) < 1) continue;
    SectionSpace s(0.5, 1.7, family);
    std::uniform_real_distribution<double> pick(s.lo() + 1e-3, s.hi() - 1e-3);
    for (int trial = 0; trial < 100; ++trial) {
      const double x = pick(rng);
      const double h = 1e-6;
      const Eigen::MatrixXd d = gtb::eval_span_derivatives(s, x, 1);
      const Eigen::MatrixXd plus = gtb::eval_span_derivatives(s, x + h, 0);
      const Eigen::MatrixXd minus = gtb::eval_span_derivatives(s, x - h, 0);
      for (int j = 0; j < s.dimension(); ++j) {
        const double fd = (plus(j, 0) - minus(j, 0)) / (2 * h);
        EXPECT_NEAR(d(j, 1), fd, 1e-6 * std::max(1.0, std::abs(fd))) << gtb::describe(family);
      }
    }
  }
}

TEST(SectionSpace, HigherDerivativesAreConsistent) {
  SectionSpace s(0.0, 1.0, gtb::Exponential{3, 3.0});
  const double x = 0.4, h = 1e-5;
  const Eigen::MatrixXd d = gtb::eval_span_derivatives(s, x, 3);
  const Eigen::MatrixXd plus = gtb::eval_span_derivatives(s, x + h, 3);
  const Eigen::MatrixXd minus = gtb::eval_span_derivatives(s, x - h, 3);
  for (int j = 0; j < s.dimension(); ++j) {
    for (int o = 1; o <= 3; ++o) {
      EXPECT_NEAR(d(j, o), (plus(j, o - 1) - minus(j, o - 1)) / (2 * h), 1e-5);
    }
  }
}

TEST(SectionSpace, CheckedEvaluationRejectsBadInput) {
  SectionSpace s(0, 1, gtb::Polynomial{2});
  EXPECT_THROW(gtb::eval_span_derivatives(s, 1.5, 0), gtb::DomainError);
  EXPECT_THROW(gtb::eval_span_derivatives(s, 0.5, 3), gtb::OrderError);
  EXPECT_THROW(gtb::eval_span_derivatives(s, 0.5, -1), gtb::OrderError);
}

TEST(SectionSpace, EndpointCollocationNonsingular) {
  for (const auto& family : sample_families()) {
    SectionSpace s(0.5, 1.7, family);
    EXPECT_GT(gtb::endpoint_collocation_rcond(s), 1e-12) << gtb::describe(family);
  }
}

TEST(SectionSpace, SmallFrequencyKernelsSpanTheSameSpace) {
  // Both kernel representations must give the same Bernstein basis.
  const double limit = SectionSpace::kRemainderLimit;
  SectionSpace below(0, 1, gtb::Exponential{3, limit});
  SectionSpace above(0, 1, gtb::Exponential{3, std::nextafter(limit, 3.0)});
  EXPECT_TRUE(below.remainder_kernels());
  EXPECT_FALSE(above.remainder_kernels());
  EXPECT_FALSE(SectionSpace(0, 1, gtb::Trigonometric{1, 0.5}).remainder_kernels());
  for (const auto& s : {below, above}) {
    // D^4 of every span function equals w^2 D^2 on the kernel pair only.
    for (double x : {0.2, 0.7}) {
      const Eigen::MatrixXd d = gtb::eval_span_derivatives(s, x, 3);
      EXPECT_NEAR(s.span_function(2, x, 4), limit * limit * d(2, 2), 1e-9);
      EXPECT_NEAR(s.span_function(3, x, 4), limit * limit * d(3, 2), 1e-9);
      EXPECT_EQ(s.span_function(1, x, 2), 0.0);
    }
  }
}

TEST(SectionSpace, RestrictionKeepsFamily) {
  SectionSpace s(0, 2, gtb::Trigonometric{3, 1.0});
  SectionSpace r = s.restricted(0.5, 1.5);
  EXPECT_EQ(r.lo(), 0.5);
  EXPECT_EQ(r.hi(), 1.5);
  EXPECT_EQ(r.degree(), 3);
  EXPECT_THROW(s.restricted(-1.0, 1.0), gtb::DomainError);
}

TEST(FamilyHelpers, DegreeDescribeAndEquality) {
  EXPECT_EQ(gtb::degree_of(gtb::Exponential{4, 10.0}), 4);
  EXPECT_NE(gtb::describe(gtb::Trigonometric{3, 2.0}).find("trigonometric"), std::string::npos);
  EXPECT_TRUE(gtb::same_space(gtb::Polynomial{2}, gtb::Polynomial{2}));
  EXPECT_FALSE(gtb::same_space(gtb::Polynomial{2}, gtb::Polynomial{3}));
  EXPECT_FALSE(gtb::same_space(gtb::Trigonometric{2, 1.0}, gtb::Trigonometric{2, 2.0}));
  EXPECT_FALSE(gtb::same_space(gtb::Trigonometric{2, 1.0}, gtb::Exponential{2, 1.0}));
}

TEST(NormalizedPair, PolynomialIsLinear) {
  auto pair = gtb::normalized_pair(SectionSpace(0, 1, gtb::Polynomial{2}));
  for (double x : {0.0, 0.3, 1.0}) {
    EXPECT_NEAR(pair.U(x), 1 - x, 1e-15);
    EXPECT_NEAR(pair.V(x), x, 1e-15);
  }
}

TEST(NormalizedPair, TrigonometricClosedForm) {
  auto pair = gtb::normalized_pair(SectionSpace(1, 2.5, gtb::Trigonometric{3, kPi / 2}));
  for (double x : {1.0, 1.4, 2.0, 2.5}) {
    EXPECT_NEAR(pair.U(x), -std::sqrt(2.0) * std::cos(kPi / 4 + kPi * x / 2), 1e-14);
    EXPECT_NEAR(pair.V(x), -std::sqrt(2.0) * std::cos(kPi * x / 2), 1e-14);
  }
}

TEST(NormalizedPair, ExponentialClosedForm) {
  auto pair = gtb::normalized_pair(SectionSpace(2.5, 5, gtb::Exponential{4, 10.0}));
  for (double x : {2.5, 3.0, 4.9, 5.0}) {
    EXPECT_NEAR(pair.U(x), std::sinh(50 - 10 * x) / std::sinh(25.0), 1e-14);
  }
}

TEST(NormalizedPair, EndpointConditions) {
  for (const auto& family : sample_families()) {
    if (gtb::degree_of(family) < 1) continue;
    SectionSpace s(-0.3, 1.1, family);
    auto pair = gtb::normalized_pair(s);
    EXPECT_NEAR(pair.U(s.lo()), 1.0, 1e-14);
    EXPECT_NEAR(pair.U(s.hi()), 0.0, 1e-14);
    EXPECT_NEAR(pair.V(s.lo()), 0.0, 1e-14);
    EXPECT_NEAR(pair.V(s.hi()), 1.0, 1e-14);
  }
  EXPECT_THROW(gtb::normalized_pair(SectionSpace(0, 1, gtb::Polynomial{0})),
               gtb::InvalidFamilyError);
}

TEST(GpbWeights, PolynomialWeightsAreOne) {
  auto w = gtb::gpb_weights(SectionSpace(0, 1, gtb::Polynomial{2}));
  for (double x : {0.0, 0.5, 1.0}) {
    EXPECT_NEAR(w.weight(0, x), 1.0, 1e-15);
    EXPECT_NEAR(w.weight(1, x), 1.0, 1e-15);
    EXPECT_NEAR(w.weight(2, x), 1.0, 1e-14);
  }
}

TEST(GpbWeights, PositiveAndNormalisedAtEnds) {
  for (const auto& family : sample_families()) {
    if (gtb::degree_of(family) < 1) continue;
    SectionSpace s(0, 1, family);
    auto w = gtb::gpb_weights(s);
    const int p = s.degree();
    EXPECT_NEAR(w.weight(p - 1, 0.0), 1.0, 1e-14);
    EXPECT_NEAR(w.weight(p - 1, 1.0), 1.0, 1e-14);
    for (int i = 0; i <= 100; ++i) {
      EXPECT_GT(w.weight(p, i / 100.0), 0.0);
      EXPECT_GT(w.weight(p - 1, i / 100.0), 0.0);
    }
  }
}

TEST(GpbWeights, DerivativesMatchFiniteDifferences) {
  SectionSpace s(1, 2.5, gtb::Trigonometric{3, kPi / 2});
  auto w = gtb::gpb_weights(s);
  const double h = 1e-5;
  for (int j = 0; j <= 3; ++j) {
    for (double x : {1.2, 1.8, 2.3}) {
      const Eigen::VectorXd d = w.weight_derivatives(j, x, 2);
      const Eigen::VectorXd dp = w.weight_derivatives(j, x + h, 1);
      const Eigen::VectorXd dm = w.weight_derivatives(j, x - h, 1);
      EXPECT_NEAR(d(0), w.weight(j, x), 1e-14);
      EXPECT_NEAR(d(1), (dp(0) - dm(0)) / (2 * h), 1e-7);
      EXPECT_NEAR(d(2), (dp(1) - dm(1)) / (2 * h), 1e-6);
    }
  }
  EXPECT_THROW(w.weight_derivatives(4, 1.5, 0), gtb::IndexError);
}

}  // namespace
