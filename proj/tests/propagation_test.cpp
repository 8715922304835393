#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "axd/coupling.hpp"
#include "axd/info_content.hpp"
#include "axd/propagation.hpp"
#include "oracles.hpp"

namespace {

using namespace axd;

TEST(FiniteDifference, LinearMapIsRecoveredExactly) {
  const DesignMatrix a{{2, 0, -1}, {0.5, 3, 0}};
  const ModelFunction f = [&](std::span<const double> x) {
    std::vector<double> y(2, 0.0);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 3; ++j) y[i] += a(i, j) * x[j];
    return y;
  };
  const std::vector<double> x0{1, 2, 3};
  const auto est = estimate_design_matrix(f, x0, 1e-3);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(est(i, j), a(i, j), 1e-9);
}

TEST(FiniteDifference, QuadraticGradient) {
  // d/dx (x^2 + x y) = 2x + y, d/dy = x; central differences are exact for quadratics
  const ModelFunction f = [](std::span<const double> v) {
    return std::vector<double>{v[0] * v[0] + v[0] * v[1]};
  };
  const std::vector<double> x0{1.5, -2.0};
  const auto est = estimate_design_matrix(f, x0, 0.1);
  EXPECT_NEAR(est(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(est(0, 1), 1.5, 1e-12);
}

TEST(FiniteDifference, NonFiniteAndBadStep) {
  const ModelFunction f = [](std::span<const double> v) { return std::vector<double>{1.0 / v[0]}; };
  EXPECT_THROW(estimate_design_matrix(f, std::vector<double>{0.0}, 1e-3), ModelError);
  EXPECT_THROW(estimate_design_matrix(f, std::vector<double>{1.0}, 0.0), ContractViolation);
}

TEST(Propagate, LinearMeansFollowTheMatrix) {
  const LinearModel m{DesignMatrix{{1, 1}, {2, -1}}, {Normal{1, 0.1}, Uniform{2, 4}}, {}};
  const auto s = propagate(m, Rng(5), 100000);
  double m0 = 0, m1 = 0;
  for (std::size_t r = 0; r < s.rows(); ++r) {
    m0 += s(r, 0);
    m1 += s(r, 1);
  }
  m0 /= s.rows();
  m1 /= s.rows();
  // sd of FR1 ~0.58, of FR2 ~0.58; 4 se ~ 0.0074
  EXPECT_NEAR(m0, 4.0, 0.0074);
  EXPECT_NEAR(m1, -1.0, 0.0074);
}

TEST(Propagate, NoiseIsAddedPerRow) {
  const LinearModel m{DesignMatrix::identity(2), {point_mass(1.0), point_mass(2.0)},
                      {std::nullopt, Pdf{Uniform{10, 11}}}};
  const auto s = propagate(m, Rng(3), 1000);
  for (std::size_t r = 0; r < s.rows(); ++r) {
    ASSERT_EQ(s(r, 0), 1.0);
    ASSERT_GE(s(r, 1), 12.0);
    ASSERT_LT(s(r, 1), 13.0);
  }
}

TEST(Propagate, IdenticalAcrossWorkerCounts) {
  const LinearModel m{DesignMatrix{{1, 0.5}, {0, 1}}, {Normal{0, 1}, Triangular{0, 1, 3}}, {}};
  const auto one = propagate(m, Rng(11), 10007, 1);
  for (unsigned w : {2u, 3u, 8u}) EXPECT_EQ(propagate(m, Rng(11), 10007, w), one) << w;
  const BlackBoxModel box{[](std::span<const double> x) { return std::vector<double>{x[0] * x[1]}; },
                          {Normal{0, 1}, Normal{2, 1}}};
  EXPECT_EQ(propagate(box, Rng(4), 999, 4), propagate(box, Rng(4), 999, 1));
}

TEST(Propagate, BlackBoxFailuresNameTheTrial) {
  const BlackBoxModel throws{[](std::span<const double> x) -> std::vector<double> {
                               if (x[0] > 0.99) throw std::runtime_error("boom");
                               return {x[0]};
                             },
                             {Uniform{0, 1}}};
  try {
    propagate(throws, Rng(1), 100000);
    FAIL() << "expected ModelError";
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("trial "), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
  }
  const BlackBoxModel nan{[](std::span<const double>) { return std::vector<double>{std::nan("")}; },
                          {Uniform{0, 1}}};
  EXPECT_THROW(propagate(nan, Rng(1), 10), ModelError);
}

TEST(Propagate, InconsistentLinearModelIsRejected) {
  const LinearModel m{DesignMatrix::identity(2), {Normal{0, 1}}, {}};
  EXPECT_THROW(propagate(m, Rng(1), 10), ContractViolation);
}

// Two-knob faucet with unequal knob scatter: flow and temperature correlate.
struct Faucet {
  double sh = 0.3, sc = 0.2, k = 3.125;
  LinearModel model() const { return {DesignMatrix{{1, 1}, {k, -k}}, {Normal{4, sh}, Normal{4, sc}}, {}}; }
  double sxx() const { return sh * sh + sc * sc; }
  double syy() const { return k * k * sxx(); }
  double sxy() const { return k * (sh * sh - sc * sc); }
};

TEST(Joint, CorrelatedFaucetMatchesQuadratureOracle) {
  const Faucet f;
  const std::vector<DesignRange> ranges{{8.4, 0.2, 0.2}, {-1.0, 1.0, 1.0}};  // [8.2, 8.6] x [-2, 0]
  const auto rep = system_information_joint(f.model(), ranges, McConfig{42, 200000});
  const double joint = oracle::bivariate_normal_mass(8, 0, f.sxx(), f.syy(), f.sxy(), 8.2, 8.6, -2, 0);
  const double product = oracle::normal_mass(8.2, 8.6, 8, std::sqrt(f.sxx())) *
                         oracle::normal_mass(-2, 0, 0, std::sqrt(f.syy()));
  ASSERT_LT(joint, product);  // high flow pairs with high temperature here
  EXPECT_NEAR(rep.system_probability, joint, 4 * rep.std_error);
  EXPECT_LT(rep.system_probability + 4 * rep.std_error, product);
}

TEST(Joint, FaucetClassifiesCoupled) {
  EXPECT_EQ(classify(Faucet{}.model().matrix, 0.0).kind(), CouplingKind::Coupled);
}

}  // namespace
