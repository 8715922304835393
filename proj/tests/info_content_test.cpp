#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "axd/analysis.hpp"
#include "axd/info_content.hpp"
#include "axd/spec_io.hpp"
#include "oracles.hpp"

namespace {

using namespace axd;

const std::string kSpecs = AXD_SPECS_DIR;

double oracle_bits(double p) { return -std::log(p) / std::log(2.0); }

TEST(Bits, EndpointsAreExact) {
  EXPECT_EQ(bits_from_probability(1.0), 0.0);
  EXPECT_TRUE(std::isinf(bits_from_probability(0.0)));
  EXPECT_EQ(bits_from_probability(0.5), 1.0);
  EXPECT_EQ(bits_from_probability(0.25), 2.0);
  EXPECT_THROW(bits_from_probability(1.5), ContractViolation);
  EXPECT_THROW(bits_from_probability(std::nan("")), ContractViolation);
}

TEST(FrInformation, UniformOverlap) {
  const auto r = fr_information(Uniform{0.9, 1.1}, {1.05, 0.1, 0.1});
  EXPECT_NEAR(r.probability, 0.75, 1e-12);
  EXPECT_NEAR(r.bits, oracle_bits(0.75), 1e-12);
  EXPECT_NEAR(r.bits, 0.4150375, 1e-7);
}

TEST(FrInformation, OneSigmaNormal) {
  const auto r = fr_information(Normal{65, 0.5}, symmetric_range(65, 0.5));
  const double p = oracle::normal_mass(64.5, 65.5, 65, 0.5);
  EXPECT_NEAR(r.probability, p, 1e-10);
  EXPECT_NEAR(r.bits, oracle_bits(p), 1e-9);
  EXPECT_NEAR(r.bits, 0.5506985, 1e-7);
}

TEST(FrInformation, DisjointIsInfinite) {
  const auto r = fr_information(Uniform{2, 3}, symmetric_range(1, 0.1));
  EXPECT_EQ(r.probability, 0.0);
  EXPECT_TRUE(std::isinf(r.bits));
}

TEST(FrInformation, SystemRangeInsideDesignRangeIsZeroBits) {
  const auto r = fr_information(Uniform{0.95, 1.05}, symmetric_range(1, 0.1));
  EXPECT_EQ(r.probability, 1.0);
  EXPECT_EQ(r.bits, 0.0);
}

TEST(Independent, BitsAddAndProbabilitiesMultiply) {
  const std::vector<InfoResult> two_sigma_one{fr_information(Normal{0, 1}, symmetric_range(0, 1)),
                                              fr_information(Normal{0, 1}, symmetric_range(0, 1))};
  const auto rep = system_information_independent(two_sigma_one);
  const double p = oracle::normal_mass(-1, 1, 0, 1);
  EXPECT_NEAR(rep.system_probability, p * p, 1e-10);
  EXPECT_NEAR(rep.system_probability, 0.4660649, 1e-7);
  EXPECT_NEAR(rep.system_bits, 1.1013971, 1e-7);

  const std::vector<InfoResult> mixed{fr_information(Normal{65, 0.5}, symmetric_range(65, 0.5)),
                                      fr_information(Uniform{0.9, 1.1}, {1.05, 0.1, 0.1})};
  const auto sum = system_information_independent(mixed);
  EXPECT_NEAR(sum.system_bits, oracle_bits(oracle::normal_mass(64.5, 65.5, 65, 0.5)) + oracle_bits(0.75),
              1e-9);
  EXPECT_NEAR(sum.system_bits, 0.9657360, 1e-7);
}

TEST(Independent, InfiniteAbsorbsAndEmptyIsContractViolation) {
  const std::vector<InfoResult> rs{InfoResult::exact(0.5), InfoResult::exact(0.0)};
  EXPECT_TRUE(std::isinf(system_information_independent(rs).system_bits));
  EXPECT_THROW(system_information_independent(std::vector<InfoResult>{}), ContractViolation);
}

TEST(Independent, SumOfBitsMatchesLogOfProduct) {
  std::mt19937_64 g(9);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<InfoResult> rs;
    double product = 1.0;
    for (std::size_t k = 0; k < 1 + g() % 8; ++k) {
      const double p = u(g);
      product *= p;
      rs.push_back(InfoResult::exact(p));
    }
    const auto rep = system_information_independent(rs);
    ASSERT_NEAR(rep.system_bits, oracle_bits(product), 1e-10);
    ASSERT_NEAR(rep.system_probability, product, 1e-15);
  }
}

TEST(Estimated, BinomialStandardErrorAndDeltaMethod) {
  const auto r = InfoResult::estimated(2500, 10000);
  EXPECT_EQ(r.probability, 0.25);
  EXPECT_NEAR(r.std_error, std::sqrt(0.25 * 0.75 / 10000), 1e-15);
  EXPECT_NEAR(r.bits_error(), r.std_error / (0.25 * std::log(2.0)), 1e-15);
  EXPECT_EQ(InfoResult::estimated(10, 10).bits, 0.0);
  EXPECT_EQ(InfoResult::estimated(10, 10).std_error, 0.0);
}

TEST(Analytic, SchedulingSpec) {
  const auto spec = load_spec(kSpecs + "/scheduling.json");
  const auto rep = analyze(spec, MethodRequest::Auto, McConfig{});
  ASSERT_EQ(rep.info.method, InfoMethod::Analytic);
  const double p1 = oracle::normal_mass(-0.5, 0.5, 0, 1), p2 = oracle::normal_mass(-1.25, 1.25, 0, 1);
  EXPECT_NEAR(rep.info.per_fr[0].probability, p1, 1e-9);
  EXPECT_NEAR(rep.info.per_fr[1].probability, p2, 1e-9);
  EXPECT_NEAR(rep.info.per_fr[0].bits, 1.3848665, 1e-6);
  EXPECT_NEAR(rep.info.per_fr[1].bits, 0.3424506, 1e-6);
  EXPECT_NEAR(rep.info.system_bits, oracle_bits(p1) + oracle_bits(p2), 1e-6);
}

TEST(Analytic, RodCuttingSpec) {
  const auto spec = load_spec(kSpecs + "/rod_cutting.json");
  const auto rep = analyze(spec, MethodRequest::Auto, McConfig{});
  ASSERT_EQ(rep.info.method, InfoMethod::Analytic);
  const double pa = oracle::normal_mass(1 - 1e-6, 1 + 1e-6, 1, 0.001);
  EXPECT_NEAR(rep.info.per_fr[0].probability, pa, 1e-12);
  EXPECT_NEAR(rep.info.per_fr[0].probability, 7.97884e-4, 1e-9);
  EXPECT_NEAR(rep.info.per_fr[0].bits, 10.29153, 1e-5);
  EXPECT_NEAR(rep.info.per_fr[1].probability, 1.0, 1e-12);
  EXPECT_NEAR(rep.info.per_fr[1].bits, 0.0, 1e-9);
}

TEST(Analytic, DisjointSpecIsInfinite) {
  const auto rep = analyze(load_spec(kSpecs + "/disjoint.json"), MethodRequest::Auto, McConfig{});
  EXPECT_EQ(rep.info.system_probability, 0.0);
  EXPECT_TRUE(std::isinf(rep.info.system_bits));
}

TEST(Analytic, RefusedForCoupledDesign) {
  auto spec = load_spec(kSpecs + "/faucet_two_knob.json");
  spec.system_pdfs = {{"flow", Normal{8, 0.35}}, {"temp_dev", Normal{0, 1.1}}};
  EXPECT_THROW(analyze(spec, MethodRequest::Analytic, McConfig{}), MethodInapplicable);
}

TEST(Chain, TelescopesToJointOnTheSameSamples) {
  std::mt19937_64 g(2);
  std::normal_distribution<double> nd(0.0, 1.0);
  const std::vector<DesignRange> ranges{symmetric_range(0, 1), symmetric_range(0, 0.8), symmetric_range(0, 1.5)};
  for (int trial = 0; trial < 50; ++trial) {
    SampleSet s(SampleSet::default_columns(3), 0);
    for (int r = 0; r < 2000; ++r) {
      const double a = nd(g), b = 0.6 * a + 0.8 * nd(g), c = 0.3 * a - 0.5 * b + nd(g);
      s.append(std::vector<double>{a, b, c});
    }
    const auto joint = joint_from_samples(s, ranges);
    for (const auto& order : {std::vector<std::size_t>{0, 1, 2}, std::vector<std::size_t>{2, 0, 1}}) {
      const auto chain = chain_from_samples(s, order, ranges);
      ASSERT_NEAR(chain.system_probability, joint.system_probability, 1e-12);
      ASSERT_NEAR(chain.system_bits, joint.system_bits, 1e-10);
    }
  }
}

TEST(Chain, StarvationWarnsAndReportsInfinity) {
  SampleSet s(SampleSet::default_columns(2), 0);
  for (int r = 0; r < 10; ++r) s.append(std::vector<double>{5.0, 0.0});
  const std::vector<DesignRange> ranges{symmetric_range(0, 1), symmetric_range(0, 1)};
  const auto rep = chain_from_samples(s, std::vector<std::size_t>{0, 1}, ranges);
  EXPECT_TRUE(std::isinf(rep.system_bits));
  EXPECT_EQ(rep.system_probability, 0.0);
  ASSERT_EQ(rep.warnings.size(), 1u);
  EXPECT_NE(rep.warnings[0].find("starvation"), std::string::npos);
}

TEST(Chain, RejectsBadOrder) {
  SampleSet s(SampleSet::default_columns(2), 0);
  s.append(std::vector<double>{0.0, 0.0});
  const std::vector<DesignRange> ranges{symmetric_range(0, 1), symmetric_range(0, 1)};
  EXPECT_THROW(chain_from_samples(s, std::vector<std::size_t>{0, 0}, ranges), ContractViolation);
  EXPECT_THROW(chain_from_samples(s, std::vector<std::size_t>{0}, ranges), ContractViolation);
}

TEST(Joint, IndependentLinearModelMatchesAnalyticProduct) {
  LinearModel m{DesignMatrix::identity(2), {Normal{0, 1}, Uniform{0.9, 1.1}}, {}};
  const std::vector<DesignRange> ranges{symmetric_range(0, 1), {1.05, 0.1, 0.1}};
  const auto rep = system_information_joint(m, ranges, McConfig{7, 200000});
  const double exact = oracle::normal_mass(-1, 1, 0, 1) * 0.75;
  EXPECT_NEAR(rep.system_probability, exact, 4 * rep.std_error);
  EXPECT_NEAR(rep.system_bits, oracle_bits(exact), 4 * rep.bits_std_error);
  ASSERT_TRUE(rep.mc);
  EXPECT_EQ(rep.mc->seed, 7u);
}

TEST(Joint, WorkerCountDoesNotChangeResult) {
  LinearModel m{DesignMatrix{{1, 1}, {3.125, -3.125}}, {Normal{4, 0.25}, Normal{4, 0.25}}, {}};
  const std::vector<DesignRange> ranges{symmetric_range(8, 0.5), symmetric_range(0, 2)};
  McConfig one{42, 50000, 1}, many{42, 50000, 7};
  const auto a = system_information_joint(m, ranges, one), b = system_information_joint(m, ranges, many);
  EXPECT_EQ(a.system_probability, b.system_probability);
  EXPECT_EQ(a.system_bits, b.system_bits);
}

}  // namespace
