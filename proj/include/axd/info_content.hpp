#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "axd/distributions.hpp"
#include "axd/errors.hpp"
#include "axd/propagation.hpp"
#include "axd/sample_set.hpp"
#include "axd/spec_model.hpp"

namespace axd {

inline constexpr double kInfiniteBits = std::numeric_limits<double>::infinity();

/// Information content in bits, -log2(p). p == 1 gives exactly 0 and p == 0
/// gives +infinity.
inline double bits_from_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ContractViolation("probability must lie in [0, 1]");
  if (p == 0.0) return kInfiniteBits;
  if (p == 1.0) return 0.0;
  return -std::log2(p);
}

/// Delta-method standard error of -log2(p): se_p / (p ln 2).
inline double bits_std_error(double p, double se_p) {
  if (se_p == 0.0) return 0.0;
  if (p == 0.0) return kInfiniteBits;
  return se_p / (p * std::numbers::ln2);
}

struct InfoResult {
  double probability = 1.0;
  double bits = 0.0;
  double std_error = 0.0;  // of the probability; 0 for analytic results

  double bits_error() const { return bits_std_error(probability, std_error); }

  static InfoResult exact(double p) { return {p, bits_from_probability(p), 0.0}; }
  static InfoResult estimated(std::size_t hits, std::size_t trials) {
    if (trials == 0) return {0.0, kInfiniteBits, 0.0};
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    return {p, bits_from_probability(p), std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
  }
};

enum class InfoMethod { Analytic, ConditionalChain, JointMonteCarlo };

inline const char* to_string(InfoMethod m) {
  switch (m) {
    case InfoMethod::Analytic: return "analytic";
    case InfoMethod::ConditionalChain: return "chain";
    case InfoMethod::JointMonteCarlo: return "joint";
  }
  return "?";
}

struct McSummary {
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
};

struct SystemInfoReport {
  /// One entry per FR in declaration order. For the chain method entry i is
  /// the conditional probability of FR i given the FRs before it in `order`.
  std::vector<InfoResult> per_fr;
  InfoMethod method = InfoMethod::Analytic;
  double system_probability = 1.0;
  double system_bits = 0.0;
  double std_error = 0.0;       // of system_probability
  double bits_std_error = 0.0;  // of system_bits
  std::optional<McSummary> mc;
  std::vector<std::size_t> order;  // chain only
  std::vector<std::string> warnings;
};

/// Probability that the FR lands in its design range: the system-pdf mass
/// over the common range.
inline InfoResult fr_information(const Pdf& system_pdf, const DesignRange& range) {
  const auto b = range_bounds(range);
  return InfoResult::exact(interval_probability(system_pdf, b.lower, b.upper));
}

/// Product of probabilities and sum of bits for statistically independent FRs.
inline SystemInfoReport system_information_independent(std::span<const InfoResult> results) {
  if (results.empty()) throw ContractViolation("system information needs at least one FR");
  SystemInfoReport rep;
  rep.method = InfoMethod::Analytic;
  rep.per_fr.assign(results.begin(), results.end());
  double p = 1.0, bits = 0.0, rel_var = 0.0;
  for (const auto& r : results) {
    p *= r.probability;
    bits += r.bits;  // inf absorbs
    if (r.std_error > 0.0) {
      const double b = r.bits_error();
      rel_var += b * b;
    }
  }
  rep.system_probability = p;
  rep.system_bits = p == 0.0 ? kInfiniteBits : bits;
  rep.bits_std_error = std::sqrt(rel_var);
  rep.std_error = p * std::numbers::ln2 * rep.bits_std_error;
  return rep;
}

namespace detail {

inline bool in_range(double v, const DesignRange& r) {
  const auto b = range_bounds(r);
  return v >= b.lower && v <= b.upper;
}

inline void check_widths(const SampleSet& s, std::span<const DesignRange> ranges) {
  if (s.cols() != ranges.size())
    throw ContractViolation("model produces " + std::to_string(s.cols()) + " FRs but " +
                            std::to_string(ranges.size()) + " design ranges were given");
}

}  // namespace detail

/// Fraction of trials with every FR inside its range. per_fr holds the
/// marginal estimates from the same trials.
inline SystemInfoReport joint_from_samples(const SampleSet& samples,
                                           std::span<const DesignRange> ranges) {
  detail::check_widths(samples, ranges);
  const std::size_t n = samples.rows(), m = samples.cols();
  std::vector<std::size_t> marginal(m, 0);
  std::size_t joint = 0;
  for (std::size_t r = 0; r < n; ++r) {
    bool all = true;
    for (std::size_t c = 0; c < m; ++c) {
      const bool ok = detail::in_range(samples(r, c), ranges[c]);
      marginal[c] += ok;
      all = all && ok;
    }
    joint += all;
  }
  SystemInfoReport rep;
  rep.method = InfoMethod::JointMonteCarlo;
  for (std::size_t c = 0; c < m; ++c) rep.per_fr.push_back(InfoResult::estimated(marginal[c], n));
  const auto sys = InfoResult::estimated(joint, n);
  rep.system_probability = sys.probability;
  rep.system_bits = sys.bits;
  rep.std_error = sys.std_error;
  rep.bits_std_error = sys.bits_error();
  return rep;
}

/// Chain-rule estimate: stage k is the fraction of trials that satisfied all
/// earlier FRs in `order` and also satisfy FR order[k]. Total bits are the
/// sum of stage bits.
inline SystemInfoReport chain_from_samples(const SampleSet& samples,
                                           std::span<const std::size_t> order,
                                           std::span<const DesignRange> ranges) {
  detail::check_widths(samples, ranges);
  const std::size_t m = samples.cols();
  {
    std::vector<char> seen(m, 0);
    if (order.size() != m) throw ContractViolation("order must be a permutation of the FRs");
    for (std::size_t i : order) {
      if (i >= m || seen[i]) throw ContractViolation("order must be a permutation of the FRs");
      seen[i] = 1;
    }
  }

  SystemInfoReport rep;
  rep.method = InfoMethod::ConditionalChain;
  rep.order.assign(order.begin(), order.end());
  rep.per_fr.resize(m);

  std::vector<std::size_t> alive(samples.rows());
  for (std::size_t r = 0; r < alive.size(); ++r) alive[r] = r;

  double prob = 1.0, bits = 0.0, var_bits = 0.0;
  for (std::size_t stage = 0; stage < m; ++stage) {
    const std::size_t fr = order[stage];
    if (alive.empty()) {
      rep.per_fr[fr] = {0.0, kInfiniteBits, 0.0};
      rep.warnings.push_back("sample starvation: no trials satisfied the FRs before stage " +
                             std::to_string(stage + 1) + " (FR index " + std::to_string(fr) +
                             ")");
      prob = 0.0;
      bits = kInfiniteBits;
      continue;
    }
    std::vector<std::size_t> next;
    for (std::size_t r : alive)
      if (detail::in_range(samples(r, fr), ranges[fr])) next.push_back(r);
    const auto res = InfoResult::estimated(next.size(), alive.size());
    rep.per_fr[fr] = res;
    prob *= res.probability;
    bits += res.bits;
    const double be = res.bits_error();
    var_bits += be * be;
    alive = std::move(next);
  }
  rep.system_bits = bits;
  rep.system_probability = prob;
  rep.bits_std_error = std::isinf(bits) ? kInfiniteBits : std::sqrt(var_bits);
  rep.std_error = std::isinf(bits) ? 0.0 : rep.system_probability * std::numbers::ln2 * rep.bits_std_error;
  return rep;
}

/// Monte Carlo estimate of P(all FRs in range) for a forward model.
inline SystemInfoReport system_information_joint(const ForwardModel& model,
                                                 std::span<const DesignRange> ranges,
                                                 const McConfig& mc) {
  if (mc.n_samples < 1) throw ContractViolation("n_samples must be >= 1");
  const auto samples = propagate(model, Rng(mc.seed), mc.n_samples, mc.workers);
  auto rep = joint_from_samples(samples, ranges);
  rep.mc = McSummary{mc.seed, mc.n_samples};
  return rep;
}

/// Conditional-chain estimate over `order` (FR indices), sharing the sample
/// stream that system_information_joint would draw for the same seed.
inline SystemInfoReport conditional_chain_information(const ForwardModel& model,
                                                      std::span<const std::size_t> order,
                                                      std::span<const DesignRange> ranges,
                                                      const McConfig& mc) {
  if (mc.n_samples < 1) throw ContractViolation("n_samples must be >= 1");
  const auto samples = propagate(model, Rng(mc.seed), mc.n_samples, mc.workers);
  auto rep = chain_from_samples(samples, order, ranges);
  rep.mc = McSummary{mc.seed, mc.n_samples};
  return rep;
}

}  // namespace axd
