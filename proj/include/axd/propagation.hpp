#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "axd/design_matrix.hpp"
#include "axd/distributions.hpp"
#include "axd/errors.hpp"
#include "axd/parallel.hpp"
#include "axd/rng.hpp"
#include "axd/sample_set.hpp"
#include "axd/tank.hpp"

namespace axd {

/// FR = A * DP + noise, with DP_j drawn from dp_pdfs[j] and noise_i from
/// noise_pdfs[i] when present. noise_pdfs is either empty or has one
/// (possibly absent) entry per FR row.
struct LinearModel {
  DesignMatrix matrix;
  std::vector<Pdf> dp_pdfs;
  std::vector<std::optional<Pdf>> noise_pdfs;
};

using ModelFunction = std::function<std::vector<double>(std::span<const double>)>;

/// Arbitrary DP -> FR map; dp_pdfs drive sampling when the model is propagated.
struct BlackBoxModel {
  ModelFunction eval;
  std::vector<Pdf> dp_pdfs;
};

/// Tank simulation; each trial is one cycle.
struct ScenarioModel {
  TankConfig config;
};

using ForwardModel = std::variant<LinearModel, BlackBoxModel, ScenarioModel>;

inline std::vector<std::string> check_linear_model(const LinearModel& m) {
  std::vector<std::string> out;
  if (m.matrix.cols() != m.dp_pdfs.size())
    out.push_back("matrix has " + std::to_string(m.matrix.cols()) + " columns but " +
                  std::to_string(m.dp_pdfs.size()) + " DP pdfs");
  if (!m.noise_pdfs.empty() && m.noise_pdfs.size() != m.matrix.rows())
    out.push_back("matrix has " + std::to_string(m.matrix.rows()) + " rows but " +
                  std::to_string(m.noise_pdfs.size()) + " noise entries");
  return out;
}

namespace detail {

inline void linear_trial(const LinearModel& m, Rng& r, std::vector<double>& dp,
                         std::span<double> out) {
  for (std::size_t j = 0; j < dp.size(); ++j) dp[j] = sample(m.dp_pdfs[j], r);
  for (std::size_t i = 0; i < m.matrix.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dp.size(); ++j) acc += m.matrix(i, j) * dp[j];
    out[i] = acc;
  }
  for (std::size_t i = 0; i < m.noise_pdfs.size(); ++i)
    if (m.noise_pdfs[i]) out[i] += sample(*m.noise_pdfs[i], r);
}

}  // namespace detail

/// Draws n trials of the model. Trial k uses rng.substream(k), so the result
/// is identical for every worker count.
inline SampleSet propagate(const ForwardModel& model, const Rng& rng, std::size_t n,
                           unsigned workers = 1) {
  if (n < 1) throw ContractViolation("propagate requires n >= 1");

  if (const auto* lin = std::get_if<LinearModel>(&model)) {
    if (auto problems = check_linear_model(*lin); !problems.empty())
      throw ContractViolation("inconsistent linear model: " + problems.front());
    SampleSet out(SampleSet::default_columns(lin->matrix.rows()), n);
    detail::for_slices(n, workers, [&](std::size_t begin, std::size_t end) {
      std::vector<double> dp(lin->dp_pdfs.size());
      for (std::size_t k = begin; k < end; ++k) {
        Rng r = rng.substream(k);
        detail::linear_trial(*lin, r, dp, out.row(k));
      }
    });
    return out;
  }

  if (const auto* box = std::get_if<BlackBoxModel>(&model)) {
    auto run = [&](std::size_t k) {
      Rng r = rng.substream(k);
      std::vector<double> dp(box->dp_pdfs.size());
      for (std::size_t j = 0; j < dp.size(); ++j) dp[j] = sample(box->dp_pdfs[j], r);
      std::vector<double> fr;
      try {
        fr = box->eval(dp);
      } catch (const std::exception& e) {
        throw ModelError("trial " + std::to_string(k) + ": " + e.what());
      }
      for (double v : fr)
        if (!std::isfinite(v)) throw ModelError("trial " + std::to_string(k) + ": non-finite output");
      return fr;
    };
    const auto first = run(0);
    SampleSet out(SampleSet::default_columns(first.size()), n);
    std::copy(first.begin(), first.end(), out.row(0).begin());
    detail::for_slices(n - 1, workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin + 1; k < end + 1; ++k) {
        const auto fr = run(k);
        if (fr.size() != out.cols())
          throw ModelError("trial " + std::to_string(k) + ": output width changed");
        std::copy(fr.begin(), fr.end(), out.row(k).begin());
      }
    });
    return out;
  }

  TankConfig config = std::get<ScenarioModel>(model).config;
  config.cycles = n;
  return simulate_tank(config, rng, workers);
}

/// Central-difference sensitivities A_ij = (FR_i(x + h e_j) - FR_i(x - h e_j)) / 2h.
inline DesignMatrix estimate_design_matrix(const ModelFunction& eval,
                                           std::span<const double> dp_nominals, double step) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw ContractViolation("finite-difference step must be > 0");
  auto call = [&](std::span<const double> x) {
    auto fr = eval(x);
    for (double v : fr)
      if (!std::isfinite(v)) throw ModelError("model returned a non-finite value");
    return fr;
  };
  const std::size_t n = dp_nominals.size();
  const std::size_t m = call(dp_nominals).size();
  DesignMatrix a(m, n);
  std::vector<double> x(dp_nominals.begin(), dp_nominals.end());
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = dp_nominals[j] + step;
    const auto plus = call(x);
    x[j] = dp_nominals[j] - step;
    const auto minus = call(x);
    x[j] = dp_nominals[j];
    if (plus.size() != m || minus.size() != m) throw ModelError("model output width changed");
    for (std::size_t i = 0; i < m; ++i) {
      const double d = (plus[i] - minus[i]) / (2.0 * step);
      if (!std::isfinite(d)) throw ModelError("non-finite finite-difference quotient");
      a(i, j) = d;
    }
  }
  return a;
}

inline DesignMatrix estimate_design_matrix(const BlackBoxModel& model,
                                           std::span<const double> dp_nominals, double step) {
  return estimate_design_matrix(model.eval, dp_nominals, step);
}

}  // namespace axd
