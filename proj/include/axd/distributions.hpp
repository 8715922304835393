#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "axd/errors.hpp"
#include "axd/rng.hpp"

namespace axd {

struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
  friend bool operator==(const Uniform&, const Uniform&) = default;
};

struct Normal {
  double mu = 0.0;
  double sigma = 1.0;
  friend bool operator==(const Normal&, const Normal&) = default;
};

struct Triangular {
  double lo = 0.0;
  double mode = 0.5;
  double hi = 1.0;
  friend bool operator==(const Triangular&, const Triangular&) = default;
};

/// Distribution backed by observed values.
///
/// cdf() and interval probabilities count samples exactly. density() reads a
/// fixed-bin histogram whose bin width follows the Freedman-Diaconis rule
/// (2 * IQR * n^(-1/3)), falling back to a single bin over [min, max].
class Empirical {
 public:
  explicit Empirical(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw Error("empirical distribution needs at least one sample");
    for (double v : samples_) {
      if (!std::isfinite(v)) throw Error("empirical samples must be finite");
    }
    sorted_ = samples_;
    std::sort(sorted_.begin(), sorted_.end());
    build_histogram();
  }

  const std::vector<double>& samples() const noexcept { return samples_; }
  const std::vector<double>& sorted() const noexcept { return sorted_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double min() const noexcept { return sorted_.front(); }
  double max() const noexcept { return sorted_.back(); }
  std::size_t bin_count() const noexcept { return counts_.size(); }

  double cdf(double x) const noexcept {
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
  }

  double density(double x) const noexcept {
    if (x < min() || x > max()) return 0.0;
    if (bin_width_ == 0.0) return std::numeric_limits<double>::infinity();  // point mass
    auto idx = static_cast<std::size_t>((x - min()) / bin_width_);
    idx = std::min(idx, counts_.size() - 1);
    return static_cast<double>(counts_[idx]) /
           (static_cast<double>(sorted_.size()) * bin_width_);
  }

  friend bool operator==(const Empirical& a, const Empirical& b) {
    return a.samples_ == b.samples_;
  }

 private:
  static constexpr std::size_t kMaxBins = 10000;

  // Linear-interpolated quantile of the sorted sample.
  double quantile(double q) const {
    const double pos = q * static_cast<double>(sorted_.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= sorted_.size()) return sorted_.back();
    const double frac = pos - static_cast<double>(i);
    return sorted_[i] + frac * (sorted_[i + 1] - sorted_[i]);
  }

  void build_histogram() {
    const double range = max() - min();
    if (range == 0.0) {
      counts_.assign(1, sorted_.size());
      bin_width_ = 0.0;
      return;
    }
    const double iqr = quantile(0.75) - quantile(0.25);
    const double fd = 2.0 * iqr * std::cbrt(1.0 / static_cast<double>(sorted_.size()));
    std::size_t bins = 1;
    if (fd > 0.0 && std::isfinite(fd)) {
      bins = static_cast<std::size_t>(std::ceil(range / fd));
      bins = std::clamp<std::size_t>(bins, 1, kMaxBins);
    }
    bin_width_ = range / static_cast<double>(bins);
    counts_.assign(bins, 0);
    for (double v : sorted_) {
      auto idx = static_cast<std::size_t>((v - min()) / bin_width_);
      counts_[std::min(idx, bins - 1)]++;
    }
  }

  std::vector<double> samples_;
  std::vector<double> sorted_;
  std::vector<std::size_t> counts_;
  double bin_width_ = 0.0;
};

/// Probability model for a system range or a DP uncertainty.
using Pdf = std::variant<Uniform, Normal, Triangular, Empirical>;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// Returns a description of the first broken parameter invariant, if any.
inline std::optional<std::string> check_pdf(const Pdf& pdf) {
  return std::visit(
      overloaded{
          [](const Uniform& u) -> std::optional<std::string> {
            if (!std::isfinite(u.lo) || !std::isfinite(u.hi)) return "uniform bounds must be finite";
            if (!(u.lo < u.hi)) return "uniform requires lo < hi";
            return std::nullopt;
          },
          [](const Normal& n) -> std::optional<std::string> {
            if (!std::isfinite(n.mu) || !std::isfinite(n.sigma)) return "normal parameters must be finite";
            if (!(n.sigma > 0.0)) return "normal requires sigma > 0";
            return std::nullopt;
          },
          [](const Triangular& t) -> std::optional<std::string> {
            if (!std::isfinite(t.lo) || !std::isfinite(t.mode) || !std::isfinite(t.hi))
              return "triangular parameters must be finite";
            if (!(t.lo < t.hi)) return "triangular requires lo < hi";
            if (!(t.lo <= t.mode && t.mode <= t.hi)) return "triangular requires lo <= mode <= hi";
            return std::nullopt;
          },
          [](const Empirical&) -> std::optional<std::string> { return std::nullopt; },
      },
      pdf);
}

inline double density(const Pdf& pdf, double x) {
  return std::visit(
      overloaded{
          [x](const Uniform& u) {
            return (x >= u.lo && x <= u.hi) ? 1.0 / (u.hi - u.lo) : 0.0;
          },
          [x](const Normal& n) {
            const double z = (x - n.mu) / n.sigma;
            return std::exp(-0.5 * z * z) / (n.sigma * std::sqrt(2.0 * std::numbers::pi));
          },
          [x](const Triangular& t) {
            if (x < t.lo || x > t.hi) return 0.0;
            const double width = t.hi - t.lo;
            if (x < t.mode) return 2.0 * (x - t.lo) / (width * (t.mode - t.lo));
            if (x == t.mode) return 2.0 / width;
            return 2.0 * (t.hi - x) / (width * (t.hi - t.mode));
          },
          [x](const Empirical& e) { return e.density(x); },
      },
      pdf);
}

/// Normal CDF uses the C library erfc, which keeps full relative accuracy in
/// both tails (absolute error far below 1e-9).
inline double cdf(const Pdf& pdf, double x) {
  return std::visit(
      overloaded{
          [x](const Uniform& u) {
            if (x <= u.lo) return 0.0;
            if (x >= u.hi) return 1.0;
            return (x - u.lo) / (u.hi - u.lo);
          },
          [x](const Normal& n) {
            return 0.5 * std::erfc(-(x - n.mu) / (n.sigma * std::numbers::sqrt2));
          },
          [x](const Triangular& t) {
            if (x <= t.lo) return 0.0;
            if (x >= t.hi) return 1.0;
            const double width = t.hi - t.lo;
            if (x <= t.mode) return (x - t.lo) * (x - t.lo) / (width * (t.mode - t.lo));
            return 1.0 - (t.hi - x) * (t.hi - x) / (width * (t.hi - t.mode));
          },
          [x](const Empirical& e) { return e.cdf(x); },
      },
      pdf);
}

/// Probability mass in [lo, hi], computed as cdf(hi) - cdf(lo).
inline double interval_probability(const Pdf& pdf, double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi)
    throw ContractViolation("interval_probability requires lo <= hi");
  const double p = cdf(pdf, hi) - cdf(pdf, lo);
  return std::clamp(p, 0.0, 1.0);
}

/// Closed support; infinite for the normal family.
inline std::pair<double, double> support(const Pdf& pdf) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      overloaded{
          [](const Uniform& u) { return std::pair{u.lo, u.hi}; },
          [](const Normal&) { return std::pair{-inf, inf}; },
          [](const Triangular& t) { return std::pair{t.lo, t.hi}; },
          [](const Empirical& e) { return std::pair{e.min(), e.max()}; },
      },
      pdf);
}

/// Draws one value. Normal draws use the Marsaglia polar method and discard
/// the second variate so each call consumes a self-contained run of the
/// stream.
inline double sample(const Pdf& pdf, Rng& rng) {
  return std::visit(
      overloaded{
          [&rng](const Uniform& u) { return u.lo + (u.hi - u.lo) * rng.uniform01(); },
          [&rng](const Normal& n) {
            double a = 0.0, b = 0.0, s = 0.0;
            do {
              a = 2.0 * rng.uniform01() - 1.0;
              b = 2.0 * rng.uniform01() - 1.0;
              s = a * a + b * b;
            } while (s >= 1.0 || s == 0.0);
            return n.mu + n.sigma * a * std::sqrt(-2.0 * std::log(s) / s);
          },
          [&rng](const Triangular& t) {
            const double u = rng.uniform01();
            const double width = t.hi - t.lo;
            const double split = (t.mode - t.lo) / width;
            if (u < split) return t.lo + std::sqrt(u * width * (t.mode - t.lo));
            return t.hi - std::sqrt((1.0 - u) * width * (t.hi - t.mode));
          },
          [&rng](const Empirical& e) {
            const auto n = static_cast<std::uint64_t>(e.size());
            // Lemire-style bounded draw; bias is negligible for sample counts < 2^32.
            const auto idx = static_cast<std::size_t>(
                (static_cast<unsigned __int128>(rng()) * n) >> 64);
            return e.samples()[idx];
          },
      },
      pdf);
}

inline Pdf from_samples(std::span<const double> values) {
  return Empirical(std::vector<double>(values.begin(), values.end()));
}

/// Point mass, used for DPs without a declared uncertainty.
inline Pdf point_mass(double value) { return Empirical({value}); }

inline const char* pdf_kind(const Pdf& pdf) {
  return std::visit(overloaded{
                        [](const Uniform&) { return "uniform"; },
                        [](const Normal&) { return "normal"; },
                        [](const Triangular&) { return "triangular"; },
                        [](const Empirical&) { return "empirical"; },
                    },
                    pdf);
}

/// Short human-readable summary, e.g. "normal(mu=65, sigma=0.5)".
inline std::string describe(const Pdf& pdf) {
  char buf[160];
  std::visit(overloaded{
                 [&](const Uniform& u) {
                   std::snprintf(buf, sizeof buf, "uniform(lo=%.10g, hi=%.10g)", u.lo, u.hi);
                 },
                 [&](const Normal& n) {
                   std::snprintf(buf, sizeof buf, "normal(mu=%.10g, sigma=%.10g)", n.mu, n.sigma);
                 },
                 [&](const Triangular& t) {
                   std::snprintf(buf, sizeof buf, "triangular(lo=%.10g, mode=%.10g, hi=%.10g)",
                                 t.lo, t.mode, t.hi);
                 },
                 [&](const Empirical& e) {
                   std::snprintf(buf, sizeof buf, "empirical(n=%zu, min=%.10g, max=%.10g)",
                                 e.size(), e.min(), e.max());
                 },
             },
             pdf);
  return buf;
}

}  // namespace axd
