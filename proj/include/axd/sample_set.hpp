#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "axd/errors.hpp"

namespace axd {

/// Rectangular table of achieved FR values, one row per trial.
class SampleSet {
 public:
  SampleSet() = default;
  explicit SampleSet(std::vector<std::string> columns, std::size_t rows = 0)
      : columns_(std::move(columns)), data_(rows * columns_.size(), 0.0) {}

  static std::vector<std::string> default_columns(std::size_t count) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < count; ++i) ids.push_back("FR" + std::to_string(i + 1));
    return ids;
  }

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  void rename(std::vector<std::string> columns) {
    if (columns.size() != columns_.size())
      throw ContractViolation("column count mismatch in SampleSet::rename");
    columns_ = std::move(columns);
  }

  std::size_t cols() const noexcept { return columns_.size(); }
  std::size_t rows() const noexcept { return columns_.empty() ? 0 : data_.size() / columns_.size(); }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols(), cols()}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols(), cols()}; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

  std::vector<double> column(std::size_t c) const {
    std::vector<double> out(rows());
    for (std::size_t r = 0; r < rows(); ++r) out[r] = (*this)(r, c);
    return out;
  }

  void append(std::span<const double> values) {
    if (values.size() != cols()) throw ContractViolation("row width mismatch");
    data_.insert(data_.end(), values.begin(), values.end());
  }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  /// CSV with a header of column ids; values use 17 significant digits.
  void write_csv(std::ostream& os) const {
    for (std::size_t c = 0; c < cols(); ++c) os << (c ? "," : "") << columns_[c];
    os << '\n';
    char buf[32];
    for (std::size_t r = 0; r < rows(); ++r) {
      for (std::size_t c = 0; c < cols(); ++c) {
        std::snprintf(buf, sizeof buf, "%.17g", (*this)(r, c));
        os << (c ? "," : "") << buf;
      }
      os << '\n';
    }
  }

  friend bool operator==(const SampleSet&, const SampleSet&) = default;

 private:
  std::vector<std::string> columns_;
  std::vector<double> data_;
};

}  // namespace axd
