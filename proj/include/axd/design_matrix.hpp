#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "axd/errors.hpp"

namespace axd {

/// Dense m x n sensitivity matrix, A(i, j) = dFR_i / dDP_j. Entries are
/// finite; rows index FRs and columns index DPs.
class DesignMatrix {
 public:
  DesignMatrix() = default;

  DesignMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (!std::isfinite(fill)) throw Error("design matrix entries must be finite");
  }

  explicit DesignMatrix(const std::vector<std::vector<double>>& rows) {
    rows_ = rows.size();
    cols_ = rows.empty() ? 0 : rows.front().size();
    data_.reserve(rows_ * cols_);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols_)
        throw Error("design matrix row " + std::to_string(i) + " has " +
                    std::to_string(rows[i].size()) + " entries, expected " +
                    std::to_string(cols_));
      for (double v : rows[i]) {
        if (!std::isfinite(v)) throw Error("design matrix entries must be finite");
        data_.push_back(v);
      }
    }
  }

  DesignMatrix(std::initializer_list<std::initializer_list<double>> rows)
      : DesignMatrix(std::vector<std::vector<double>>(rows.begin(), rows.end())) {}

  static DesignMatrix identity(std::size_t n) {
    DesignMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  double at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw ContractViolation("design matrix index out of range");
    return (*this)(r, c);
  }

  std::vector<double> row(std::size_t r) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
  }

  friend bool operator==(const DesignMatrix&, const DesignMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Boolean dependency structure: entry (i, j) is true when FR i depends on DP j.
class DependencyMatrix {
 public:
  DependencyMatrix() = default;
  DependencyMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  DependencyMatrix(std::initializer_list<std::initializer_list<int>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error("dependency matrix rows must have equal length");
      for (int v : r) data_.push_back(v != 0 ? 1 : 0);
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  bool operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c] != 0; }
  void set(std::size_t r, std::size_t c, bool v) { data_[r * cols_ + c] = v ? 1 : 0; }

  friend bool operator==(const DependencyMatrix&, const DependencyMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<unsigned char> data_;
};

/// Entry is true iff |A_ij| > epsilon.
inline DependencyMatrix binarize(const DesignMatrix& matrix, double epsilon) {
  if (!(epsilon >= 0.0)) throw ContractViolation("epsilon must be >= 0");
  DependencyMatrix deps(matrix.rows(), matrix.cols());
  for (std::size_t i = 0; i < matrix.rows(); ++i)
    for (std::size_t j = 0; j < matrix.cols(); ++j)
      deps.set(i, j, std::abs(matrix(i, j)) > epsilon);
  return deps;
}

}  // namespace axd
