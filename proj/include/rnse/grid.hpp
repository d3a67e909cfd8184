// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef RNSE_GRID_HPP_
#define RNSE_GRID_HPP_

#include <complex>
#include <cstddef>
#include <vector>

namespace rnse {

// Dense row-major frames-by-bins array. The value type is double or
// std::complex<double> throughout the toolkit.
template <typename T>
class BasicGrid {
 public:
  BasicGrid() = default;
  BasicGrid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  T* row(std::size_t r) { return data_.data() + r * cols_; }
  const T* row(std::size_t r) const { return data_.data() + r * cols_; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  std::vector<T>& raw() { return data_; }
  const std::vector<T>& raw() const { return data_; }

  template <typename U>
  bool same_shape(const BasicGrid<U>& other) const {
    return rows_ == other.rows() && cols_ == other.cols();
  }

  void fill(T value) { data_.assign(data_.size(), value); }

  bool operator==(const BasicGrid&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Grid = BasicGrid<double>;
using ComplexGrid = BasicGrid<std::complex<double>>;

}  // namespace rnse

#endif  // RNSE_GRID_HPP_
