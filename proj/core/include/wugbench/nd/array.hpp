#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace wugbench::nd {

using Shape = std::vector<std::size_t>;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;

std::string shape_string(const Shape& shape);
std::size_t shape_size(const Shape& shape);

// SIMD-aligned storage. Eigen's vectorized reductions peel a head whose
// length depends on the address, so unaligned buffers make sums round
// differently from one allocation to the next.
using Storage = std::vector<double, Eigen::aligned_allocator<double>>;

// Dense row-major array of doubles. Rank 0 is a scalar, rank 1 a vector and
// rank 2 a matrix; the graph ops treat a rank-1 array of length n as a single
// row [1, n] wherever a matrix is expected.
class Array {
 public:
  Array() = default;
  explicit Array(Shape shape, double fill = 0.0);
  Array(Shape shape, std::vector<double> data);
  Array(Shape shape, Storage data);

  static Array scalar(double value);
  static Array vector(std::vector<double> values);
  static Array matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  static Array matrix(std::initializer_list<std::initializer_list<double>> rows);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  // Matrix view: rank 0 -> 1x1, rank 1 -> 1xn, rank 2 -> rows x cols.
  std::size_t rows() const noexcept;
  std::size_t cols() const noexcept;

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  std::vector<double> to_vector() const { return {data_.begin(), data_.end()}; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }
  double item() const;

  MatrixMap matrix() { return {data_.data(), static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(cols())}; }
  ConstMatrixMap matrix() const {
    return {data_.data(), static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(cols())};
  }

  void fill(double value);
  Array reshaped(Shape shape) const;

  friend bool operator==(const Array& a, const Array& b) = default;

 private:
  Shape shape_;
  Storage data_;
};

}  // namespace wugbench::nd
