#include "wugbench/nd/array.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "wugbench/error.hpp"

namespace wugbench::nd {

std::string shape_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

Array::Array(Shape shape, double fill) : shape_(std::move(shape)), data_(shape_size(shape_), fill) {}

Array::Array(Shape shape, std::vector<double> data) : Array(std::move(shape), Storage(data.begin(), data.end())) {}

Array::Array(Shape shape, Storage data) : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_size(shape_) != data_.size()) {
    throw ShapeError("array of shape " + shape_string(shape_) + " cannot hold " +
                     std::to_string(data_.size()) + " values");
  }
}

Array Array::scalar(double value) { return Array(Shape{}, std::vector<double>{value}); }

Array Array::vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Array(Shape{n}, std::move(values));
}

Array Array::matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
  return Array(Shape{rows, cols}, std::move(values));
}

Array Array::matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("ragged matrix literal");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Array(Shape{r, c}, std::move(data));
}

std::size_t Array::rows() const noexcept {
  if (shape_.size() < 2) return 1;
  return shape_size(Shape(shape_.begin(), shape_.end() - 1));
}

std::size_t Array::cols() const noexcept {
  if (shape_.empty()) return 1;
  return shape_.back();
}

double Array::item() const {
  if (data_.size() != 1) {
    throw ShapeError("item() on array of shape " + shape_string(shape_));
  }
  return data_[0];
}

void Array::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

Array Array::reshaped(Shape shape) const {
  if (shape_size(shape) != data_.size()) {
    throw ShapeError("cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
  }
  return Array(std::move(shape), data_);
}

}  // namespace wugbench::nd
