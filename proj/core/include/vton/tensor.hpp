#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "vton/common.hpp"

namespace vton {

/// Dense row-major nd-array of Real. Small by design: shapes up to 4-d are
/// all this project needs (images HxWx3, latents CxHxW, token matrices NxD).
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape);
  Tensor(std::vector<int> shape, std::vector<Real> data);

  static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }
  static Tensor full(std::vector<int> shape, Real value);
  static Tensor scalar(Real value) { return Tensor({1}, {value}); }

  const std::vector<int>& shape() const { return shape_; }
  int ndim() const { return static_cast<int>(shape_.size()); }
  int size(int axis) const { return shape_.at(static_cast<size_t>(axis)); }
  int64_t numel() const { return static_cast<int64_t>(data_.size()); }
  bool empty() const { return data_.empty(); }

  Real* data() { return data_.data(); }
  const Real* data() const { return data_.data(); }
  std::vector<Real>& vec() { return data_; }
  const std::vector<Real>& vec() const { return data_; }

  Real& operator[](int64_t i) { return data_[static_cast<size_t>(i)]; }
  Real operator[](int64_t i) const { return data_[static_cast<size_t>(i)]; }

  Real& at(int i, int j) { return data_[static_cast<size_t>(i) * shape_[1] + j]; }
  Real at(int i, int j) const { return data_[static_cast<size_t>(i) * shape_[1] + j]; }
  Real& at(int i, int j, int k) {
    return data_[(static_cast<size_t>(i) * shape_[1] + j) * shape_[2] + k];
  }
  Real at(int i, int j, int k) const {
    return data_[(static_cast<size_t>(i) * shape_[1] + j) * shape_[2] + k];
  }

  /// Same data, new shape; element count must match.
  Tensor reshaped(std::vector<int> shape) const;

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  bool all_finite() const;

  Tensor& operator+=(const Tensor& other);
  Tensor& operator*=(Real s);

 private:
  std::vector<int> shape_;
  std::vector<Real> data_;
};

/// Throws ShapeError unless both operands have identical shapes.
void check_same_shape(const Tensor& a, const Tensor& b, const char* what);

}  // namespace vton
