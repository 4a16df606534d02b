#include "vton/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace vton {

namespace {
int64_t shape_numel(const std::vector<int>& shape) {
  int64_t n = 1;
  for (int d : shape) {
    if (d < 0) throw ShapeError("negative dimension in tensor shape");
    n *= d;
  }
  return n;
}
}  // namespace

Tensor::Tensor(std::vector<int> shape)
    : shape_(std::move(shape)), data_(static_cast<size_t>(shape_numel(shape_)), Real(0)) {}

Tensor::Tensor(std::vector<int> shape, std::vector<Real> data) : shape_(std::move(shape)) {
  if (shape_numel(shape_) != static_cast<int64_t>(data.size()))
    throw ShapeError("tensor data size does not match shape");
  data_ = std::move(data);
}

Tensor Tensor::full(std::vector<int> shape, Real value) {
  Tensor t(std::move(shape));
  std::fill(t.data_.begin(), t.data_.end(), value);
  return t;
}

Tensor Tensor::reshaped(std::vector<int> shape) const {
  if (shape_numel(shape) != numel()) throw ShapeError("reshape changes element count");
  Tensor t;
  t.shape_ = std::move(shape);
  t.data_ = data_;
  return t;
}

bool Tensor::all_finite() const {
  for (Real v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

Tensor& Tensor::operator+=(const Tensor& other) {
  check_same_shape(*this, other, "operator+=");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Tensor& Tensor::operator*=(Real s) {
  for (Real& v : data_) v *= s;
  return *this;
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape() == b.shape()) return;
  std::ostringstream os;
  os << what << ": shape mismatch [";
  for (int d : a.shape()) os << d << " ";
  os << "] vs [";
  for (int d : b.shape()) os << d << " ";
  os << "]";
  throw ShapeError(os.str());
}

}  // namespace vton
