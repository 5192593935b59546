#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <numeric>
#include <vector>

#include "precip/common.hpp"

namespace precip {

// Dense row-major tensor of doubles. All in-memory math runs in double;
// on-disk payloads may be float32 (see tensor_io.hpp).
class Tensor {
 public:
  Tensor() = default;

  explicit Tensor(std::vector<int64_t> shape, double fill = 0.0)
      : shape_(std::move(shape)) {
    int64_t n = 1;
    for (int64_t d : shape_) {
      if (d <= 0) throw ValidationError("tensor dimensions must be positive");
      n *= d;
    }
    data_.assign(static_cast<size_t>(n), fill);
  }

  static Tensor zeros_like(const Tensor& t) { return Tensor(t.shape_); }

  int64_t size() const { return static_cast<int64_t>(data_.size()); }
  int ndim() const { return static_cast<int>(shape_.size()); }
  int64_t dim(int i) const { return shape_[static_cast<size_t>(i)]; }
  const std::vector<int64_t>& shape() const { return shape_; }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator[](int64_t i) { return data_[static_cast<size_t>(i)]; }
  double operator[](int64_t i) const { return data_[static_cast<size_t>(i)]; }

  double& at(int64_t i, int64_t j) {
    assert(ndim() == 2);
    return data_[static_cast<size_t>(i * shape_[1] + j)];
  }
  double at(int64_t i, int64_t j) const {
    assert(ndim() == 2);
    return data_[static_cast<size_t>(i * shape_[1] + j)];
  }
  double& at(int64_t i, int64_t j, int64_t k) {
    assert(ndim() == 3);
    return data_[static_cast<size_t>((i * shape_[1] + j) * shape_[2] + k)];
  }
  double at(int64_t i, int64_t j, int64_t k) const {
    assert(ndim() == 3);
    return data_[static_cast<size_t>((i * shape_[1] + j) * shape_[2] + k)];
  }
  double& at(int64_t i, int64_t j, int64_t k, int64_t l) {
    assert(ndim() == 4);
    return data_[static_cast<size_t>(
        ((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l)];
  }
  double at(int64_t i, int64_t j, int64_t k, int64_t l) const {
    assert(ndim() == 4);
    return data_[static_cast<size_t>(
        ((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l)];
  }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  Tensor reshaped(std::vector<int64_t> shape) const {
    Tensor out = *this;
    int64_t n = 1;
    for (int64_t d : shape) n *= d;
    if (n != size()) throw ValidationError("reshape changes element count");
    out.shape_ = std::move(shape);
    return out;
  }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  double min() const {
    double m = data_.empty() ? 0.0 : data_[0];
    for (double v : data_) m = std::fmin(m, v);
    return m;
  }
  double max() const {
    double m = data_.empty() ? 0.0 : data_[0];
    for (double v : data_) m = std::fmax(m, v);
    return m;
  }
  double sum() const {
    double s = 0.0;
    for (double v : data_) s += v;
    return s;
  }
  double mean() const { return data_.empty() ? 0.0 : sum() / size(); }

 private:
  std::vector<int64_t> shape_;
  std::vector<double> data_;
};

inline void require_same_shape(const Tensor& a, const Tensor& b,
                               const char* what) {
  if (!a.same_shape(b))
    throw ValidationError(std::string("shape mismatch: ") + what);
}

}  // namespace precip
