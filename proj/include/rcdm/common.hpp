#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <array>
#include <stdexcept>
#include <string>

namespace rcdm {

using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

// Thrown when a deformation state violates det F > 0 (or F <= 0 in 1D).
struct InvalidDeformation : std::domain_error {
  using std::domain_error::domain_error;
};

// Thrown for out-of-domain internal-variable or parameter values.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Thrown when a query leaves the convexification grid; the scenario must
// widen [F_min, F_max].
struct GridRangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Malformed scenario / scheme / CSV input.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite intermediate or failed solve.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fourth-order tensor in full 3x3x3x3 storage.  Only the handful of
// operations the assembly needs are provided.
class Tensor4 {
 public:
  Tensor4() { data_.fill(0.0); }

  double& operator()(int i, int j, int k, int l) {
    return data_[((i * 3 + j) * 3 + k) * 3 + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return data_[((i * 3 + j) * 3 + k) * 3 + l];
  }

  Tensor4& operator+=(const Tensor4& o) {
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += o.data_[n];
    return *this;
  }
  Tensor4& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

  const std::array<double, 81>& raw() const { return data_; }
  std::array<double, 81>& raw() { return data_; }

 private:
  std::array<double, 81> data_;
};

}  // namespace rcdm
