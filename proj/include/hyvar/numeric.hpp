// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <type_traits>

#include <Eigen/Core>

namespace hyvar {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

using Vector2d = Vector2<double>;
using Matrix2d = Matrix2<double>;

/// x^e with the convention 0^0 = 1, so that degree-0 factors are neutral.
template <typename Scalar>
inline Scalar pow0(Scalar x, Scalar e) {
  if (e == Scalar(0)) return Scalar(1);
  return std::pow(x, e);
}

/// x^k for a nonnegative integer k by repeated squaring; exact for small integer data.
template <typename Scalar>
inline Scalar ipow(Scalar x, unsigned k) {
  Scalar result(1);
  while (k != 0) {
    if (k & 1u) result *= x;
    x *= x;
    k >>= 1u;
  }
  return result;
}

/// Neumaier's variant of Kahan summation. Order-dependent like any float sum, but the
/// accumulated error stays O(eps) independent of the number of terms.
template <typename Scalar>
class KahanSum {
 public:
  KahanSum() = default;
  explicit KahanSum(Scalar init) : sum_(init) {}

  KahanSum& operator+=(Scalar x) {
    const Scalar t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  KahanSum& operator+=(const KahanSum& other) {
    *this += other.sum_;
    *this += other.comp_;
    return *this;
  }

  [[nodiscard]] Scalar value() const { return sum_ + comp_; }

 private:
  Scalar sum_{0};
  Scalar comp_{0};
};

}  // namespace hyvar
