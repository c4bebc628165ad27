// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace hyvar {

template <typename Scalar>
struct QuadratureRule {
  std::vector<Scalar> nodes;
  std::vector<Scalar> weights;
};

/// Gauss–Hermite rule for the standard normal weight: sum_i w_i h(x_i) ~ E h(Z), Z ~ N(0, 1).
/// Golub–Welsch: nodes are eigenvalues of the probabilists' Hermite Jacobi matrix, weights the
/// squared first components of its normalized eigenvectors. Exact for polynomials of degree < 2n.
template <typename Scalar>
QuadratureRule<Scalar> gauss_hermite(int n) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat J = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    J(k - 1, k) = J(k, k - 1) = std::sqrt(static_cast<Scalar>(k));
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(J);
  QuadratureRule<Scalar> rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Scalar v0 = eig.eigenvectors()(0, i);
    rule.nodes[static_cast<std::size_t>(i)] = eig.eigenvalues()(i);
    rule.weights[static_cast<std::size_t>(i)] = v0 * v0;
  }
  return rule;
}

/// Tanh–sinh (double-exponential) quadrature of h over [a, b]. Step halving until two
/// successive levels agree to `tol` (relative to the integral's magnitude, floor 1).
/// Robust to algebraic endpoint behavior such as |t - a|^q.
template <typename Scalar, typename Fn>
Scalar tanh_sinh(Fn&& h, Scalar a, Scalar b, Scalar tol = Scalar(1e-14), int max_level = 10) {
  const Scalar half = (b - a) / 2;
  constexpr Scalar kHalfPi = std::numbers::pi_v<Scalar> / 2;
  constexpr Scalar kTmax = Scalar(4);

  // Contribution of abscissa t; uses the complement 1 - tanh to keep endpoint nodes distinct.
  auto term = [&](Scalar t) {
    const Scalar u = kHalfPi * std::sinh(t);
    const Scalar cu = std::cosh(u);
    const Scalar w = kHalfPi * std::cosh(t) / (cu * cu);
    const Scalar gap = half / (std::exp(2 * std::abs(u)) + 1) * 2;  // half * (1 - tanh|u|)
    if (gap <= Scalar(0)) return Scalar(0);
    const Scalar x = u >= 0 ? b - gap : a + gap;
    return w * h(x);
  };

  Scalar step(1);
  Scalar sum = term(Scalar(0));
  for (Scalar t = step; t <= kTmax; t += step) sum += term(t) + term(-t);
  Scalar estimate = half * step * sum;
  for (int level = 1; level <= max_level; ++level) {
    step /= 2;
    for (Scalar t = step; t <= kTmax; t += 2 * step) sum += term(t) + term(-t);
    const Scalar next = half * step * sum;
    const Scalar scale = std::max(Scalar(1), std::abs(next));
    if (level >= 3 && std::abs(next - estimate) <= tol * scale) return next;
    estimate = next;
  }
  return estimate;
}

}  // namespace hyvar
