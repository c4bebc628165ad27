// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "hyvar/numeric.hpp"
#include "hyvar/schemes.hpp"
#include "hyvar/step_function.hpp"

namespace hyvar {

/// Lengths describing one overlapping pair (I1, I2) = ((a0, a1], (b0, b1]).
template <typename Scalar>
struct PairGeometry {
  Scalar len1;
  Scalar len2;
  Scalar overlap;
  Scalar diff1;  // |I1 \ I2|
  Scalar diff2;  // |I2 \ I1|
  Scalar end;    // a1 v b1, the pair's breakpoint

  static PairGeometry of(Scalar a0, Scalar a1, Scalar b0, Scalar b1) {
    const Scalar zero(0);
    // Set differences are measured as the uncovered margins on each side, which keeps
    // them exactly zero when endpoints coincide.
    return {a1 - a0,
            b1 - b0,
            std::min(a1, b1) - std::max(a0, b0),
            std::max(zero, b0 - a0) + std::max(zero, a1 - b1),
            std::max(zero, a0 - b0) + std::max(zero, b1 - a1),
            std::max(a1, b1)};
  }
};

/// Cumulative step function of term(geometry) over the overlapping pairs, with breakpoints at
/// t_i v t_j, scaled by `factor`. The sweep emits pairs in nondecreasing order of t_i v t_j.
template <typename Term>
StepFunction<double> pair_statistic(const ObservationScheme& scheme, double factor, Term&& term) {
  const auto& a = scheme.times1();
  const auto& b = scheme.times2();
  StepAccumulator<double> acc;
  acc.reserve(a.size() + b.size());
  sweep_overlaps(a, b, scheme.horizon(), [&](std::size_t i, std::size_t j) {
    const auto g = PairGeometry<double>::of(a[i - 1], a[i], b[j - 1], b[j]);
    acc.add(g.end, term(g));
  });
  return std::move(acc).finish(factor);
}

/// G_p^{(l),n}(t) = rate^{p/2-1} sum_{t_i <= t} |I_i|^{p/2}.
StepFunction<double> G_onedim(const ObservationScheme& scheme, int l, double p, double rate);

/// G_{p1,p2}^n(t) = rate^{(p1+p2)/2-1} sum over overlapping pairs of |I1|^{p1/2} |I2|^{p2/2}.
StepFunction<double> G_cross(const ObservationScheme& scheme, double p1, double p2, double rate);

/// H_{k,m,p}^n: rate^{p/2-1} sum |I1\I2|^{k/2} |I2\I1|^{m/2} |I1 n I2|^{(p-k-m)/2}, with 0^0 = 1.
StepFunction<double> H_stat(const ObservationScheme& scheme, unsigned k, unsigned m, double p, double rate);

/// G_{k,m,p}^n: rate^{p/2-1} sum |I1|^{k/2} |I2|^{m/2} |I1 n I2|^{(p-k-m)/2}.
StepFunction<double> G_kmp(const ObservationScheme& scheme, unsigned k, unsigned m, double p, double rate);

/// sum over overlapping pairs of |I1|^{min(p1/2,1)} |I2|^{min(p2/2,1)} at t = T, no rate factor.
double overlap_power_condition(const ObservationScheme& scheme, double p1, double p2);

/// sum over overlapping pairs of |I1|^e1 |I2|^e2 (t_i v t_j <= T) for any two time sequences,
/// including lazy ones. Powers of repeated interval lengths are reused, which makes arithmetic
/// grids with billions of intervals cheap.
template <typename Seq1, typename Seq2>
double cross_power_sum(const Seq1& a, const Seq2& b, double T, double e1, double e2) {
  KahanSum<double> sum;
  double last_len1 = -1.0, last_pow1 = 0.0;
  double last_len2 = -1.0, last_pow2 = 0.0;
  sweep_overlaps(a, b, T, [&](std::size_t i, std::size_t j) {
    const double len1 = a[i] - a[i - 1];
    const double len2 = b[j] - b[j - 1];
    if (len1 != last_len1) {
      last_len1 = len1;
      last_pow1 = pow0(len1, e1);
    }
    if (len2 != last_len2) {
      last_len2 = len2;
      last_pow2 = pow0(len2, e2);
    }
    sum += last_pow1 * last_pow2;
  });
  return sum.value();
}

/// cross_power_sum for two arithmetic grids with integer denominators, using the nominal
/// lengths 1/d. Pair counts per component-1 interval come from exact integer arithmetic,
/// so the cost is O(N1) however fine the second grid is.
double cross_power_sum_arithmetic(const ArithmeticTimes& a, const ArithmeticTimes& b, double T, double e1,
                                  double e2);

}  // namespace hyvar
