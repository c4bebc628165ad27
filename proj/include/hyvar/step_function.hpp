// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <iosfwd>
#include <ostream>
#include <span>
#include <vector>

#include "hyvar/errors.hpp"
#include "hyvar/numeric.hpp"

namespace hyvar {

/// Right-continuous piecewise-constant function with F(0) = 0, stored as cumulative values at
/// strictly increasing breakpoints. Beyond the last breakpoint the last value holds.
template <typename Scalar>
class StepFunction {
 public:
  StepFunction() : breakpoints_{Scalar(0)}, values_{Scalar(0)} {}

  StepFunction(std::vector<Scalar> breakpoints, std::vector<Scalar> values)
      : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (breakpoints_.empty() || breakpoints_.size() != values_.size()) {
      throw InputError("step function needs one value per breakpoint");
    }
    if (breakpoints_.front() != Scalar(0) || values_.front() != Scalar(0)) {
      throw InputError("step function must start at (0, 0)");
    }
    for (std::size_t k = 1; k < breakpoints_.size(); ++k) {
      if (!(breakpoints_[k] > breakpoints_[k - 1])) {
        throw InputError("step function breakpoints must be strictly increasing");
      }
    }
  }

  /// The identity t -> t sampled on a grid, i.e. a staircase F(t_k) = t_k.
  static StepFunction on_grid(std::span<const Scalar> grid) {
    std::vector<Scalar> bps{Scalar(0)};
    for (Scalar t : grid) {
      if (t > bps.back()) bps.push_back(t);
    }
    std::vector<Scalar> vals = bps;
    return StepFunction(std::move(bps), std::move(vals));
  }

  [[nodiscard]] Scalar operator()(Scalar t) const {
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    if (it == breakpoints_.begin()) return Scalar(0);
    return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
  }

  [[nodiscard]] const std::vector<Scalar>& breakpoints() const { return breakpoints_; }
  [[nodiscard]] const std::vector<Scalar>& values() const { return values_; }
  [[nodiscard]] std::size_t size() const { return breakpoints_.size(); }

  [[nodiscard]] bool is_nondecreasing() const {
    return std::is_sorted(values_.begin(), values_.end());
  }

  [[nodiscard]] StepFunction scaled(Scalar factor) const {
    std::vector<Scalar> vals = values_;
    for (Scalar& v : vals) v *= factor;
    return StepFunction(breakpoints_, std::move(vals));
  }

 private:
  std::vector<Scalar> breakpoints_;
  std::vector<Scalar> values_;
};

/// Accumulates nonnegative increments at nondecreasing times into a StepFunction.
/// Increments at equal times merge; cumulative values are compensated and clamped to be
/// monotone, so rounding in the running sum can never produce a decrease.
template <typename Scalar>
class StepAccumulator {
 public:
  StepAccumulator() = default;

  void reserve(std::size_t n) {
    breakpoints_.reserve(n + 1);
    values_.reserve(n + 1);
  }

  void add(Scalar t, Scalar increment) {
    if (!(t > Scalar(0)) || t < breakpoints_.back()) {
      throw ContractError("step accumulator times must be positive and nondecreasing");
    }
    sum_ += increment;
    const Scalar v = std::max(sum_.value(), values_.back());
    if (t == breakpoints_.back()) {
      values_.back() = v;
    } else {
      breakpoints_.push_back(t);
      values_.push_back(v);
    }
  }

  [[nodiscard]] Scalar total() const { return values_.back(); }

  [[nodiscard]] StepFunction<Scalar> finish(Scalar factor = Scalar(1)) && {
    if (factor != Scalar(1)) {
      for (Scalar& v : values_) v *= factor;
    }
    return StepFunction<Scalar>(std::move(breakpoints_), std::move(values_));
  }

 private:
  std::vector<Scalar> breakpoints_{Scalar(0)};
  std::vector<Scalar> values_{Scalar(0)};
  KahanSum<Scalar> sum_;
};

/// Left-endpoint Stieltjes sum of a piecewise-constant integrand h against F over [0, T].
/// The partition is F's breakpoints refined by h's breakpoints (`h_breaks`), so the result
/// is exact when h is constant between consecutive points of `h_breaks`.
template <typename Scalar, typename Integrand>
Scalar stieltjes(const Integrand& h, std::span<const Scalar> h_breaks, const StepFunction<Scalar>& F,
                 Scalar T) {
  const auto& bps = F.breakpoints();
  const auto& vals = F.values();
  KahanSum<Scalar> acc;
  std::size_t hb = 0;
  Scalar prev_value(0);
  for (std::size_t k = 1; k < bps.size() && bps[k] <= T; ++k) {
    const Scalar dF = vals[k] - prev_value;
    prev_value = vals[k];
    if (dF == Scalar(0)) continue;
    // Left endpoint of the refined cell ending at bps[k]: the last point of the merged
    // partition strictly before bps[k].
    while (hb < h_breaks.size() && h_breaks[hb] < bps[k]) ++hb;
    Scalar left = bps[k - 1];
    if (hb > 0 && h_breaks[hb - 1] > left) left = h_breaks[hb - 1];
    acc += h(left) * dF;
  }
  return acc.value();
}

/// Two-column text export "breakpoint value" for plotting.
template <typename Scalar>
void write_step_function(std::ostream& os, const StepFunction<Scalar>& F) {
  const auto old_precision = os.precision(17);
  for (std::size_t k = 0; k < F.size(); ++k) {
    os << F.breakpoints()[k] << ' ' << F.values()[k] << '\n';
  }
  os.precision(old_precision);
}

}  // namespace hyvar
