// SPDX-License-Identifier: Apache-2.0
//
// Bivariate Itô semimartingale with deterministic piecewise-constant coefficients
// and finite-activity jumps, sampled exactly at arbitrary finite time sets.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hyvar/numeric.hpp"

namespace hyvar {

/// Right-open piecewise-constant path on [0, T]: value_k on [breakpoint_k, breakpoint_{k+1}).
/// The last piece extends to T (and beyond, for evaluation purposes).
class Schedule {
 public:
  Schedule() : Schedule(0.0) {}
  /// Constant schedule.
  Schedule(double value);  // NOLINT(google-explicit-constructor): a number is a valid schedule
  Schedule(std::vector<double> breakpoints, std::vector<double> values);

  [[nodiscard]] double operator()(double t) const;

  [[nodiscard]] const std::vector<double>& breakpoints() const { return breakpoints_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }

  [[nodiscard]] bool is_constant() const { return values_.size() == 1; }
  [[nodiscard]] double min_value() const;
  [[nodiscard]] double max_value() const;
  [[nodiscard]] bool identically(double v) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

struct JumpEvent {
  double time = 0.0;
  Vector2d size = Vector2d::Zero();

  /// Both components jump at the same instant.
  [[nodiscard]] bool is_common() const { return size[0] * size[1] != 0.0; }
};

/// Marginal law of one component's jump size.
struct SizeDistribution {
  enum class Kind { Constant, Normal, Uniform };
  Kind kind = Kind::Normal;
  double a = 0.0;  // constant value / mean / lower bound
  double b = 1.0;  // unused / standard deviation / upper bound
};

/// Compound Poisson jumps. With probability `common_prob` an event moves both components
/// (sizes drawn independently); otherwise exactly one component, chosen with probability 1/2.
struct PoissonJumps {
  double intensity = 0.0;
  SizeDistribution size1;
  SizeDistribution size2;
  double common_prob = 0.0;
};

struct SemimartingaleSpec {
  double horizon = 1.0;
  Vector2d x0 = Vector2d::Zero();
  Schedule drift1;
  Schedule drift2;
  Schedule vol1;
  Schedule vol2;
  Schedule corr;
  std::vector<JumpEvent> scheduled_jumps;
  std::optional<PoissonJumps> poisson_jumps;

  /// Throws InputError if any invariant is violated.
  void validate() const;

  /// Sorted union of all coefficient breakpoints (always contains 0).
  [[nodiscard]] std::vector<double> coefficient_breakpoints() const;
  /// Sorted union of the breakpoints of vol1, vol2 and corr.
  [[nodiscard]] std::vector<double> volatility_breakpoints() const;

  /// sigma_s = [[s1, 0], [rho s2, sqrt(1 - rho^2) s2]], so that c_s = sigma_s sigma_s^T.
  [[nodiscard]] Matrix2d vol_factor(double t) const;
  [[nodiscard]] Matrix2d spot_covariance(double t) const;

  static SemimartingaleSpec brownian(double sigma1, double sigma2, double rho, double horizon = 1.0);
};

/// Exact values of X at a sorted set of times, plus the realized jump ledger.
class PathRecord {
 public:
  using Values = Eigen::Matrix<double, Eigen::Dynamic, 2>;

  PathRecord(std::vector<double> times, Values values, std::vector<JumpEvent> jumps);

  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  [[nodiscard]] const Values& values() const { return values_; }
  [[nodiscard]] const std::vector<JumpEvent>& jumps() const { return jumps_; }

  /// Index of an exactly matching sampled time; LookupError otherwise.
  [[nodiscard]] std::size_t index_of(double t) const;
  [[nodiscard]] Vector2d at(double t) const { return values_.row(static_cast<Eigen::Index>(index_of(t))).transpose(); }

  /// Scales values (including x0) and jump sizes by lambda.
  [[nodiscard]] PathRecord scaled(double lambda) const;
  /// Exchanges the two components.
  [[nodiscard]] PathRecord swapped() const;

 private:
  std::vector<double> times_;
  Values values_;
  std::vector<JumpEvent> jumps_;
};

/// Covariance of the continuous martingale increment C_t - C_s.
Matrix2d covariance_on(const SemimartingaleSpec& spec, double s, double t);

/// Integral of the drift over [s, t].
Vector2d drift_integral(const SemimartingaleSpec& spec, double s, double t);

/// Scheduled jumps merged with the compound Poisson jumps drawn for this seed, sorted by time.
/// Draws only from the jump sub-streams, so it does not depend on any request times.
std::vector<JumpEvent> realize_jumps(const SemimartingaleSpec& spec, std::uint64_t seed);

/// Exact sample of X at request_times (sorted, within [0, T]). The returned time set is the
/// union of the request, 0, T, all coefficient breakpoints and all jump times.
PathRecord sample_path(const SemimartingaleSpec& spec, std::span<const double> request_times,
                       std::uint64_t seed);

/// X^{(component)}_t - X^{(component)}_s; component is 1 or 2.
double increment(const PathRecord& path, double s, double t, int component);

}  // namespace hyvar
