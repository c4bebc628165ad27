// SPDX-License-Identifier: Apache-2.0
//
// Observation schemes: generation, the overlap sweep and scheme diagnostics.
// Interval i of component l is the half-open (t_{i-1}, t_i]; touching intervals do not overlap.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hyvar {

class ObservationScheme {
 public:
  ObservationScheme(std::vector<double> times1, std::vector<double> times2, double horizon);

  [[nodiscard]] const std::vector<double>& times1() const { return times1_; }
  [[nodiscard]] const std::vector<double>& times2() const { return times2_; }
  [[nodiscard]] const std::vector<double>& times(int component) const;
  [[nodiscard]] double horizon() const { return horizon_; }

  /// True if both components reach T.
  [[nodiscard]] bool covers_horizon() const;
  /// Sorted union of all observation times <= T; the times a path must be sampled at.
  [[nodiscard]] std::vector<double> request_times() const;
  [[nodiscard]] ObservationScheme swapped() const { return {times2_, times1_, horizon_}; }

 private:
  std::vector<double> times1_;
  std::vector<double> times2_;
  double horizon_;
};

struct EquidistantSync {
  std::size_t n = 1;
};
/// t^{(1)}_i = i/n, t^{(2)}_i = i/n^{1+gamma}.
struct EquidistantAsync {
  std::size_t n = 1;
  double gamma = 0.0;
};
/// t^{(1)}_i = i/n; t^{(2)}_i = i/n for even n and i/(2n) for odd n.
struct Oscillating {
  std::size_t n = 1;
};
/// Independent Poisson arrivals with rates n*lambda1 and n*lambda2.
struct PoissonScheme {
  std::size_t n = 1;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
};
/// One Poisson arrival stream with rate n*lambda shared by both components.
struct PoissonSync {
  std::size_t n = 1;
  double lambda = 1.0;
};
struct Explicit {
  std::vector<double> times1;
  std::vector<double> times2;
};

using SchemeSpec = std::variant<EquidistantSync, EquidistantAsync, Oscillating, PoissonScheme, PoissonSync, Explicit>;

/// Throws InputError on out-of-range parameters.
void validate(const SchemeSpec& spec);
/// Copy of `spec` with its n replaced; Explicit is returned unchanged.
SchemeSpec with_n(const SchemeSpec& spec, std::size_t n);
std::string describe(const SchemeSpec& spec);

/// Generated lists run up to the first observation >= T. Deterministic variants ignore the seed.
ObservationScheme generate_scheme(const SchemeSpec& spec, double T, std::uint64_t seed);

/// sup over both components of t_i ^ T - t_{i-1} ^ T.
double mesh(const ObservationScheme& scheme);

// --- sweep ------------------------------------------------------------------

/// Lazy arithmetic grid t_i = i / denominator, i = 0..count-1. Lets grids with billions of
/// points be swept without materializing them.
struct ArithmeticTimes {
  double denominator = 1.0;
  std::size_t count = 0;

  [[nodiscard]] std::size_t size() const { return count; }
  [[nodiscard]] double operator[](std::size_t i) const { return static_cast<double>(i) / denominator; }

  /// Shortest grid i/denominator whose last point is >= T.
  static ArithmeticTimes covering(double denominator, double T) {
    auto last = static_cast<std::size_t>(std::ceil(T * denominator));
    while (static_cast<double>(last) / denominator < T) ++last;
    while (last > 0 && static_cast<double>(last - 1) / denominator >= T) --last;
    return {denominator, last + 1};
  }
};

/// Two-pointer sweep over the overlapping interval pairs (i, j), i, j >= 1, of two increasing
/// sequences starting at 0, restricted to t_i ^{(1)} v t_j^{(2)} <= horizon. Calls
/// fn(i, j) in sweep order; runs in O(N1 + N2 + P).
template <typename Seq1, typename Seq2, typename Fn>
void sweep_overlaps(const Seq1& a, const Seq2& b, double horizon, Fn&& fn) {
  std::size_t i = 1;
  std::size_t j = 1;
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  while (i < na && j < nb) {
    const double ai = a[i];
    const double bj = b[j];
    if (ai > horizon && bj > horizon) break;
    if (ai <= horizon && bj <= horizon) fn(i, j);
    if (ai < bj) {
      ++i;
    } else if (bj < ai) {
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
}

std::vector<std::pair<std::size_t, std::size_t>> overlap_pairs(const ObservationScheme& scheme);

/// Max over both components l of the number of intervals of the other component meeting
/// an interval (t_{i-1}, t_i] of component l with t_i <= T.
std::size_t max_overlap_count(const ObservationScheme& scheme);

struct AlternatingResult {
  ObservationScheme scheme;
  /// One component ran out before both reached T.
  bool truncated = false;
};

/// Thinning to alternately observed times: the first positive time of component 1, then the
/// next time of component 2 strictly after it, then the next of component 1, and so on until
/// both components reach T.
AlternatingResult alternating_subsample(const ObservationScheme& scheme);

/// Two-column text "component time", one observation per line; '#' starts a comment.
ObservationScheme read_scheme(std::istream& is, double T);
void write_scheme(std::ostream& os, const ObservationScheme& scheme);

}  // namespace hyvar
