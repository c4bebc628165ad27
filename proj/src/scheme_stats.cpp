// SPDX-License-Identifier: Apache-2.0
#include "hyvar/scheme_stats.hpp"

#include "hyvar/errors.hpp"

namespace hyvar {

namespace {

__extension__ using u128 = unsigned __int128;

double rate_factor(double p, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw InputError("rate must be positive");
  if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("power p must be >= 0");
  return std::pow(rate, p / 2.0 - 1.0);
}

void check_kmp(unsigned k, unsigned m, double p) {
  if (static_cast<double>(k) + static_cast<double>(m) > p) {
    throw InputError("parameter error: need k + m <= p");
  }
}

}  // namespace

StepFunction<double> G_onedim(const ObservationScheme& scheme, int l, double p, double rate) {
  const double factor = rate_factor(p, rate);
  const auto& t = scheme.times(l);
  const double e = p / 2.0;
  StepAccumulator<double> acc;
  acc.reserve(t.size());
  for (std::size_t i = 1; i < t.size() && t[i] <= scheme.horizon(); ++i) {
    acc.add(t[i], pow0(t[i] - t[i - 1], e));
  }
  return std::move(acc).finish(factor);
}

StepFunction<double> G_cross(const ObservationScheme& scheme, double p1, double p2, double rate) {
  if (!(p1 >= 0.0 && p2 >= 0.0)) throw InputError("powers must be >= 0");
  const double factor = rate_factor(p1 + p2, rate);
  const double e1 = p1 / 2.0;
  const double e2 = p2 / 2.0;
  return pair_statistic(scheme, factor, [&](const PairGeometry<double>& g) {
    return pow0(g.len1, e1) * pow0(g.len2, e2);
  });
}

StepFunction<double> H_stat(const ObservationScheme& scheme, unsigned k, unsigned m, double p, double rate) {
  check_kmp(k, m, p);
  const double factor = rate_factor(p, rate);
  const double ek = k / 2.0;
  const double em = m / 2.0;
  const double eo = (p - k - m) / 2.0;
  return pair_statistic(scheme, factor, [&](const PairGeometry<double>& g) {
    return pow0(g.diff1, ek) * pow0(g.diff2, em) * pow0(g.overlap, eo);
  });
}

StepFunction<double> G_kmp(const ObservationScheme& scheme, unsigned k, unsigned m, double p, double rate) {
  check_kmp(k, m, p);
  const double factor = rate_factor(p, rate);
  const double ek = k / 2.0;
  const double em = m / 2.0;
  const double eo = (p - k - m) / 2.0;
  return pair_statistic(scheme, factor, [&](const PairGeometry<double>& g) {
    return pow0(g.len1, ek) * pow0(g.len2, em) * pow0(g.overlap, eo);
  });
}

double overlap_power_condition(const ObservationScheme& scheme, double p1, double p2) {
  if (!(p1 > 0.0 && p2 > 0.0)) throw InputError("overlap power condition needs p1, p2 > 0");
  return cross_power_sum(scheme.times1(), scheme.times2(), scheme.horizon(), std::min(p1 / 2.0, 1.0),
                         std::min(p2 / 2.0, 1.0));
}

double cross_power_sum_arithmetic(const ArithmeticTimes& a, const ArithmeticTimes& b, double T, double e1,
                                  double e2) {
  auto as_integer = [](double d) {
    if (!(d >= 1.0 && d < 9007199254740992.0) || d != std::floor(d)) {
      throw InputError("arithmetic grid denominators must be integers");
    }
    return static_cast<u128>(d);
  };
  const u128 d1 = as_integer(a.denominator);
  const u128 d2 = as_integer(b.denominator);
  if (a.size() < 2 || b.size() < 2) return 0.0;

  // Largest j with j / d2 <= T, found with the same floating comparison the sweep uses.
  std::size_t j_max = std::min(b.size() - 1, static_cast<std::size_t>(std::floor(T * b.denominator)) + 1);
  while (j_max > 0 && b[j_max] > T) --j_max;

  const double unit = pow0(1.0 / a.denominator, e1) * pow0(1.0 / b.denominator, e2);
  KahanSum<double> sum;
  for (std::size_t i = 1; i < a.size() && a[i] <= T; ++i) {
    // (i-1)/d1 < j/d2 and (j-1)/d2 < i/d1  <=>  floor((i-1) d2 / d1) < j < i d2 / d1 + 1.
    const u128 lo = (static_cast<u128>(i - 1) * d2) / d1 + 1;
    const u128 num = static_cast<u128>(i) * d2;
    const u128 hi = (num + d1 - 1) / d1;  // ceil(i d2 / d1)
    const u128 top = std::min<u128>(hi, j_max);
    if (top >= lo) sum += static_cast<double>(top - lo + 1) * unit;
  }
  return sum.value();
}

}  // namespace hyvar
