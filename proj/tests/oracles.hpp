// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations for tests. Deliberately naive: no sweeps, no
// shared helpers with the library beyond plain data types.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

/// Every (i, j) with max(lefts) < min(rights) and t_i v t_j <= T, by a full double loop.
inline std::vector<std::pair<std::size_t, std::size_t>> overlap_pairs(const std::vector<double>& a,
                                                                      const std::vector<double>& b, double T) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 1; i < a.size(); ++i) {
    for (std::size_t j = 1; j < b.size(); ++j) {
      if (std::max(a[i], b[j]) > T) continue;
      if (std::max(a[i - 1], b[j - 1]) < std::min(a[i], b[j])) out.emplace_back(i, j);
    }
  }
  return out;
}

struct Pair {
  double len1, len2, overlap, diff1, diff2;
};

/// sum of term(pair) over overlapping pairs with t_i v t_j <= t. Set differences are taken as
/// length minus overlap, a different route from the library's margin formula.
inline double pair_sum(const std::vector<double>& a, const std::vector<double>& b, double T, double t,
                       const std::function<double(const Pair&)>& term) {
  long double sum = 0.0L;
  for (std::size_t i = 1; i < a.size(); ++i) {
    for (std::size_t j = 1; j < b.size(); ++j) {
      const double end = std::max(a[i], b[j]);
      if (end > T || end > t) continue;
      const double lo = std::max(a[i - 1], b[j - 1]);
      const double hi = std::min(a[i], b[j]);
      if (!(lo < hi)) continue;
      Pair p;
      p.len1 = a[i] - a[i - 1];
      p.len2 = b[j] - b[j - 1];
      p.overlap = hi - lo;
      p.diff1 = std::max(0.0, p.len1 - p.overlap);
      p.diff2 = std::max(0.0, p.len2 - p.overlap);
      sum += term(p);
    }
  }
  return static_cast<double>(sum);
}

/// (t_i v t_j, term(pair)) for every overlapping pair with t_i v t_j <= T, by double loop.
inline std::vector<std::pair<double, double>> pair_terms(const std::vector<double>& a, const std::vector<double>& b,
                                                         double T, const std::function<double(const Pair&)>& term) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 1; i < a.size(); ++i) {
    for (std::size_t j = 1; j < b.size(); ++j) {
      const double end = std::max(a[i], b[j]);
      if (end > T) continue;
      const double lo = std::max(a[i - 1], b[j - 1]);
      const double hi = std::min(a[i], b[j]);
      if (!(lo < hi)) continue;
      Pair p;
      p.len1 = a[i] - a[i - 1];
      p.len2 = b[j] - b[j - 1];
      p.overlap = hi - lo;
      p.diff1 = std::max(0.0, p.len1 - p.overlap);
      p.diff2 = std::max(0.0, p.len2 - p.overlap);
      out.emplace_back(end, term(p));
    }
  }
  return out;
}

/// Sum of the terms whose pair ends at or before t.
inline double cumulative(const std::vector<std::pair<double, double>>& terms, double t) {
  long double sum = 0.0L;
  for (const auto& [end, v] : terms) {
    if (end <= t) sum += v;
  }
  return static_cast<double>(sum);
}

/// x^e with 0^0 = 1.
inline double pw(double x, double e) { return e == 0.0 ? 1.0 : std::pow(x, e); }

/// Per-interval overlap counts, by double loop, maximized over intervals ending <= T.
inline std::size_t max_overlap_count(const std::vector<double>& a, const std::vector<double>& b, double T) {
  std::size_t best = 0;
  for (int side = 0; side < 2; ++side) {
    const auto& x = side == 0 ? a : b;
    const auto& y = side == 0 ? b : a;
    for (std::size_t i = 1; i < x.size() && x[i] <= T; ++i) {
      std::size_t c = 0;
      for (std::size_t j = 1; j < y.size(); ++j) {
        if (std::max(x[i - 1], y[j - 1]) < std::min(x[i], y[j])) ++c;
      }
      best = std::max(best, c);
    }
  }
  return best;
}

/// Random strictly increasing list starting at 0 with `count` further points, the last >= T.
inline std::vector<double> random_times(std::mt19937_64& gen, std::size_t count, double T, bool on_lattice) {
  std::vector<double> t{0.0};
  if (on_lattice) {
    // Multiples of T / 512 for every count, so two lists often share endpoints.
    const int max_step = std::max(1, static_cast<int>(1024 / (count + 1)));
    std::uniform_int_distribution<int> step(1, max_step);
    const double unit = T / 512.0;
    int k = 0;
    while (t.back() < T) {
      k += step(gen);
      t.push_back(k * unit);
    }
  } else {
    std::exponential_distribution<double> gap(static_cast<double>(count) / T);
    double x = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      x += gap(gen) + 1e-9;
      t.push_back(x);
    }
    if (t.back() < T) t.push_back(T + 0.01);
  }
  return t;
}

/// Left-endpoint Riemann–Stieltjes sum of h against F on a uniform grid with m cells.
inline double riemann_stieltjes(const std::function<double(double)>& h, const std::function<double(double)>& F,
                                double T, std::size_t m) {
  long double sum = 0.0L;
  for (std::size_t k = 0; k < m; ++k) {
    const double s0 = T * static_cast<double>(k) / static_cast<double>(m);
    const double s1 = T * static_cast<double>(k + 1) / static_cast<double>(m);
    sum += h(s0) * (F(s1) - F(s0));
  }
  return static_cast<double>(sum);
}

/// Gauss hypergeometric 2F1(a, b; c; z) by its power series, |z| < 1.
inline double hyp2f1(double a, double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 100000; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

/// E |X|^a |Y|^b for a centered normal pair with standard deviations s1, s2 and correlation r.
inline double abs_product_moment(double a, double b, double s1, double s2, double r) {
  const double pi = std::numbers::pi;
  return std::pow(s1, a) * std::pow(s2, b) * std::pow(2.0, (a + b) / 2.0) / pi * std::tgamma((a + 1) / 2) *
         std::tgamma((b + 1) / 2) * hyp2f1(-a / 2, -b / 2, 0.5, r * r);
}

/// E X^p1 Y^p2 by Isserlis' theorem: sum over perfect matchings of the multiset of factors.
inline double isserlis(unsigned p1, unsigned p2, double v1, double v2, double c) {
  std::vector<int> items;
  for (unsigned i = 0; i < p1; ++i) items.push_back(0);
  for (unsigned i = 0; i < p2; ++i) items.push_back(1);
  if (items.size() % 2 == 1) return 0.0;
  std::function<double(std::vector<int>)> rec = [&](std::vector<int> rest) -> double {
    if (rest.empty()) return 1.0;
    const int first = rest.front();
    double total = 0.0;
    for (std::size_t k = 1; k < rest.size(); ++k) {
      const int other = rest[k];
      const double cov = first == other ? (first == 0 ? v1 : v2) : c;
      std::vector<int> next;
      for (std::size_t q = 1; q < rest.size(); ++q) {
        if (q != k) next.push_back(rest[q]);
      }
      total += cov * rec(next);
    }
    return total;
  };
  return rec(items);
}

}  // namespace oracle
