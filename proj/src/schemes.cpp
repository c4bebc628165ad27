// SPDX-License-Identifier: Apache-2.0
#include "hyvar/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "hyvar/errors.hpp"
#include "hyvar/rng.hpp"

namespace hyvar {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_times(const std::vector<double>& t, const char* name) {
  if (t.empty() || t.front() != 0.0) throw InputError(std::string(name) + " must start at 0");
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (!(t[k] > t[k - 1])) throw InputError(std::string(name) + " must be strictly increasing");
    if (!std::isfinite(t[k])) throw InputError(std::string(name) + " must be finite");
  }
}

std::vector<double> grid_covering(double denominator, double T) {
  const ArithmeticTimes g = ArithmeticTimes::covering(denominator, T);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i];
  return out;
}

std::vector<double> poisson_times(double rate, double T, std::uint64_t seed, Stream stream) {
  CounterRng rng(seed, stream);
  std::vector<double> out{0.0};
  out.reserve(static_cast<std::size_t>(rate * T * 1.1) + 16);
  double t = 0.0;
  while (t < T) {
    const double next = t + rng.exponential(rate);
    if (next > t) {  // a zero-length gap is a probability-zero rounding artifact
      t = next;
      out.push_back(t);
    }
  }
  return out;
}

void check_n(std::size_t n) {
  if (n < 1) throw InputError("scheme parameter n must be >= 1");
}

}  // namespace

// --- ObservationScheme ------------------------------------------------------------

ObservationScheme::ObservationScheme(std::vector<double> times1, std::vector<double> times2, double horizon)
    : times1_(std::move(times1)), times2_(std::move(times2)), horizon_(horizon) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) throw InputError("scheme horizon must be positive");
  check_times(times1_, "times1");
  check_times(times2_, "times2");
}

const std::vector<double>& ObservationScheme::times(int component) const {
  if (component == 1) return times1_;
  if (component == 2) return times2_;
  throw InputError("component must be 1 or 2");
}

bool ObservationScheme::covers_horizon() const {
  return times1_.back() >= horizon_ && times2_.back() >= horizon_;
}

std::vector<double> ObservationScheme::request_times() const {
  const auto end1 = std::upper_bound(times1_.begin(), times1_.end(), horizon_);
  const auto end2 = std::upper_bound(times2_.begin(), times2_.end(), horizon_);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>((end1 - times1_.begin()) + (end2 - times2_.begin())));
  std::set_union(times1_.begin(), end1, times2_.begin(), end2, std::back_inserter(out));
  return out;
}

// --- SchemeSpec ---------------------------------------------------------------

void validate(const SchemeSpec& spec) {
  std::visit(overloaded{
                 [](const EquidistantSync& s) { check_n(s.n); },
                 [](const EquidistantAsync& s) {
                   check_n(s.n);
                   if (!(s.gamma >= 0.0) || !std::isfinite(s.gamma)) throw InputError("gamma must be >= 0");
                 },
                 [](const Oscillating& s) { check_n(s.n); },
                 [](const PoissonScheme& s) {
                   check_n(s.n);
                   if (!(s.lambda1 > 0.0 && s.lambda2 > 0.0)) throw InputError("Poisson rates must be > 0");
                 },
                 [](const PoissonSync& s) {
                   check_n(s.n);
                   if (!(s.lambda > 0.0)) throw InputError("Poisson rate must be > 0");
                 },
                 [](const Explicit& s) {
                   check_times(s.times1, "times1");
                   check_times(s.times2, "times2");
                 },
             },
             spec);
}

SchemeSpec with_n(const SchemeSpec& spec, std::size_t n) {
  return std::visit(
      [n](auto s) -> SchemeSpec {
        if constexpr (!std::is_same_v<decltype(s), Explicit>) s.n = n;
        return s;
      },
      spec);
}

std::string describe(const SchemeSpec& spec) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const EquidistantSync& s) { os << "equidistant_sync(n=" << s.n << ")"; },
                 [&](const EquidistantAsync& s) {
                   os << "equidistant_async(n=" << s.n << ", gamma=" << s.gamma << ")";
                 },
                 [&](const Oscillating& s) { os << "oscillating(n=" << s.n << ")"; },
                 [&](const PoissonScheme& s) {
                   os << "poisson(n=" << s.n << ", lambda1=" << s.lambda1 << ", lambda2=" << s.lambda2 << ")";
                 },
                 [&](const PoissonSync& s) { os << "poisson_sync(n=" << s.n << ", lambda=" << s.lambda << ")"; },
                 [&](const Explicit& s) {
                   os << "explicit(" << s.times1.size() << " + " << s.times2.size() << " times)";
                 },
             },
             spec);
  return os.str();
}

ObservationScheme generate_scheme(const SchemeSpec& spec, double T, std::uint64_t seed) {
  if (!(T > 0.0)) throw InputError("scheme horizon must be positive");
  validate(spec);
  return std::visit(
      overloaded{
          [&](const EquidistantSync& s) {
            std::vector<double> t = grid_covering(static_cast<double>(s.n), T);
            return ObservationScheme(t, t, T);
          },
          [&](const EquidistantAsync& s) {
            const double n = static_cast<double>(s.n);
            return ObservationScheme(grid_covering(n, T), grid_covering(std::pow(n, 1.0 + s.gamma), T), T);
          },
          [&](const Oscillating& s) {
            const double n = static_cast<double>(s.n);
            const double d2 = s.n % 2 == 0 ? n : 2.0 * n;
            return ObservationScheme(grid_covering(n, T), grid_covering(d2, T), T);
          },
          [&](const PoissonScheme& s) {
            const double n = static_cast<double>(s.n);
            return ObservationScheme(poisson_times(n * s.lambda1, T, seed, Stream::SchemeComponent1),
                                     poisson_times(n * s.lambda2, T, seed, Stream::SchemeComponent2), T);
          },
          [&](const PoissonSync& s) {
            std::vector<double> t =
                poisson_times(static_cast<double>(s.n) * s.lambda, T, seed, Stream::SchemeComponent1);
            return ObservationScheme(t, t, T);
          },
          [&](const Explicit& s) { return ObservationScheme(s.times1, s.times2, T); },
      },
      spec);
}

double mesh(const ObservationScheme& scheme) {
  const double T = scheme.horizon();
  double out = 0.0;
  for (int l = 1; l <= 2; ++l) {
    const auto& t = scheme.times(l);
    for (std::size_t i = 1; i < t.size(); ++i) {
      out = std::max(out, std::min(t[i], T) - std::min(t[i - 1], T));
      if (t[i] >= T) break;
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> overlap_pairs(const ObservationScheme& scheme) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(scheme.times1().size() + scheme.times2().size());
  sweep_overlaps(scheme.times1(), scheme.times2(), scheme.horizon(),
                 [&](std::size_t i, std::size_t j) { out.emplace_back(i, j); });
  return out;
}

std::size_t max_overlap_count(const ObservationScheme& scheme) {
  const auto& a = scheme.times1();
  const auto& b = scheme.times2();
  const double T = scheme.horizon();
  std::vector<std::size_t> count1(a.size(), 0);
  std::vector<std::size_t> count2(b.size(), 0);
  // The count runs over all j, so the sweep is not cut at T here.
  sweep_overlaps(a, b, INFINITY, [&](std::size_t i, std::size_t j) {
    ++count1[i];
    ++count2[j];
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < a.size() && a[i] <= T; ++i) best = std::max(best, count1[i]);
  for (std::size_t j = 1; j < b.size() && b[j] <= T; ++j) best = std::max(best, count2[j]);
  return best;
}

AlternatingResult alternating_subsample(const ObservationScheme& scheme) {
  const double T = scheme.horizon();
  std::vector<double> out[2] = {{0.0}, {0.0}};
  const std::vector<double>* src[2] = {&scheme.times1(), &scheme.times2()};
  bool truncated = false;
  double current = 0.0;
  int turn = 0;
  while (out[0].back() < T || out[1].back() < T) {
    const auto& list = *src[turn];
    const auto it = std::upper_bound(list.begin(), list.end(), current);
    if (it == list.end()) {
      truncated = true;
      break;
    }
    current = *it;
    out[turn].push_back(current);
    turn = 1 - turn;
  }
  return {ObservationScheme(std::move(out[0]), std::move(out[1]), T), truncated};
}

ObservationScheme read_scheme(std::istream& is, double T) {
  std::vector<double> times[2];
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    int component = 0;
    double t = 0.0;
    if (!(ls >> component)) continue;  // blank line
    if (!(ls >> t) || (component != 1 && component != 2)) {
      throw InputError("scheme file line " + std::to_string(line_no) + ": expected '<1|2> <time>'");
    }
    std::string rest;
    if (ls >> rest) throw InputError("scheme file line " + std::to_string(line_no) + ": trailing input");
    times[component - 1].push_back(t);
  }
  return ObservationScheme(std::move(times[0]), std::move(times[1]), T);
}

void write_scheme(std::ostream& os, const ObservationScheme& scheme) {
  const auto old_precision = os.precision(17);
  for (int l = 1; l <= 2; ++l) {
    for (double t : scheme.times(l)) os << l << ' ' << t << '\n';
  }
  os.precision(old_precision);
}

}  // namespace hyvar
