// SPDX-License-Identifier: Apache-2.0
#include "hyvar/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hyvar/errors.hpp"
#include "hyvar/rng.hpp"

namespace hyvar {

namespace {

void append_sorted_unique(std::vector<double>& out, const std::vector<double>& more) {
  std::vector<double> merged;
  merged.reserve(out.size() + more.size());
  std::merge(out.begin(), out.end(), more.begin(), more.end(), std::back_inserter(merged));
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  out.swap(merged);
}

double draw_size(const SizeDistribution& d, CounterRng& rng) {
  switch (d.kind) {
    case SizeDistribution::Kind::Constant:
      return d.a;
    case SizeDistribution::Kind::Normal:
      return d.a + d.b * rng.normal();
    case SizeDistribution::Kind::Uniform:
      return d.a + (d.b - d.a) * rng.uniform();
  }
  return 0.0;
}

void validate_size(const SizeDistribution& d, const char* which) {
  const std::string name(which);
  if (!std::isfinite(d.a) || !std::isfinite(d.b)) throw InputError(name + ": non-finite parameter");
  switch (d.kind) {
    case SizeDistribution::Kind::Constant:
      if (d.a == 0.0) throw InputError(name + ": constant jump size must be nonzero");
      break;
    case SizeDistribution::Kind::Normal:
      if (d.b <= 0.0) throw InputError(name + ": normal jump size needs sd > 0");
      break;
    case SizeDistribution::Kind::Uniform:
      if (!(d.a < d.b)) throw InputError(name + ": uniform jump size needs low < high");
      break;
  }
}

// Left-closed piece index containing t.
std::size_t piece_index(const std::vector<double>& breakpoints, double t) {
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  return it == breakpoints.begin() ? 0 : static_cast<std::size_t>(it - breakpoints.begin()) - 1;
}

}  // namespace

// --- Schedule ---------------------------------------------------------------

Schedule::Schedule(double value) : breakpoints_{0.0}, values_{value} {
  if (!std::isfinite(value)) throw InputError("schedule value must be finite");
}

Schedule::Schedule(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.empty() || breakpoints_.size() != values_.size()) {
    throw InputError("schedule needs one value per breakpoint");
  }
  if (breakpoints_.front() != 0.0) throw InputError("schedule must start at breakpoint 0");
  for (std::size_t k = 1; k < breakpoints_.size(); ++k) {
    if (!(breakpoints_[k] > breakpoints_[k - 1])) {
      throw InputError("schedule breakpoints must be strictly increasing");
    }
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InputError("schedule value must be finite");
  }
}

double Schedule::operator()(double t) const { return values_[piece_index(breakpoints_, t)]; }

double Schedule::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double Schedule::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

bool Schedule::identically(double v) const {
  return std::all_of(values_.begin(), values_.end(), [v](double x) { return x == v; });
}

// --- SemimartingaleSpec -----------------------------------------------------

void SemimartingaleSpec::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InputError("horizon must be positive");
  if (!x0.allFinite()) throw InputError("x0 must be finite");
  if (vol1.min_value() < 0.0 || vol2.min_value() < 0.0) throw InputError("volatility must be nonnegative");
  if (corr.min_value() < -1.0 || corr.max_value() > 1.0) throw InputError("correlation must lie in [-1, 1]");
  for (const Schedule* s : {&drift1, &drift2, &vol1, &vol2, &corr}) {
    if (s->breakpoints().back() > horizon) throw InputError("schedule breakpoint beyond horizon");
  }
  double prev = 0.0;
  for (const JumpEvent& j : scheduled_jumps) {
    if (!(j.time > prev)) throw InputError("scheduled jump times must be positive and strictly increasing");
    if (j.time > horizon) throw InputError("scheduled jump beyond horizon");
    if (!j.size.allFinite()) throw InputError("jump size must be finite");
    if (j.size[0] == 0.0 && j.size[1] == 0.0) throw InputError("jump size must be nonzero");
    prev = j.time;
  }
  if (poisson_jumps) {
    const PoissonJumps& pj = *poisson_jumps;
    if (!(pj.intensity >= 0.0) || !std::isfinite(pj.intensity)) throw InputError("jump intensity must be >= 0");
    if (!(pj.common_prob >= 0.0 && pj.common_prob <= 1.0)) {
      throw InputError("common-jump probability must lie in [0, 1]");
    }
    validate_size(pj.size1, "size1");
    validate_size(pj.size2, "size2");
  }
}

std::vector<double> SemimartingaleSpec::coefficient_breakpoints() const {
  std::vector<double> out = volatility_breakpoints();
  append_sorted_unique(out, drift1.breakpoints());
  append_sorted_unique(out, drift2.breakpoints());
  return out;
}

std::vector<double> SemimartingaleSpec::volatility_breakpoints() const {
  std::vector<double> out = vol1.breakpoints();
  append_sorted_unique(out, vol2.breakpoints());
  append_sorted_unique(out, corr.breakpoints());
  return out;
}

Matrix2d SemimartingaleSpec::vol_factor(double t) const {
  const double s1 = vol1(t);
  const double s2 = vol2(t);
  const double rho = corr(t);
  Matrix2d sigma;
  sigma << s1, 0.0, rho * s2, std::sqrt(std::max(0.0, 1.0 - rho * rho)) * s2;
  return sigma;
}

Matrix2d SemimartingaleSpec::spot_covariance(double t) const {
  const double s1 = vol1(t);
  const double s2 = vol2(t);
  const double c12 = corr(t) * s1 * s2;
  Matrix2d c;
  c << s1 * s1, c12, c12, s2 * s2;
  return c;
}

SemimartingaleSpec SemimartingaleSpec::brownian(double sigma1, double sigma2, double rho, double horizon) {
  SemimartingaleSpec spec;
  spec.horizon = horizon;
  spec.vol1 = Schedule(sigma1);
  spec.vol2 = Schedule(sigma2);
  spec.corr = Schedule(rho);
  spec.validate();
  return spec;
}

// --- PathRecord -------------------------------------------------------------

PathRecord::PathRecord(std::vector<double> times, Values values, std::vector<JumpEvent> jumps)
    : times_(std::move(times)), values_(std::move(values)), jumps_(std::move(jumps)) {
  if (times_.empty() || static_cast<Eigen::Index>(times_.size()) != values_.rows()) {
    throw InputError("path needs one value row per time");
  }
  if (times_.front() != 0.0) throw InputError("path times must start at 0");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k] > times_[k - 1])) throw InputError("path times must be strictly increasing");
  }
}

std::size_t PathRecord::index_of(double t) const {
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it == times_.end() || *it != t) {
    throw LookupError("time " + std::to_string(t) + " is not a sampled time of the path");
  }
  return static_cast<std::size_t>(it - times_.begin());
}

PathRecord PathRecord::scaled(double lambda) const {
  std::vector<JumpEvent> jumps = jumps_;
  for (JumpEvent& j : jumps) j.size *= lambda;
  return PathRecord(times_, values_ * lambda, std::move(jumps));
}

PathRecord PathRecord::swapped() const {
  Values v(values_.rows(), 2);
  v.col(0) = values_.col(1);
  v.col(1) = values_.col(0);
  std::vector<JumpEvent> jumps = jumps_;
  for (JumpEvent& j : jumps) std::swap(j.size[0], j.size[1]);
  return PathRecord(times_, std::move(v), std::move(jumps));
}

// --- operations ---------------------------------------------------------------

namespace {

void check_interval(const SemimartingaleSpec& spec, double s, double t) {
  if (!(s >= 0.0 && s <= t && t <= spec.horizon)) {
    throw RangeError("need 0 <= s <= t <= T, got s=" + std::to_string(s) + ", t=" + std::to_string(t));
  }
}

// Calls fn(u, v) for the pieces of [s, t] cut at the given breakpoints.
template <typename Fn>
void for_each_piece(const std::vector<double>& breakpoints, double s, double t, Fn&& fn) {
  double u = s;
  for (auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), s);
       it != breakpoints.end() && *it < t; ++it) {
    fn(u, *it);
    u = *it;
  }
  if (u < t) fn(u, t);
}

}  // namespace

Matrix2d covariance_on(const SemimartingaleSpec& spec, double s, double t) {
  check_interval(spec, s, t);
  KahanSum<double> v1, v2, c12;
  for_each_piece(spec.volatility_breakpoints(), s, t, [&](double u, double w) {
    const Matrix2d c = spec.spot_covariance(u);
    const double dt = w - u;
    v1 += c(0, 0) * dt;
    v2 += c(1, 1) * dt;
    c12 += c(0, 1) * dt;
  });
  Matrix2d out;
  out << v1.value(), c12.value(), c12.value(), v2.value();
  return out;
}

Vector2d drift_integral(const SemimartingaleSpec& spec, double s, double t) {
  check_interval(spec, s, t);
  std::vector<double> bps = spec.drift1.breakpoints();
  append_sorted_unique(bps, spec.drift2.breakpoints());
  KahanSum<double> b1, b2;
  for_each_piece(bps, s, t, [&](double u, double w) {
    b1 += spec.drift1(u) * (w - u);
    b2 += spec.drift2(u) * (w - u);
  });
  return {b1.value(), b2.value()};
}

std::vector<JumpEvent> realize_jumps(const SemimartingaleSpec& spec, std::uint64_t seed) {
  std::vector<JumpEvent> jumps = spec.scheduled_jumps;
  if (spec.poisson_jumps && spec.poisson_jumps->intensity > 0.0) {
    const PoissonJumps& pj = *spec.poisson_jumps;
    CounterRng times_rng(seed, Stream::JumpTimes);
    CounterRng sizes_rng(seed, Stream::JumpSizes);
    std::vector<JumpEvent> drawn;
    double t = times_rng.exponential(pj.intensity);
    while (t <= spec.horizon) {
      JumpEvent ev;
      ev.time = t;
      if (sizes_rng.uniform() < pj.common_prob) {
        ev.size = {draw_size(pj.size1, sizes_rng), draw_size(pj.size2, sizes_rng)};
      } else if (sizes_rng.uniform() < 0.5) {
        ev.size[0] = draw_size(pj.size1, sizes_rng);
      } else {
        ev.size[1] = draw_size(pj.size2, sizes_rng);
      }
      // A continuous size law hits zero with probability 0; drop the event if it does.
      if (ev.size[0] != 0.0 || ev.size[1] != 0.0) drawn.push_back(ev);
      t += times_rng.exponential(pj.intensity);
    }
    std::vector<JumpEvent> merged;
    merged.reserve(jumps.size() + drawn.size());
    std::merge(jumps.begin(), jumps.end(), drawn.begin(), drawn.end(), std::back_inserter(merged),
               [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
    jumps.swap(merged);
  }
  return jumps;
}

PathRecord sample_path(const SemimartingaleSpec& spec, std::span<const double> request_times,
                       std::uint64_t seed) {
  spec.validate();
  for (std::size_t k = 0; k < request_times.size(); ++k) {
    const double t = request_times[k];
    if (!(t >= 0.0 && t <= spec.horizon)) throw InputError("request time outside [0, T]");
    if (k > 0 && t < request_times[k - 1]) throw InputError("request times must be sorted");
  }

  std::vector<JumpEvent> jumps = realize_jumps(spec, seed);

  std::vector<double> times(request_times.begin(), request_times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  std::vector<double> extra = spec.coefficient_breakpoints();
  extra.push_back(spec.horizon);
  for (const JumpEvent& j : jumps) extra.push_back(j.time);
  std::sort(extra.begin(), extra.end());
  extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
  append_sorted_unique(times, extra);

  PathRecord::Values values(static_cast<Eigen::Index>(times.size()), 2);
  values.row(0) = spec.x0.transpose();

  CounterRng gauss(seed, Stream::GaussianIncrements);
  std::size_t next_jump = 0;
  Vector2d x = spec.x0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double u = times[k - 1];
    const double v = times[k];
    const double dt = v - u;
    // Every coefficient breakpoint is in `times`, so the coefficients are constant on [u, v).
    const Vector2d z(gauss.normal(), gauss.normal());
    x += Vector2d(spec.drift1(u), spec.drift2(u)) * dt + std::sqrt(dt) * (spec.vol_factor(u) * z);
    while (next_jump < jumps.size() && jumps[next_jump].time <= v) {
      x += jumps[next_jump].size;
      ++next_jump;
    }
    values.row(static_cast<Eigen::Index>(k)) = x.transpose();
  }
  return PathRecord(std::move(times), std::move(values), std::move(jumps));
}

double increment(const PathRecord& path, double s, double t, int component) {
  if (component != 1 && component != 2) throw InputError("component must be 1 or 2");
  if (s > t) throw InputError("increment needs s <= t");
  const auto col = static_cast<Eigen::Index>(component - 1);
  return path.values()(static_cast<Eigen::Index>(path.index_of(t)), col) -
         path.values()(static_cast<Eigen::Index>(path.index_of(s)), col);
}

}  // namespace hyvar
