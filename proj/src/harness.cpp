// SPDX-License-Identifier: Apache-2.0
#include "hyvar/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <thread>

#include "hyvar/errors.hpp"
#include "hyvar/limits.hpp"
#include "hyvar/rng.hpp"
#include "hyvar/scheme_stats.hpp"

namespace hyvar {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Runs task(i) for i in [0, count) on `jobs` threads. Exceptions are rethrown for the lowest
// failing index, so the error seen does not depend on scheduling.
template <typename Task>
void parallel_for(std::size_t count, unsigned jobs, Task&& task) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

AlternatingResult replication_scheme_full(const ExperimentConfig& config, std::size_t n, std::size_t r) {
  ObservationScheme scheme =
      generate_scheme(with_n(config.scheme, n), config.model.horizon, scheme_seed(config.base_seed, n, r));
  if (config.alternating) return alternating_subsample(scheme);
  return {std::move(scheme), false};
}

double total_degree(const FunctionalSpec& f) {
  const auto d = declared_degrees(f);
  return d ? (*d)[0] + (*d)[1] : std::nan("");
}

}  // namespace

double RateLaw::operator()(std::size_t n) const { return scale * std::pow(static_cast<double>(n), exponent); }

std::string to_string(TargetKind kind) {
  switch (kind) {
    case TargetKind::B: return "b";
    case TargetKind::BStar: return "b_star";
    case TargetKind::Sync: return "sync";
    case TargetKind::Uncorrelated: return "uncorrelated";
    case TargetKind::Integer: return "integer";
    case TargetKind::Preset: return "preset";
    case TargetKind::Explicit: return "explicit";
  }
  return "?";
}

TargetKind parse_target_kind(const std::string& text) {
  for (TargetKind k : {TargetKind::B, TargetKind::BStar, TargetKind::Sync, TargetKind::Uncorrelated,
                       TargetKind::Integer, TargetKind::Preset, TargetKind::Explicit}) {
    if (to_string(k) == text) return k;
  }
  throw InputError("unknown limit target '" + text + "'");
}

void ExperimentConfig::validate() const {
  model.validate();
  hyvar::validate(scheme);
  if (n_ladder.empty()) throw InputError("n_ladder must not be empty");
  for (std::size_t k = 0; k < n_ladder.size(); ++k) {
    if (n_ladder[k] < 1) throw InputError("n_ladder entries must be >= 1");
    if (k > 0 && n_ladder[k] <= n_ladder[k - 1]) throw InputError("n_ladder must be strictly increasing");
  }
  if (replications < 1) throw InputError("replications must be >= 1");
  if (component < 0 || component > 2) throw InputError("component must be 0, 1 or 2");
  if (!(se_band > 0.0)) throw InputError("se_band must be positive");
  if (normalization) {
    if (!(normalization->p >= 0.0)) throw InputError("normalization p must be >= 0");
    if (!(normalization->rate.scale > 0.0)) throw InputError("rate scale must be positive");
  }
  if (component != 0) evaluate_onedim(functional, 1.0);  // throws for two-dimensional functionals

  const auto incompatible = [&](const std::string& why) {
    return InputError("limit target '" + to_string(target.kind) + "' is incompatible: " + why);
  };
  const bool normalized_target = target.kind == TargetKind::Sync || target.kind == TargetKind::Uncorrelated ||
                                 target.kind == TargetKind::Integer || target.kind == TargetKind::Preset;
  if (normalized_target) {
    if (!normalization) throw incompatible("needs a normalization");
    if (std::holds_alternative<PerturbedProductPower>(functional)) throw incompatible("functional is not homogeneous");
    const double deg = total_degree(functional);
    if (std::isnan(deg)) throw incompatible("functional has no declared degrees");
    if (std::abs(deg - normalization->p) > 1e-12) throw incompatible("normalization p differs from the functional degree");
  }
  switch (target.kind) {
    case TargetKind::BStar:
      if (component != 0) throw incompatible("B* is bivariate");
      break;
    case TargetKind::Uncorrelated:
      if (component != 0) throw incompatible("bivariate only");
      if (!model.corr.identically(0.0)) throw incompatible("correlation schedule is not zero");
      break;
    case TargetKind::Integer:
    case TargetKind::Preset: {
      if (component != 0) throw incompatible("bivariate only");
      const auto* s = std::get_if<SignedProductPower>(&functional);
      if (!s) throw incompatible("needs a signed product power");
      if (target.kind == TargetKind::Preset && (s->p1 != s->p2 || s->p1 < 1 || s->p1 > 4)) {
        throw incompatible("needs x^q y^q with q in 1..4");
      }
      break;
    }
    default:
      break;
  }
}

std::uint64_t scheme_seed(std::uint64_t base, std::size_t n, std::size_t r) {
  return derive_seed(base, {n, r, label_hash("scheme")});
}

std::uint64_t path_seed(std::uint64_t base, std::size_t n, std::size_t r) {
  return derive_seed(base, {n, r, label_hash("path")});
}

ObservationScheme replication_scheme(const ExperimentConfig& config, std::size_t n, std::size_t r) {
  return replication_scheme_full(config, n, r).scheme;
}

ReplicationError::ReplicationError(std::size_t n_, std::size_t replication_, const std::string& what)
    : std::runtime_error("n=" + std::to_string(n_) + ", replication " + std::to_string(replication_) + ": " + what),
      n(n_),
      replication(replication_) {}

ReplicationResult run_replication(const ExperimentConfig& config, std::size_t n, std::size_t r) {
  try {
    const ObservationScheme scheme = replication_scheme(config, n, r);
    const std::vector<double> request = scheme.request_times();
    const PathRecord path = sample_path(config.model, request, path_seed(config.base_seed, n, r));
    const FunctionalSpec& f = config.functional;
    const double T = config.model.horizon;
    const double rate = config.normalization ? config.normalization->rate(n) : 1.0;
    const double p = config.normalization ? config.normalization->p : 2.0;

    ReplicationResult out;
    out.value = config.component == 0 ? eval_Vbar(p, f, scheme, path, rate)
                                       : eval_Vbar_onedim(p, f, scheme, path, config.component, rate);

    switch (config.target.kind) {
      case TargetKind::B:
        out.limit = config.component == 0 ? B_sum(path.jumps(), f, T, false)
                                          : B_onedim(path.jumps(), f, T, config.component);
        break;
      case TargetKind::BStar:
        out.limit = B_sum(path.jumps(), f, T, true);
        break;
      case TargetKind::Sync:
        out.limit = config.component == 0
                        ? limit_sync(p, f, config.model, G_onedim(scheme, 1, p, rate))
                        : limit_onedim(p, f, config.model, config.component,
                                       G_onedim(scheme, config.component, p, rate));
        break;
      case TargetKind::Uncorrelated: {
        const auto d = *declared_degrees(f);
        out.limit = limit_uncorrelated(d[0], d[1], f, config.model, G_cross(scheme, d[0], d[1], rate));
        break;
      }
      case TargetKind::Integer: {
        const auto& s = std::get<SignedProductPower>(f);
        out.limit = limit_integer(s.p1, s.p2, config.model, integer_limit_table(scheme, s.p1, s.p2, rate));
        break;
      }
      case TargetKind::Preset: {
        const auto tag = static_cast<ProductPreset>(std::get<SignedProductPower>(f).p1 - 1);
        out.limit = limit_preset(tag, config.model, preset_stats(scheme, tag, rate));
        break;
      }
      case TargetKind::Explicit:
        out.limit = config.target.value;
        break;
    }
    return out;
  } catch (const std::exception& e) {
    throw ReplicationError(n, r, e.what());
  }
}

std::vector<ReplicationResult> run_replications(const ExperimentConfig& config, std::size_t n, unsigned jobs) {
  std::vector<ReplicationResult> results(config.replications);
  parallel_for(config.replications, jobs, [&](std::size_t r) { results[r] = run_replication(config, n, r); });
  return results;
}

bool verdict(double abs_error, double std_error, double se_band, double limit) {
  return abs_error <= se_band * std_error + 1e-12 * std::max(1.0, std::abs(limit));
}

ReportRow summarize(std::size_t n, const std::vector<ReplicationResult>& results, double se_band) {
  if (results.empty()) throw InputError("no replications to summarize");
  const double R = static_cast<double>(results.size());
  KahanSum<double> sum_v, sum_l;
  for (const auto& res : results) {
    sum_v += res.value;
    sum_l += res.limit;
  }
  ReportRow row;
  row.n = n;
  row.replications = results.size();
  row.mean = sum_v.value() / R;
  row.limit = sum_l.value() / R;
  KahanSum<double> ss;
  for (const auto& res : results) ss += (res.value - row.mean) * (res.value - row.mean);
  const double sd = results.size() > 1 ? std::sqrt(ss.value() / (R - 1.0)) : 0.0;
  row.std_error = sd / std::sqrt(R);
  row.abs_error = std::abs(row.mean - row.limit);
  if (row.limit != 0.0) {
    row.rel_error = row.abs_error / std::abs(row.limit);
  } else {
    row.rel_error = row.abs_error == 0.0 ? 0.0 : INFINITY;
  }
  row.se_band = se_band;
  row.pass = verdict(row.abs_error, row.std_error, se_band, row.limit);
  return row;
}

bool ConvergenceReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

ConvergenceReport run_experiment(const ExperimentConfig& config, unsigned jobs) {
  config.validate();
  ConvergenceReport report;
  report.functional = hyvar::to_string(config.functional);
  report.scheme = describe(config.scheme) + (config.alternating ? " alternating" : "");
  report.target = to_string(config.target.kind);
  for (std::size_t n : config.n_ladder) {
    const auto start = std::chrono::steady_clock::now();
    const auto results = run_replications(config, n, jobs);
    ReportRow row = summarize(n, results, config.se_band);
    row.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.rows.push_back(row);
  }
  return report;
}

void write_csv(std::ostream& os, const ConvergenceReport& report) {
  os << "n,replications,mean,std_error,limit,abs_error,rel_error,se_band,verdict\n";
  for (const ReportRow& r : report.rows) {
    os << r.n << ',' << r.replications << ',' << fmt(r.mean) << ',' << fmt(r.std_error) << ',' << fmt(r.limit)
       << ',' << fmt(r.abs_error) << ',' << fmt(r.rel_error) << ',' << fmt(r.se_band) << ','
       << (r.pass ? "pass" : "fail") << '\n';
  }
}

void write_rows(std::ostream& os, const ConvergenceReport& report) {
  for (const ReportRow& r : report.rows) {
    os << "functional=" << report.functional << " scheme=\"" << report.scheme << "\" target=" << report.target
       << " n=" << r.n << " R=" << r.replications << " mean=" << fmt(r.mean) << " se=" << fmt(r.std_error)
       << " limit=" << fmt(r.limit) << " abs_error=" << fmt(r.abs_error) << " rel_error=" << fmt(r.rel_error)
       << " verdict=" << (r.pass ? "pass" : "fail") << " runtime_s=" << fmt(r.runtime_seconds) << '\n';
  }
}

bool divergence_flag(const std::vector<double>& values) {
  if (values.size() < 2) return false;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (!(values[k] > values[k - 1])) return false;
  }
  return values.back() >= 2.0 * values.front();
}

DiagnosticsReport run_scheme_diagnostics(const ExperimentConfig& config, unsigned jobs) {
  config.validate();
  DiagnosticsReport report;
  std::vector<double> conditions;
  for (std::size_t n : config.n_ladder) {
    struct Item {
      double mesh = 0.0;
      double condition = 0.0;
      std::size_t overlap = 0;
      bool truncated = false;
    };
    std::vector<Item> items(config.replications);
    parallel_for(config.replications, jobs, [&](std::size_t r) {
      const AlternatingResult s = replication_scheme_full(config, n, r);
      items[r] = {mesh(s.scheme), overlap_power_condition(s.scheme, config.diag_p1, config.diag_p2),
                  max_overlap_count(s.scheme), s.truncated};
    });
    DiagnosticsRow row;
    row.n = n;
    KahanSum<double> m, c;
    for (const Item& it : items) {
      m += it.mesh;
      c += it.condition;
      row.max_overlap = std::max(row.max_overlap, it.overlap);
      row.truncated += it.truncated ? 1 : 0;
    }
    row.mean_mesh = m.value() / static_cast<double>(items.size());
    row.mean_condition = c.value() / static_cast<double>(items.size());
    conditions.push_back(row.mean_condition);
    report.rows.push_back(row);
  }
  report.condition_divergent = divergence_flag(conditions);
  return report;
}

void write_csv(std::ostream& os, const DiagnosticsReport& report) {
  os << "n,mean_mesh,mean_condition,max_overlap,truncated,condition_flag\n";
  const char* flag = report.condition_divergent ? "divergent" : "stable";
  for (const DiagnosticsRow& r : report.rows) {
    os << r.n << ',' << fmt(r.mean_mesh) << ',' << fmt(r.mean_condition) << ',' << r.max_overlap << ','
       << r.truncated << ',' << flag << '\n';
  }
}

}  // namespace hyvar
