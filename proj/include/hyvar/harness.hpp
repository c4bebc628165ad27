// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo driver: replicated simulations over a ladder of n, compared against limit targets.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyvar/functionals.hpp"
#include "hyvar/model.hpp"
#include "hyvar/schemes.hpp"

namespace hyvar {

/// r(n) = scale * n^exponent.
struct RateLaw {
  double scale = 1.0;
  double exponent = 1.0;
  [[nodiscard]] double operator()(std::size_t n) const;
};

struct Normalization {
  double p = 2.0;
  RateLaw rate;
};

enum class TargetKind { B, BStar, Sync, Uncorrelated, Integer, Preset, Explicit };

struct LimitTarget {
  TargetKind kind = TargetKind::Explicit;
  double value = 0.0;  // used by Explicit only
};

std::string to_string(TargetKind kind);
TargetKind parse_target_kind(const std::string& text);

struct ExperimentConfig {
  SemimartingaleSpec model;
  SchemeSpec scheme = EquidistantSync{};
  /// Thin every generated scheme with alternating_subsample.
  bool alternating = false;
  FunctionalSpec functional = SignedProductPower{1, 1};
  /// 0 evaluates the bivariate functional; 1 or 2 the one-dimensional one of that component.
  int component = 0;
  std::optional<Normalization> normalization;
  std::vector<std::size_t> n_ladder;
  std::size_t replications = 1;
  std::uint64_t base_seed = 0;
  LimitTarget target;
  /// Verdict: |mean - limit| <= se_band * std_error (+ a 1e-12 relative floor).
  double se_band = 4.0;
  /// Exponents for the overlap power condition in scheme diagnostics.
  double diag_p1 = 1.0;
  double diag_p2 = 1.0;
  std::string output;

  /// Throws InputError for inconsistent settings, including an incompatible target.
  void validate() const;
};

std::uint64_t scheme_seed(std::uint64_t base, std::size_t n, std::size_t r);
std::uint64_t path_seed(std::uint64_t base, std::size_t n, std::size_t r);

/// The scheme used by replication r at rung n (thinned if configured).
ObservationScheme replication_scheme(const ExperimentConfig& config, std::size_t n, std::size_t r);

struct ReplicationResult {
  double value = 0.0;
  double limit = 0.0;
};

/// Failure inside one replication, tagged with where it happened.
class ReplicationError : public std::runtime_error {
 public:
  ReplicationError(std::size_t n, std::size_t replication, const std::string& what);
  std::size_t n;
  std::size_t replication;
};

ReplicationResult run_replication(const ExperimentConfig& config, std::size_t n, std::size_t r);

/// All replications at one rung, indexed by replication. `jobs` worker threads.
std::vector<ReplicationResult> run_replications(const ExperimentConfig& config, std::size_t n, unsigned jobs = 1);

struct ReportRow {
  std::size_t n = 0;
  std::size_t replications = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double limit = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  double se_band = 4.0;
  bool pass = false;
  double runtime_seconds = 0.0;
};

/// |mean - limit| <= se_band * SE + 1e-12 * max(1, |limit|).
bool verdict(double abs_error, double std_error, double se_band, double limit);

struct ConvergenceReport {
  std::string functional;
  std::string scheme;
  std::string target;
  std::vector<ReportRow> rows;
  [[nodiscard]] bool all_pass() const;
};

/// Aggregates replication results (in index order) into one report row.
ReportRow summarize(std::size_t n, const std::vector<ReplicationResult>& results, double se_band);

ConvergenceReport run_experiment(const ExperimentConfig& config, unsigned jobs = 1);

/// Fixed-column CSV; excludes runtime so reruns are byte-identical.
void write_csv(std::ostream& os, const ConvergenceReport& report);
/// One "key=value" line per row, including runtime.
void write_rows(std::ostream& os, const ConvergenceReport& report);

struct DiagnosticsRow {
  std::size_t n = 0;
  double mean_mesh = 0.0;
  double mean_condition = 0.0;
  std::size_t max_overlap = 0;
  std::size_t truncated = 0;
};

struct DiagnosticsReport {
  std::vector<DiagnosticsRow> rows;
  bool condition_divergent = false;
};

/// Strictly increasing along the ladder and last >= 2 * first.
bool divergence_flag(const std::vector<double>& values);

DiagnosticsReport run_scheme_diagnostics(const ExperimentConfig& config, unsigned jobs = 1);
void write_csv(std::ostream& os, const DiagnosticsReport& report);

}  // namespace hyvar
