// SPDX-License-Identifier: Apache-2.0
//
// hyvar: command-line front end.
//   exit 0 success, 1 input error, 2 acceptance-verdict failure.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "hyvar/config.hpp"
#include "hyvar/errors.hpp"
#include "hyvar/harness.hpp"
#include "hyvar/limits.hpp"
#include "hyvar/scheme_stats.hpp"

namespace {

using namespace hyvar;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned jobs = 1;
  std::string format = "csv";
  std::optional<std::size_t> n;
  std::size_t replication = 0;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Output goes to --out when given, else stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InputError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

ExperimentConfig load_experiment(const Common& c) {
  if (c.config.empty()) throw InputError("--config is required");
  const std::filesystem::path path(c.config);
  ExperimentConfig cfg = experiment_from_json(load_json(path), path.parent_path());
  if (c.seed) cfg.base_seed = *c.seed;
  return cfg;
}

std::size_t pick_n(const Common& c, const ExperimentConfig& cfg) { return c.n ? *c.n : cfg.n_ladder.back(); }

int cmd_simulate(const Common& c, const std::string& times_text) {
  if (c.config.empty()) throw InputError("--config is required");
  const std::filesystem::path path(c.config);
  const Json j = load_json(path);
  const SemimartingaleSpec model = model_from_json(j.at("model"));
  std::vector<double> times;
  const std::uint64_t seed = c.seed.value_or(j.value("base_seed", std::uint64_t{0}));
  if (!times_text.empty()) {
    std::stringstream ss(times_text);
    std::string item;
    while (std::getline(ss, item, ',')) times.push_back(std::stod(item));
  } else if (j.contains("times")) {
    times = j.at("times").get<std::vector<double>>();
  } else if (j.contains("scheme")) {
    const std::size_t n = c.n.value_or(j.value("n_ladder", std::vector<std::size_t>{1}).back());
    const SchemeSpec spec = with_n(scheme_from_json(j.at("scheme"), path.parent_path()), n);
    times = generate_scheme(spec, model.horizon, scheme_seed(seed, n, c.replication)).request_times();
  }
  const PathRecord p = sample_path(model, times, seed);
  Output out(c.out);
  std::ostream& os = out.stream();
  os << "time,x1,x2\n";
  for (std::size_t k = 0; k < p.times().size(); ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    os << fmt(p.times()[k]) << ',' << fmt(p.values()(row, 0)) << ',' << fmt(p.values()(row, 1)) << '\n';
  }
  for (const JumpEvent& e : p.jumps()) {
    std::cerr << "jump " << fmt(e.time) << ' ' << fmt(e.size[0]) << ' ' << fmt(e.size[1]) << '\n';
  }
  return 0;
}

int cmd_scheme(const Common& c, bool diagnose) {
  const ExperimentConfig cfg = load_experiment(c);
  Output out(c.out);
  if (diagnose) {
    const DiagnosticsReport report = run_scheme_diagnostics(cfg, c.jobs);
    write_csv(out.stream(), report);
    return 0;
  }
  write_scheme(out.stream(), replication_scheme(cfg, pick_n(c, cfg), c.replication));
  return 0;
}

int cmd_eval(const Common& c) {
  const ExperimentConfig cfg = load_experiment(c);
  const ReplicationResult r = run_replication(cfg, pick_n(c, cfg), c.replication);
  Output out(c.out);
  out.stream() << fmt(r.value) << '\n';
  return 0;
}

int cmd_limit(const Common& c) {
  const ExperimentConfig cfg = load_experiment(c);
  const ReplicationResult r = run_replication(cfg, pick_n(c, cfg), c.replication);
  Output out(c.out);
  out.stream() << fmt(r.limit) << '\n';
  return 0;
}

struct StatArgs {
  std::string stat = "g_onedim";
  double p = 2.0;
  double p1 = 1.0;
  double p2 = 1.0;
  unsigned k = 0;
  unsigned m = 0;
  int l = 1;
  std::optional<double> rate;
};

int cmd_stats(const Common& c, const StatArgs& a) {
  const ExperimentConfig cfg = load_experiment(c);
  const std::size_t n = pick_n(c, cfg);
  const ObservationScheme scheme = replication_scheme(cfg, n, c.replication);
  const double rate = a.rate.value_or(cfg.normalization ? cfg.normalization->rate(n) : static_cast<double>(n));
  Output out(c.out);
  if (a.stat == "g_onedim") {
    write_step_function(out.stream(), G_onedim(scheme, a.l, a.p, rate));
  } else if (a.stat == "g_cross") {
    write_step_function(out.stream(), G_cross(scheme, a.p1, a.p2, rate));
  } else if (a.stat == "h") {
    write_step_function(out.stream(), H_stat(scheme, a.k, a.m, a.p, rate));
  } else if (a.stat == "g_kmp") {
    write_step_function(out.stream(), G_kmp(scheme, a.k, a.m, a.p, rate));
  } else if (a.stat == "condition") {
    out.stream() << fmt(overlap_power_condition(scheme, a.p1, a.p2)) << '\n';
  } else {
    throw InputError("unknown statistic '" + a.stat + "'");
  }
  return 0;
}

int cmd_converge(const Common& c) {
  const ExperimentConfig cfg = load_experiment(c);
  const ConvergenceReport report = run_experiment(cfg, c.jobs);
  const std::string target = !c.out.empty() ? c.out : cfg.output;
  Output out(target);
  if (c.format == "rows") {
    write_rows(out.stream(), report);
  } else {
    write_csv(out.stream(), report);
  }
  return report.all_pass() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hayashi–Yoshida-type functionals: simulation, scheme statistics, limits, convergence runs"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON configuration file");
    sub->add_option("--seed", common.seed, "override base seed");
    sub->add_option("--out", common.out, "output path (default stdout)");
    sub->add_option("--jobs", common.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--format", common.format, "report format")->check(CLI::IsMember({"csv", "rows"}));
    sub->add_option("--n", common.n, "ladder rung (default: last)");
    sub->add_option("--replication", common.replication, "replication index (default 0)");
  };

  std::string times_text;
  auto* simulate = app.add_subcommand("simulate", "emit a sampled path");
  add_common(simulate);
  simulate->add_option("--times", times_text, "comma-separated request times");

  bool diagnose = false;
  auto* scheme = app.add_subcommand("scheme", "emit a scheme or diagnose the ladder");
  add_common(scheme);
  scheme->add_flag("--diagnose", diagnose, "mesh, overlap condition and overlap counts per n");

  auto* eval = app.add_subcommand("eval", "evaluate the configured functional once");
  add_common(eval);

  StatArgs stat_args;
  auto* stats = app.add_subcommand("stats", "emit a scheme statistic as a step function");
  add_common(stats);
  stats->add_option("--stat", stat_args.stat, "g_onedim | g_cross | h | g_kmp | condition");
  stats->add_option("--p", stat_args.p, "power p");
  stats->add_option("--p1", stat_args.p1, "power p1");
  stats->add_option("--p2", stat_args.p2, "power p2");
  stats->add_option("--k", stat_args.k, "k");
  stats->add_option("--m", stat_args.m, "m");
  stats->add_option("--l", stat_args.l, "component")->check(CLI::Range(1, 2));
  stats->add_option("--rate", stat_args.rate, "rate (default: normalization rate or n)");

  auto* limit = app.add_subcommand("limit", "compute the configured limit target");
  add_common(limit);

  auto* converge = app.add_subcommand("converge", "run the full convergence experiment");
  add_common(converge);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*simulate) return cmd_simulate(common, times_text);
    if (*scheme) return cmd_scheme(common, diagnose);
    if (*eval) return cmd_eval(common);
    if (*stats) return cmd_stats(common, stat_args);
    if (*limit) return cmd_limit(common);
    if (*converge) return cmd_converge(common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
