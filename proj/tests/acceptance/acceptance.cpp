// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../oracles.hpp"
#include "hyvar/harness.hpp"
#include "hyvar/limits.hpp"
#include "hyvar/scheme_stats.hpp"

using namespace hyvar;

namespace {

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void note(const std::string& text) {
  std::printf("              note: %s\n", text.c_str());
  std::fflush(stdout);
}

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const ReportRow& row_for(const ConvergenceReport& r, std::size_t n) {
  for (const ReportRow& row : r.rows) {
    if (row.n == n) return row;
  }
  throw std::runtime_error("missing rung");
}

std::string describe_row(const ReportRow& r) {
  return "n=" + std::to_string(r.n) + " mean=" + g(r.mean) + " limit=" + g(r.limit) + " se=" + g(r.std_error) +
         " |err|/se=" + g(r.std_error > 0 ? r.abs_error / r.std_error : 0.0);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 == 1 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

ObservationScheme random_scheme(std::mt19937_64& gen) {
  std::uniform_int_distribution<std::size_t> count(1, 200);
  std::bernoulli_distribution lattice(0.5);
  const bool on = lattice(gen);
  return {oracle::random_times(gen, count(gen), 1.0, on), oracle::random_times(gen, count(gen), 1.0, on), 1.0};
}

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1e-300, std::abs(a), std::abs(b)});
}

// 1. HY estimator on Poisson sampling converges to the covariation 0.5.
void criterion_1() {
  ExperimentConfig c;
  c.model = SemimartingaleSpec::brownian(1, 1, 0.5);
  c.scheme = PoissonScheme{1, 1, 1};
  c.functional = SignedProductPower{1, 1};
  c.n_ladder = {250, 2000};
  c.replications = 200;
  c.base_seed = 101;
  c.target = {TargetKind::Explicit, 0.5};
  const ConvergenceReport r = run_experiment(c, jobs());
  const ReportRow& lo = row_for(r, 250);
  const ReportRow& hi = row_for(r, 2000);
  report(1, hi.pass && hi.abs_error < lo.abs_error,
         describe_row(hi) + "; |err| at n=250 " + g(lo.abs_error) + " > at n=2000 " + g(hi.abs_error));
}

// 2. x^2 y^2 with common and idiosyncratic jumps converges to B* on an asynchronous grid.
void criterion_2() {
  ExperimentConfig c;
  c.model = SemimartingaleSpec::brownian(1, 1, 0);
  const std::vector<JumpEvent> common{{0.2, Vector2d(1.0, 0.5)}, {0.5, Vector2d(-0.8, 1.2)}, {0.85, Vector2d(0.6, -0.7)}};
  const std::vector<JumpEvent> idio{{0.3, Vector2d(1.5, 0.0)}, {0.6, Vector2d(0.0, -1.0)}, {0.75, Vector2d(0.9, 0.0)}};
  for (const auto* list : {&common, &idio}) {
    c.model.scheduled_jumps.insert(c.model.scheduled_jumps.end(), list->begin(), list->end());
  }
  std::sort(c.model.scheduled_jumps.begin(), c.model.scheduled_jumps.end(),
            [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
  c.scheme = EquidistantAsync{1, 0.5};
  c.functional = SignedProductPower{2, 2};
  c.n_ladder = {2000};
  c.replications = 200;
  c.base_seed = 202;
  c.target.kind = TargetKind::BStar;
  const ConvergenceReport r = run_experiment(c, jobs());
  const ReportRow& row = row_for(r, 2000);
  const FunctionalSpec f = SignedProductPower{2, 2};
  const double idio_part = B_sum(idio, f, 1.0, false);
  const double b_all = B_sum(c.model.scheduled_jumps, f, 1.0, false);
  report(2, row.pass && idio_part == 0.0 && b_all == row.limit,
         describe_row(row) + "; idiosyncratic contribution " + g(idio_part));
}

// 3. Oscillating scheme: odd n counts the jump twice, even n once.
void criterion_3() {
  ExperimentConfig c;
  c.model.vol1 = 0.0;
  c.model.vol2 = 1.0;
  c.model.scheduled_jumps = {{0.37, Vector2d(1.3, 0.0)}};
  c.scheme = Oscillating{1};
  c.functional = CustomFunction{[](double x, double) { return x * x * x; }, std::array<double, 2>{3, 0}, "x^3"};
  const std::vector<std::size_t> evens{500, 1000, 2000, 4000};
  for (std::size_t n : evens) {
    c.n_ladder.push_back(n);
    c.n_ladder.push_back(n + 1);
  }
  c.replications = 20;
  c.base_seed = 303;
  c.target.kind = TargetKind::B;
  const ConvergenceReport r = run_experiment(c, jobs());
  bool pass = true;
  std::ostringstream detail;
  detail << "B=" << g(row_for(r, 500).limit) << " odd/even:";
  for (std::size_t n : evens) {
    const double ratio = row_for(r, n + 1).mean / row_for(r, n).mean;
    pass = pass && std::abs(ratio - 2.0) <= 0.15 * 2.0;
    detail << " n=" << n << ":" << g(ratio);
  }
  pass = pass && row_for(r, 4000).abs_error <= 1e-9 * row_for(r, 4000).limit;
  report(3, pass, detail.str());
}

// Median over seeds of V(|x||y|) for a single jump in X1 and a Brownian X2 on EquidistantAsync(n, gamma).
double median_abs_product(std::size_t n, double gamma, std::size_t seeds) {
  ExperimentConfig c;
  c.model.vol1 = 0.0;
  c.model.vol2 = 1.0;
  c.model.scheduled_jumps = {{0.43, Vector2d(1.0, 0.0)}};
  c.scheme = EquidistantAsync{n, gamma};
  c.functional = AbsProductPower{1, 1};
  c.n_ladder = {n};
  c.replications = seeds;
  c.base_seed = 404;
  c.target = {TargetKind::Explicit, 0.0};
  std::vector<double> values;
  for (const ReplicationResult& res : run_replications(c, n, jobs())) values.push_back(res.value);
  return median(values);
}

// 4. Divergence for gamma above p / (2 - p) = 1, boundedness below it.
void criterion_4() {
  // gamma = 3 needs n^{1+gamma} observations of X2 per path.
  const double budget = 5e7;  // observations per path that fit in memory here
  const double need_lo = std::pow(250.0, 4.0);
  const double need_hi = std::pow(2000.0, 4.0);
  const bool feasible = need_hi <= budget;

  const double m250 = median_abs_product(250, 0.5, 100);
  const double m2000 = median_abs_product(2000, 0.5, 100);
  const bool low_gamma_ok = !divergence_flag({m250, m2000});

  std::string detail = "gamma=0.5 medians " + g(m250) + " -> " + g(m2000) + " (flag " +
                       (low_gamma_ok ? "quiet" : "fires") + ")";
  if (!feasible) {
    detail += "; gamma=3 arm not run: needs " + g(need_lo) + " and " + g(need_hi) +
              " X2 observations per path at n=250 and n=2000 (budget " + g(budget) + ")";
  }
  report(4, feasible && low_gamma_ok, detail);

  // Same gamma and the same x8 step in n, at a size this machine can simulate.
  const double s4 = median_abs_product(4, 3.0, 100);
  const double s32 = median_abs_product(32, 3.0, 100);
  note("gamma=3 at n=4 -> n=32 (supplementary, not the criterion): medians " + g(s4) + " -> " + g(s32) +
       ", ratio " + g(s32 / s4) + ", flag " + (divergence_flag({s4, s32}) ? "fires" : "quiet"));
}

// 5. Overlap power condition: upper bound for large exponents, divergence for small ones.
void criterion_5() {
  std::vector<ObservationScheme> schemes;
  for (const SchemeSpec& spec : std::vector<SchemeSpec>{EquidistantSync{100}, EquidistantAsync{100, 0.5},
                                                        EquidistantAsync{50, 1.0}, Oscillating{101},
                                                        Oscillating{100}, PoissonSync{300, 1.0}}) {
    schemes.push_back(generate_scheme(spec, 1.0, 0));
  }
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    schemes.push_back(generate_scheme(PoissonScheme{500, 1.0, 2.0}, 1.0, seed));
    schemes.push_back(alternating_subsample(schemes.back()).scheme);
  }
  std::mt19937_64 gen(505);
  for (int k = 0; k < 200; ++k) schemes.push_back(random_scheme(gen));
  double worst = 0.0;
  bool bounded = true;
  for (const ObservationScheme& s : schemes) {
    const double v = overlap_power_condition(s, 2.5, 2.5);
    const double bound = 3.0 * mesh(s) * s.horizon();
    bounded = bounded && v <= bound;
    worst = std::max(worst, v / bound);
  }
  bool diverges = true;
  std::ostringstream detail;
  detail << "(a) " << schemes.size() << " schemes, max value/bound " << g(worst) << "; (b)";
  for (std::size_t n : {100, 1000, 10000}) {
    const ObservationScheme s = generate_scheme(EquidistantSync{n}, 1.0, 0);
    const double v = overlap_power_condition(s, 0.9, 0.9);
    const double lower = std::pow(mesh(s), -0.1) * 1.0 * 0.5;
    diverges = diverges && v > lower;
    detail << " n=" << n << ":" << g(v) << ">" << g(lower);
  }
  report(5, bounded && diverges, detail.str());
}

// 6. Boundary scheme gamma(p) = 2 for p = 1.5: the cross power sum stays at T.
void criterion_6() {
  const std::size_t n = 2000;
  const double gamma = 2.0;
  // X2 has n^3 = 8e9 intervals; the counting route never materializes them.
  const ArithmeticTimes a = ArithmeticTimes::covering(static_cast<double>(n), 1.0);
  const ArithmeticTimes b = ArithmeticTimes::covering(std::pow(static_cast<double>(n), 1.0 + gamma), 1.0);
  const double value = cross_power_sum_arithmetic(a, b, 1.0, 0.75, 0.75);
  // Cross-check the counting route against G_cross on materialized grids at a small n.
  const std::size_t m = 60;
  const ObservationScheme small = generate_scheme(EquidistantAsync{m, gamma}, 1.0, 0);
  const double direct = G_cross(small, 1.5, 1.5, 1.0)(1.0);
  const double counted =
      cross_power_sum_arithmetic(ArithmeticTimes::covering(static_cast<double>(m), 1.0),
                                 ArithmeticTimes::covering(std::pow(static_cast<double>(m), 3.0), 1.0), 1.0, 0.75, 0.75);
  const bool routes_agree = close(direct, counted, 1e-9);
  report(6, std::abs(value - 1.0) < 0.15 && routes_agree,
         "G_cross(1.5,1.5)(1) at n=2000 = " + g(value) + "; routes at n=60: grid " + g(direct) + " vs count " +
             g(counted));
}

// 7. Normalized fourth power variation on a synchronous grid.
void criterion_7() {
  std::ostringstream detail;
  bool pass = true;
  for (const auto& [sigma, target] : std::vector<std::pair<double, double>>{{1.0, 3.0}, {2.0, 48.0}}) {
    ExperimentConfig c;
    c.model = SemimartingaleSpec::brownian(sigma, 1, 0);
    c.scheme = EquidistantSync{1};
    c.functional = OneDimPower{4, true};
    c.component = 1;
    c.normalization = Normalization{4.0, {}};
    c.n_ladder = {2000};
    c.replications = 200;
    c.base_seed = 707;
    c.target.kind = TargetKind::Sync;
    const ReportRow row = run_experiment(c, jobs()).rows.front();
    pass = pass && row.pass && close(row.limit, target, 1e-12);
    detail << "sigma=" << sigma << ": " << describe_row(row) << "  ";
  }
  report(7, pass, detail.str());
}

// 8. Synchronous Poisson grid, correlation switching from 0 to 1 at 1/2.
void criterion_8() {
  ExperimentConfig c;
  c.model = SemimartingaleSpec::brownian(1, 1, 0);
  c.model.corr = Schedule({0.0, 0.5}, {0.0, 1.0});
  c.scheme = PoissonSync{1, 1.0};
  c.functional = SignedProductPower{1, 1};
  c.normalization = Normalization{2.0, {}};
  c.n_ladder = {2000};
  c.replications = 200;
  c.base_seed = 808;
  c.target.kind = TargetKind::Sync;
  const ReportRow row = run_experiment(c, jobs()).rows.front();
  report(8, row.pass && std::abs(row.limit - 0.5) < 0.01, describe_row(row));
}

// 9. Uncorrelated |x||y| on independent Poisson grids.
void criterion_9() {
  ExperimentConfig c;
  c.model = SemimartingaleSpec::brownian(1, 1, 0);
  c.scheme = PoissonScheme{1, 1, 1};
  c.functional = AbsProductPower{1, 1};
  c.normalization = Normalization{2.0, {}};
  c.n_ladder = {2000};
  c.replications = 200;
  c.base_seed = 909;
  c.target.kind = TargetKind::Uncorrelated;
  const ReportRow row = run_experiment(c, jobs()).rows.front();
  const double m = m_sigma(AbsProductPower{1, 1}, Matrix2d::Identity());
  const double oracle_m = oracle::abs_product_moment(1, 1, 1, 1, 0);
  const bool quad_ok = std::abs(m - oracle_m) < 1e-8;
  report(9, row.pass && quad_ok, describe_row(row) + "; m_I(|x||y|) - oracle = " + g(m - oracle_m));
}

// 10. Integer powers: x^2 y^2 with correlation 0.6, and the simplified presets.
void criterion_10() {
  ExperimentConfig c;
  c.model = SemimartingaleSpec::brownian(1, 1, 0.6);
  c.scheme = PoissonScheme{1, 1, 1};
  c.functional = SignedProductPower{2, 2};
  c.normalization = Normalization{4.0, {}};
  c.n_ladder = {2000};
  c.replications = 200;
  c.base_seed = 1010;
  c.target.kind = TargetKind::Integer;
  const ReportRow row = run_experiment(c, jobs()).rows.front();

  const ObservationScheme s = replication_scheme(c, 2000, 0);
  double worst = 0.0;
  for (ProductPreset tag : {ProductPreset::F22, ProductPreset::F33, ProductPreset::F44}) {
    const unsigned q = preset_power(tag);
    const double general = limit_integer(q, q, c.model, integer_limit_table(s, q, q, 2000.0));
    const double preset = limit_preset(tag, c.model, preset_stats(s, tag, 2000.0));
    worst = std::max(worst, std::abs(general - preset) / std::abs(general));
  }
  report(10, row.pass && worst < 1e-10, describe_row(row) + "; presets vs expansion max rel diff " + g(worst));
}

// 11. Sweep results against brute-force double loops.
void criterion_11() {
  std::mt19937_64 gen(1111);
  bool pairs_ok = true;
  double worst = 0.0, worst_identity = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const ObservationScheme s = random_scheme(gen);
    pairs_ok = pairs_ok && overlap_pairs(s) == oracle::overlap_pairs(s.times1(), s.times2(), 1.0);
    for (const auto& [k, m, p] : std::vector<std::tuple<unsigned, unsigned, double>>{
             {0, 0, 2}, {0, 2, 4}, {2, 0, 4}, {2, 2, 4}, {2, 2, 6}, {4, 4, 8}}) {
      const auto H = H_stat(s, k, m, p, 1.0);
      const auto G = G_kmp(s, k, m, p, 1.0);
      const auto hterms = oracle::pair_terms(s.times1(), s.times2(), 1.0, [&](const oracle::Pair& q) {
        return oracle::pw(q.diff1, k / 2.0) * oracle::pw(q.diff2, m / 2.0) * oracle::pw(q.overlap, (p - k - m) / 2.0);
      });
      const auto gterms = oracle::pair_terms(s.times1(), s.times2(), 1.0, [&](const oracle::Pair& q) {
        return oracle::pw(q.len1, k / 2.0) * oracle::pw(q.len2, m / 2.0) * oracle::pw(q.overlap, (p - k - m) / 2.0);
      });
      for (double t : G.breakpoints()) {
        for (const auto& [F, terms] : {std::pair{&H, &hterms}, std::pair{&G, &gterms}}) {
          const double want = oracle::cumulative(*terms, t);
          const double got = (*F)(t);
          worst = std::max(worst, std::abs(got - want) / std::max({1e-300, std::abs(got), std::abs(want)}));
        }
      }
    }
    for (double p : {4.0, 6.0, 8.0}) {
      const auto G = G_kmp(s, 2, 2, p, 1.0);
      const auto a = H_stat(s, 0, 0, p, 1.0), b = H_stat(s, 0, 2, p, 1.0), c = H_stat(s, 2, 0, p, 1.0),
                 d = H_stat(s, 2, 2, p, 1.0);
      for (double t : G.breakpoints()) {
        const double sum = a(t) + b(t) + c(t) + d(t);
        worst_identity = std::max(worst_identity, std::abs(G(t) - sum) / std::max({1e-300, G(t), sum}));
      }
    }
  }
  report(11, pairs_ok && worst <= 1e-12 && worst_identity <= 1e-12,
         std::string("pair sets ") + (pairs_ok ? "identical" : "differ") + "; max rel diff H/G " + g(worst) +
             "; G_{2,2,p} identity " + g(worst_identity));
}

// 12. Gaussian moments and the closed form of m_Sigma for integer product powers.
void criterion_12() {
  bool recurrence = gaussian_moment(0) == 1.0;
  for (unsigned k = 1; k <= 20; ++k) {
    recurrence = recurrence && (k % 2 == 1 ? gaussian_moment(k) == 0.0
                                           : gaussian_moment(k) == (k - 1) * gaussian_moment(k - 2));
  }
  std::mt19937_64 gen(1212);
  std::uniform_real_distribution<double> vol(0.2, 2.0), rho(-1.0, 1.0);
  double worst_gh = 0.0, worst_isserlis = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double s1 = vol(gen), s2 = vol(gen), r = rho(gen);
    Matrix2d S;
    S << s1 * s1, r * s1 * s2, r * s1 * s2, s2 * s2;
    for (unsigned p1 = 0; p1 <= 8; ++p1) {
      for (unsigned p2 = 0; p1 + p2 <= 8; ++p2) {
        const double closed = m_sigma_closed_form({p1, p2}, S);
        worst_gh = std::max(worst_gh, std::abs(closed - m_sigma_gauss_hermite(SignedProductPower{p1, p2}, S)));
        worst_isserlis =
            std::max(worst_isserlis, std::abs(closed - oracle::isserlis(p1, p2, S(0, 0), S(1, 1), S(0, 1))));
      }
    }
  }
  report(12, recurrence && worst_gh < 1e-8,
         std::string("recurrence ") + (recurrence ? "exact" : "broken") + "; max |closed - quadrature| " +
             g(worst_gh) + "; max |closed - Isserlis| " + g(worst_isserlis));
}

// 13. Perturbed functional: the gap to the unperturbed one shrinks with the mesh.
void criterion_13() {
  ExperimentConfig c;
  c.model = SemimartingaleSpec::brownian(1, 1, 0.5);
  c.scheme = PoissonScheme{1, 1, 1};
  c.n_ladder = {250, 1000, 4000};
  c.replications = 100;
  c.base_seed = 1313;
  const FunctionalSpec base = SignedProductPower{1, 1};
  const FunctionalSpec pert = parse_functional("pert:hy");
  std::vector<double> medians;
  for (std::size_t n : c.n_ladder) {
    std::vector<double> gaps;
    for (std::size_t r = 0; r < c.replications; ++r) {
      const ObservationScheme s = replication_scheme(c, n, r);
      const PathRecord p = sample_path(c.model, s.request_times(), path_seed(c.base_seed, n, r));
      const double rate = static_cast<double>(n);
      gaps.push_back(std::abs(eval_Vbar(2.0, pert, s, p, rate) - eval_Vbar(2.0, base, s, p, rate)));
    }
    medians.push_back(median(gaps));
  }
  report(13, medians[1] < medians[0] && medians[2] < medians[1],
         "median gaps " + g(medians[0]) + " > " + g(medians[1]) + " > " + g(medians[2]));
}

// 14. Reports are byte-identical across reruns and worker counts.
void criterion_14() {
  ExperimentConfig c;
  c.model = SemimartingaleSpec::brownian(1, 1, 0.5);
  c.model.poisson_jumps = PoissonJumps{3.0, {}, {}, 0.5};
  c.scheme = PoissonScheme{1, 1, 2};
  c.functional = SignedProductPower{2, 2};
  c.n_ladder = {100, 500};
  c.replications = 50;
  c.base_seed = 1414;
  c.target.kind = TargetKind::BStar;
  auto csv = [&](unsigned workers) {
    std::ostringstream os;
    write_csv(os, run_experiment(c, workers));
    return os.str();
  };
  const std::string a = csv(1);
  const bool same = a == csv(1) && a == csv(2) && a == csv(4);
  report(14, same, std::string("single-worker rerun and 2/4 workers ") + (same ? "byte-identical" : "differ"));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{criterion_1,  criterion_2,  criterion_3,  criterion_4,  criterion_5,
                                                    criterion_6,  criterion_7,  criterion_8,  criterion_9,  criterion_10,
                                                    criterion_11, criterion_12, criterion_13, criterion_14};
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[k]();
    } catch (const std::exception& e) {
      report(static_cast<int>(k + 1), false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    note("runtime " + g(secs) + " s");
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
