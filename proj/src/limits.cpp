// SPDX-License-Identifier: Apache-2.0
#include "hyvar/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hyvar/errors.hpp"
#include "hyvar/quadrature.hpp"
#include "hyvar/scheme_stats.hpp"

namespace hyvar {

namespace {

double binomial(unsigned n, unsigned k) {
  if (k > n) return 0.0;
  double out = 1.0;
  for (unsigned j = 1; j <= k; ++j) out = out * static_cast<double>(n - k + j) / static_cast<double>(j);
  return std::round(out);
}

double multinomial(unsigned n, unsigned l, unsigned m) { return binomial(n, l) * binomial(n - l, m); }

struct Factor {
  double l11 = 0.0;
  double l21 = 0.0;
  double l22 = 0.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double rho = 0.0;
};

Factor psd_factor(const Matrix2d& S) {
  if (!S.allFinite()) throw InputError("covariance matrix must be finite");
  const double scale = std::max({std::abs(S(0, 0)), std::abs(S(1, 1)), 1e-300});
  if (std::abs(S(0, 1) - S(1, 0)) > 1e-12 * scale) throw InputError("covariance matrix must be symmetric");
  if (S(0, 0) < 0.0 || S(1, 1) < 0.0) throw InputError("covariance matrix must be positive semidefinite");
  const double c = 0.5 * (S(0, 1) + S(1, 0));
  if (c * c > S(0, 0) * S(1, 1) * (1.0 + 1e-12) + 1e-300) {
    throw InputError("covariance matrix must be positive semidefinite");
  }
  Factor f;
  f.sigma1 = std::sqrt(S(0, 0));
  f.sigma2 = std::sqrt(S(1, 1));
  f.rho = f.sigma1 * f.sigma2 > 0.0 ? std::clamp(c / (f.sigma1 * f.sigma2), -1.0, 1.0) : 0.0;
  f.l11 = f.sigma1;
  f.l21 = f.rho * f.sigma2;
  f.l22 = std::sqrt(1.0 - f.rho * f.rho) * f.sigma2;
  return f;
}

bool is_homogeneous(const FunctionalSpec& f) {
  return !std::holds_alternative<PerturbedProductPower>(f) && declared_degrees(f).has_value();
}

// E f(L w) for w ~ N(0, I_2) and f homogeneous of total degree p, in polar coordinates.
double polar_expectation(const FunctionalSpec& f, const Factor& L, double p) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  std::vector<double> cuts{0.0, kTwoPi};
  auto add_cut = [&](double theta) {
    theta = std::fmod(theta, kTwoPi);
    if (theta < 0.0) theta += kTwoPi;
    cuts.push_back(theta);
  };
  add_cut(std::numbers::pi / 2);
  add_cut(3 * std::numbers::pi / 2);
  if (L.l21 != 0.0 || L.l22 != 0.0) {
    const double theta0 = std::atan2(-L.l21, L.l22);
    add_cut(theta0);
    add_cut(theta0 + std::numbers::pi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto angular = [&](double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return evaluate(f, L.l11 * c, L.l21 * c + L.l22 * s);
  };
  KahanSum<double> integral;
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    if (cuts[k] > cuts[k - 1]) integral += tanh_sinh(angular, cuts[k - 1], cuts[k]);
  }
  const double radial = std::pow(2.0, p / 2.0) * std::tgamma(1.0 + p / 2.0);
  return radial * integral.value() / kTwoPi;
}

const QuadratureRule<double>& hermite_rule(int order) {
  static thread_local std::map<int, QuadratureRule<double>> cache;
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, gauss_hermite<double>(order)).first;
  return it->second;
}

}  // namespace

double B_sum(std::span<const JumpEvent> jumps, const FunctionalSpec& f, double T, bool common_only) {
  KahanSum<double> sum;
  for (const JumpEvent& j : jumps) {
    if (j.time > T) continue;
    if (common_only && !j.is_common()) continue;
    sum += evaluate(f, j.size[0], j.size[1]);
  }
  return sum.value();
}

double B_onedim(std::span<const JumpEvent> jumps, const FunctionalSpec& g, double T, int l) {
  if (l != 1 && l != 2) throw InputError("component must be 1 or 2");
  KahanSum<double> sum;
  for (const JumpEvent& j : jumps) {
    const double dx = j.size[l - 1];
    // A jump of the other component leaves this one unchanged and is not a jump time here.
    if (j.time > T || dx == 0.0) continue;
    sum += evaluate_onedim(g, dx);
  }
  return sum.value();
}

double abs_gaussian_moment(double q) {
  if (!(q >= 0.0)) throw InputError("moment order must be >= 0");
  return std::pow(2.0, q / 2.0) * std::tgamma((q + 1.0) / 2.0) / std::sqrt(std::numbers::pi);
}

double m_sigma_closed_form(const SignedProductPower& f, const Matrix2d& Sigma) {
  const Factor L = psd_factor(Sigma);
  const double r2 = 1.0 - L.rho * L.rho;
  KahanSum<double> sum;
  for (unsigned l = 0; l <= f.p2; ++l) {
    const double g = gaussian_moment(f.p1 + f.p2 - l) * gaussian_moment(l);
    if (g == 0.0) continue;
    sum += binomial(f.p2, l) * ipow(L.rho, f.p2 - l) * pow0(r2, l / 2.0) * g;
  }
  return ipow(L.sigma1, f.p1) * ipow(L.sigma2, f.p2) * sum.value();
}

double m_sigma_gauss_hermite(const FunctionalSpec& f, const Matrix2d& Sigma, int order) {
  const Factor L = psd_factor(Sigma);
  const auto& rule = hermite_rule(order);
  KahanSum<double> sum;
  for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
    const double x = L.l11 * rule.nodes[a];
    for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
      const double y = L.l21 * rule.nodes[a] + L.l22 * rule.nodes[b];
      sum += rule.weights[a] * rule.weights[b] * evaluate(f, x, y);
    }
  }
  return sum.value();
}

double m_sigma(const FunctionalSpec& f, const Matrix2d& Sigma) {
  if (const auto* s = std::get_if<SignedProductPower>(&f)) return m_sigma_closed_form(*s, Sigma);
  if (is_homogeneous(f)) {
    const auto d = *declared_degrees(f);
    return polar_expectation(f, psd_factor(Sigma), d[0] + d[1]);
  }
  return m_sigma_gauss_hermite(f, Sigma, 48);
}

double m_one(const FunctionalSpec& g) {
  if (const auto* o = std::get_if<OneDimPower>(&g)) {
    return o->is_signed ? gaussian_moment(static_cast<unsigned>(o->p)) : abs_gaussian_moment(o->p);
  }
  if (const auto* s = std::get_if<SignedProductPower>(&g); s && s->p2 == 0) return gaussian_moment(s->p1);
  if (const auto* a = std::get_if<AbsProductPower>(&g); a && a->p2 == 0.0) return abs_gaussian_moment(a->p1);
  if (const auto* c = std::get_if<CustomFunction>(&g)) {
    if (c->degrees) {
      // g(x) = |x|^d g(sign x) for g homogeneous of degree d.
      return abs_gaussian_moment((*c->degrees)[0]) * 0.5 * (c->fn(1.0, 0.0) + c->fn(-1.0, 0.0));
    }
    const auto& rule = hermite_rule(48);
    KahanSum<double> sum;
    for (std::size_t a = 0; a < rule.nodes.size(); ++a) sum += rule.weights[a] * c->fn(rule.nodes[a], 0.0);
    return sum.value();
  }
  throw InputError("functional '" + to_string(g) + "' is not one-dimensional");
}

std::vector<Triple> enumerate_L(unsigned p1, unsigned p2) {
  std::vector<Triple> out;
  for (unsigned k = 0; k <= p1; k += 2) {
    for (unsigned l = 0; l <= p2; l += 2) {
      for (unsigned m = 0; l + m <= p2; m += 2) {
        if ((p1 + p2 - (k + l + m)) % 2 == 0) out.push_back({k, l, m});
      }
    }
  }
  return out;
}

double stieltjes(const Schedule& integrand, const StepFunction<double>& F, double T) {
  return stieltjes(integrand, std::span<const double>(integrand.breakpoints()), F, T);
}

double limit_sync(double p, const FunctionalSpec& f, const SemimartingaleSpec& spec, const StepFunction<double>& Gp) {
  if (!is_homogeneous(f)) throw ContractError("limit_sync needs a functional with declared homogeneity degrees");
  const auto d = *declared_degrees(f);
  if (std::abs(d[0] + d[1] - p) > 1e-12) throw ContractError("functional degree does not match p");
  const Schedule h = volatility_integrand(spec, [&](double t) { return m_sigma(f, spec.spot_covariance(t)); });
  return stieltjes(h, Gp, spec.horizon);
}

double limit_onedim(double p, const FunctionalSpec& g, const SemimartingaleSpec& spec, int l,
                    const StepFunction<double>& Gp_l) {
  if (l != 1 && l != 2) throw InputError("component must be 1 or 2");
  const auto d = declared_degrees(g);
  if (!d || std::holds_alternative<PerturbedProductPower>(g)) {
    throw ContractError("limit_onedim needs a functional with a declared degree");
  }
  if ((*d)[1] != 0.0 || std::abs((*d)[0] - p) > 1e-12) throw ContractError("functional degree does not match p");
  const double m1 = m_one(g);
  const Schedule& vol = l == 1 ? spec.vol1 : spec.vol2;
  const Schedule h = volatility_integrand(spec, [&](double t) { return pow0(vol(t), p); });
  return m1 * stieltjes(h, Gp_l, spec.horizon);
}

double limit_uncorrelated(double p1, double p2, const FunctionalSpec& f, const SemimartingaleSpec& spec,
                          const StepFunction<double>& Gcross) {
  if (!spec.corr.identically(0.0)) throw ContractError("limit_uncorrelated needs a zero correlation schedule");
  if (!is_homogeneous(f)) throw ContractError("limit_uncorrelated needs declared homogeneity degrees");
  const auto d = *declared_degrees(f);
  if (std::abs(d[0] - p1) > 1e-12 || std::abs(d[1] - p2) > 1e-12) {
    throw ContractError("functional degrees do not match (p1, p2)");
  }
  const double m = m_sigma(f, Matrix2d::Identity());
  const Schedule h =
      volatility_integrand(spec, [&](double t) { return pow0(spec.vol1(t), p1) * pow0(spec.vol2(t), p2); });
  return m * stieltjes(h, Gcross, spec.horizon);
}

double limit_integer(unsigned p1, unsigned p2, const SemimartingaleSpec& spec, const HTable& H) {
  const unsigned p = p1 + p2;
  KahanSum<double> sum;
  for (const Triple& t : enumerate_L(p1, p2)) {
    const auto it = H.find({t.k, t.m});
    if (it == H.end()) {
      throw InputError("missing H_{" + std::to_string(t.k) + "," + std::to_string(t.m) + "," + std::to_string(p) +
                       "} step function");
    }
    const double coef = binomial(p1, t.k) * multinomial(p2, t.l, t.m) * gaussian_moment(t.k) *
                        gaussian_moment(t.l) * gaussian_moment(t.m) * gaussian_moment(p - (t.k + t.l + t.m));
    const Schedule h = volatility_integrand(spec, [&](double s) {
      const double rho = spec.corr(s);
      return ipow(spec.vol1(s), p1) * ipow(spec.vol2(s), p2) * pow0(1.0 - rho * rho, t.l / 2.0) *
             ipow(rho, p2 - (t.l + t.m));
    });
    sum += coef * stieltjes(h, it->second, spec.horizon);
  }
  return sum.value();
}

HTable integer_limit_table(const ObservationScheme& scheme, unsigned p1, unsigned p2, double rate) {
  HTable out;
  for (const Triple& t : enumerate_L(p1, p2)) {
    if (!out.count({t.k, t.m})) out.emplace(std::make_pair(t.k, t.m), H_stat(scheme, t.k, t.m, p1 + p2, rate));
  }
  return out;
}

ProductPreset parse_preset(const std::string& tag) {
  if (tag == "f11") return ProductPreset::F11;
  if (tag == "f22") return ProductPreset::F22;
  if (tag == "f33") return ProductPreset::F33;
  if (tag == "f44") return ProductPreset::F44;
  throw InputError("unknown preset '" + tag + "' (expected f11, f22, f33 or f44)");
}

unsigned preset_power(ProductPreset tag) { return static_cast<unsigned>(tag) + 1; }

PresetStats preset_stats(const ObservationScheme& scheme, ProductPreset tag, double rate) {
  const unsigned q = preset_power(tag);
  const double p = 2.0 * q;
  PresetStats out;
  out.H_00 = H_stat(scheme, 0, 0, p, rate);
  if (q >= 2) out.G_22 = G_kmp(scheme, 2, 2, p, rate);
  if (q >= 4) out.G_44 = G_kmp(scheme, 4, 4, p, rate);
  return out;
}

double limit_preset(ProductPreset tag, const SemimartingaleSpec& spec, const PresetStats& stats) {
  const unsigned q = preset_power(tag);
  auto require = [](const std::optional<StepFunction<double>>& F, const char* name) -> const StepFunction<double>& {
    if (!F) throw InputError(std::string("missing ") + name + " step function");
    return *F;
  };
  const double T = spec.horizon;
  auto vol_power = [&](double s) { return ipow(spec.vol1(s) * spec.vol2(s), q); };
  auto integral = [&](const StepFunction<double>& F, auto&& rho_part) {
    const Schedule h = volatility_integrand(spec, [&](double s) { return vol_power(s) * rho_part(spec.corr(s)); });
    return stieltjes(h, F, T);
  };
  const StepFunction<double>& H00 = require(stats.H_00, "H_00");
  switch (tag) {
    case ProductPreset::F11:
      return integral(H00, [](double r) { return r; });
    case ProductPreset::F22:
      return integral(H00, [](double r) { return 2 * r * r; }) +
             integral(require(stats.G_22, "G_22"), [](double) { return 1.0; });
    case ProductPreset::F33:
      return integral(H00, [](double r) { return 6 * ipow(r, 3); }) +
             integral(require(stats.G_22, "G_22"), [](double r) { return 9 * r; });
    case ProductPreset::F44:
      return integral(H00, [](double r) { return 24 * ipow(r, 4); }) +
             integral(require(stats.G_22, "G_22"), [](double r) { return 72 * r * r; }) +
             integral(require(stats.G_44, "G_44"), [](double) { return 9.0; });
  }
  return 0.0;
}

}  // namespace hyvar
