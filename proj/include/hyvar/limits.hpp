// SPDX-License-Identifier: Apache-2.0
//
// Limit targets: jump sums, Gaussian moments, m_Sigma and the normalized-functional limits
// integrated against scheme statistics.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyvar/functionals.hpp"
#include "hyvar/model.hpp"
#include "hyvar/numeric.hpp"
#include "hyvar/schemes.hpp"
#include "hyvar/step_function.hpp"

namespace hyvar {

/// B(f)_T = sum_{s <= T} f(dX1_s, dX2_s); with common_only, B*(f)_T over common jumps only.
double B_sum(std::span<const JumpEvent> jumps, const FunctionalSpec& f, double T, bool common_only);

/// B^{(l)}(g)_T = sum_{s <= T} g(dX^{(l)}_s).
double B_onedim(std::span<const JumpEvent> jumps, const FunctionalSpec& g, double T, int l);

/// E Z^k for Z ~ N(0, 1): (k-1)!! for even k, 0 for odd k.
template <typename Scalar = double>
Scalar gaussian_moment(unsigned k) {
  if (k % 2 == 1) return Scalar(0);
  Scalar m(1);
  for (unsigned j = k; j > 1; j -= 2) m *= static_cast<Scalar>(j - 1);
  return m;
}

/// E |Z|^q for Z ~ N(0, 1), any real q >= 0.
double abs_gaussian_moment(double q);

/// m_Sigma(f) = E f(Z), Z ~ N(0, Sigma).
/// SignedProductPower uses a closed form. Other functionals with declared degrees are
/// positively homogeneous, so E f(Z) = E R^p * mean over angles of f(L u(theta)) with
/// R^2 ~ chi^2_2; the angular mean uses tanh-sinh quadrature split where either coordinate
/// vanishes, which keeps |x|^q kinks at subinterval ends. Functionals without declared
/// degrees use tensor Gauss–Hermite of order 48. Throws InputError for non-PSD Sigma.
double m_sigma(const FunctionalSpec& f, const Matrix2d& Sigma);

/// The closed form alone (SignedProductPower only).
double m_sigma_closed_form(const SignedProductPower& f, const Matrix2d& Sigma);

/// Tensor-product Gauss–Hermite evaluation of E f(Z); used as an independent cross-check.
double m_sigma_gauss_hermite(const FunctionalSpec& f, const Matrix2d& Sigma, int order = 48);

/// E g(Z) for a one-dimensional functional, Z ~ N(0, 1).
double m_one(const FunctionalSpec& g);

struct Triple {
  unsigned k = 0;
  unsigned l = 0;
  unsigned m = 0;
  auto operator<=>(const Triple&) const = default;
};

/// L(p1, p2): triples of even numbers with k <= p1, l + m <= p2 and p1 + p2 - (k + l + m)
/// even and nonnegative, in lexicographic order.
std::vector<Triple> enumerate_L(unsigned p1, unsigned p2);

/// Left-endpoint Stieltjes integral of a schedule-valued integrand against F over [0, T].
double stieltjes(const Schedule& integrand, const StepFunction<double>& F, double T);

/// Piecewise-constant integrand s -> fn(s) sampled on the volatility pieces of `spec`.
template <typename Fn>
Schedule volatility_integrand(const SemimartingaleSpec& spec, Fn&& fn) {
  std::vector<double> bps = spec.volatility_breakpoints();
  std::vector<double> vals;
  vals.reserve(bps.size());
  for (double t : bps) vals.push_back(fn(t));
  return Schedule(std::move(bps), std::move(vals));
}

/// int_0^T m_{c_s}(f) dG_p(s) for a synchronous scheme; f homogeneous of total degree p.
double limit_sync(double p, const FunctionalSpec& f, const SemimartingaleSpec& spec, const StepFunction<double>& Gp);

/// m_1(g) int_0^T (sigma^{(l)}_s)^p dG_p^{(l)}(s).
double limit_onedim(double p, const FunctionalSpec& g, const SemimartingaleSpec& spec, int l,
                    const StepFunction<double>& Gp_l);

/// m_{I_2}(f) int_0^T (sigma1_s)^p1 (sigma2_s)^p2 dG_{p1,p2}(s); requires rho == 0.
double limit_uncorrelated(double p1, double p2, const FunctionalSpec& f, const SemimartingaleSpec& spec,
                          const StepFunction<double>& Gcross);

using HTable = std::map<std::pair<unsigned, unsigned>, StepFunction<double>>;

/// Expansion over L(p1, p2) against dH_{k,m,p1+p2} for f = x^p1 y^p2.
double limit_integer(unsigned p1, unsigned p2, const SemimartingaleSpec& spec, const HTable& H);

/// H_{k,m,p1+p2} for every (k, m) appearing in L(p1, p2).
HTable integer_limit_table(const ObservationScheme& scheme, unsigned p1, unsigned p2, double rate);

enum class ProductPreset { F11, F22, F33, F44 };

/// Step functions used by the simplified (p, p) forms. H_00 is H_{0,0,2p}; G_22 is G_{2,2,2p};
/// G_44 is G_{4,4,2p} (needed for F44 only).
struct PresetStats {
  std::optional<StepFunction<double>> H_00;
  std::optional<StepFunction<double>> G_22;
  std::optional<StepFunction<double>> G_44;
};

ProductPreset parse_preset(const std::string& tag);
unsigned preset_power(ProductPreset tag);
PresetStats preset_stats(const ObservationScheme& scheme, ProductPreset tag, double rate);

/// Simplified closed forms for f = x^q y^q, q = 1..4.
double limit_preset(ProductPreset tag, const SemimartingaleSpec& spec, const PresetStats& stats);

}  // namespace hyvar
