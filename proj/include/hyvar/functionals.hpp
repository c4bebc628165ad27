// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hyvar/model.hpp"
#include "hyvar/numeric.hpp"
#include "hyvar/schemes.hpp"

namespace hyvar {

/// f(x, y) = x^p1 y^p2.
struct SignedProductPower {
  unsigned p1 = 1;
  unsigned p2 = 1;
};

/// f(x, y) = |x|^p1 |y|^p2.
struct AbsProductPower {
  double p1 = 1.0;
  double p2 = 1.0;
};

/// g(x) = x^p (signed, integer p) or |x|^p.
struct OneDimPower {
  double p = 2.0;
  bool is_signed = true;
};

/// f~(x, y) = (1 + ||(x, y)||) f(x, y) with f a product power.
struct PerturbedProductPower {
  std::variant<SignedProductPower, AbsProductPower> base;
};

/// Arbitrary total function; one-dimensional use reads fn(x, 0).
struct CustomFunction {
  std::function<double(double, double)> fn;
  std::optional<std::array<double, 2>> degrees;
  std::string name = "custom";
};

using FunctionalSpec =
    std::variant<SignedProductPower, AbsProductPower, OneDimPower, PerturbedProductPower, CustomFunction>;

/// Compact string form: "hy", "spp:p1,p2", "app:p1,p2", "pow:p", "apow:p", "pert:<spp|app|hy ...>".
FunctionalSpec parse_functional(const std::string& text);
std::string to_string(const FunctionalSpec& f);

/// Per-argument homogeneity degrees, when known. Perturbed functionals report their base's.
std::optional<std::array<double, 2>> declared_degrees(const FunctionalSpec& f);

inline double evaluate(const SignedProductPower& f, double x, double y) {
  return ipow(x, f.p1) * ipow(y, f.p2);
}
inline double evaluate(const AbsProductPower& f, double x, double y) {
  return pow0(std::abs(x), f.p1) * pow0(std::abs(y), f.p2);
}
inline double evaluate(const OneDimPower& g, double x, double /*y*/) {
  if (g.is_signed) return ipow(x, static_cast<unsigned>(g.p));
  return pow0(std::abs(x), g.p);
}
inline double evaluate(const PerturbedProductPower& f, double x, double y) {
  const double base = std::visit([&](const auto& b) { return evaluate(b, x, y); }, f.base);
  return (1.0 + std::hypot(x, y)) * base;
}
inline double evaluate(const CustomFunction& f, double x, double y) { return f.fn(x, y); }

inline double evaluate(const FunctionalSpec& f, double x, double y) {
  return std::visit([&](const auto& alt) { return evaluate(alt, x, y); }, f);
}

/// g(x) for one-dimensional use: OneDimPower, Custom (as fn(x, 0)) and product powers with p2 = 0.
double evaluate_onedim(const FunctionalSpec& g, double x);

/// Increments of one component over its intervals (t_{i-1}, t_i] with t_i <= T, read from the
/// path by an ordered merge. Throws LookupError if a scheme time was not sampled.
std::vector<double> scheme_increments(const ObservationScheme& scheme, const PathRecord& path, int component);

double eval_V(const FunctionalSpec& f, const ObservationScheme& scheme, const PathRecord& path);
double eval_V_onedim(const FunctionalSpec& g, const ObservationScheme& scheme, const PathRecord& path, int l);

/// rate^{p/2 - 1} * eval_V.
double eval_Vbar(double p, const FunctionalSpec& f, const ObservationScheme& scheme, const PathRecord& path,
                 double rate);
double eval_Vbar_onedim(double p, const FunctionalSpec& g, const ObservationScheme& scheme,
                        const PathRecord& path, int l, double rate);

}  // namespace hyvar
