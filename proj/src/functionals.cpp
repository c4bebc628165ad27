// SPDX-License-Identifier: Apache-2.0
#include "hyvar/functionals.hpp"

#include <algorithm>
#include <sstream>

#include "hyvar/errors.hpp"

namespace hyvar {

namespace {

std::vector<double> parse_numbers(const std::string& text, std::size_t expected, const std::string& whole) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("functional '" + whole + "': bad number '" + item + "'");
    }
    if (used != item.size() || !std::isfinite(v) || v < 0.0) {
      throw InputError("functional '" + whole + "': bad exponent '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.size() != expected) throw InputError("functional '" + whole + "': wrong number of exponents");
  return out;
}

unsigned as_unsigned(double v, const std::string& whole) {
  if (v != std::floor(v) || v > 64.0) throw InputError("functional '" + whole + "': exponent must be an integer");
  return static_cast<unsigned>(v);
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string base_string(const std::variant<SignedProductPower, AbsProductPower>& base) {
  return std::visit([](const auto& b) { return to_string(FunctionalSpec(b)); }, base);
}

}  // namespace

FunctionalSpec parse_functional(const std::string& text) {
  if (text == "hy") return SignedProductPower{1, 1};
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("unknown functional '" + text + "'");
  const std::string head = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  if (head == "spp") {
    const auto v = parse_numbers(rest, 2, text);
    return SignedProductPower{as_unsigned(v[0], text), as_unsigned(v[1], text)};
  }
  if (head == "app") {
    const auto v = parse_numbers(rest, 2, text);
    return AbsProductPower{v[0], v[1]};
  }
  if (head == "pow") {
    const auto v = parse_numbers(rest, 1, text);
    return OneDimPower{static_cast<double>(as_unsigned(v[0], text)), true};
  }
  if (head == "apow") {
    const auto v = parse_numbers(rest, 1, text);
    return OneDimPower{v[0], false};
  }
  if (head == "pert") {
    const FunctionalSpec base = parse_functional(rest);
    if (const auto* s = std::get_if<SignedProductPower>(&base)) return PerturbedProductPower{*s};
    if (const auto* a = std::get_if<AbsProductPower>(&base)) return PerturbedProductPower{*a};
    throw InputError("functional '" + text + "': perturbation base must be a product power");
  }
  throw InputError("unknown functional '" + text + "'");
}

std::string to_string(const FunctionalSpec& f) {
  struct Visitor {
    std::string operator()(const SignedProductPower& s) const {
      return "spp:" + std::to_string(s.p1) + "," + std::to_string(s.p2);
    }
    std::string operator()(const AbsProductPower& a) const {
      return "app:" + format_number(a.p1) + "," + format_number(a.p2);
    }
    std::string operator()(const OneDimPower& g) const {
      return (g.is_signed ? "pow:" : "apow:") + format_number(g.p);
    }
    std::string operator()(const PerturbedProductPower& p) const { return "pert:" + base_string(p.base); }
    std::string operator()(const CustomFunction& c) const { return c.name; }
  };
  return std::visit(Visitor{}, f);
}

std::optional<std::array<double, 2>> declared_degrees(const FunctionalSpec& f) {
  struct Visitor {
    std::optional<std::array<double, 2>> operator()(const SignedProductPower& s) const {
      return std::array<double, 2>{static_cast<double>(s.p1), static_cast<double>(s.p2)};
    }
    std::optional<std::array<double, 2>> operator()(const AbsProductPower& a) const {
      return std::array<double, 2>{a.p1, a.p2};
    }
    std::optional<std::array<double, 2>> operator()(const OneDimPower& g) const {
      return std::array<double, 2>{g.p, 0.0};
    }
    std::optional<std::array<double, 2>> operator()(const PerturbedProductPower& p) const {
      return std::visit([this](const auto& b) { return (*this)(b); }, p.base);
    }
    std::optional<std::array<double, 2>> operator()(const CustomFunction& c) const { return c.degrees; }
  };
  return std::visit(Visitor{}, f);
}

double evaluate_onedim(const FunctionalSpec& g, double x) {
  if (const auto* s = std::get_if<SignedProductPower>(&g); s && s->p2 != 0) {
    throw InputError("functional '" + to_string(g) + "' is not one-dimensional");
  }
  if (const auto* a = std::get_if<AbsProductPower>(&g); a && a->p2 != 0.0) {
    throw InputError("functional '" + to_string(g) + "' is not one-dimensional");
  }
  if (std::holds_alternative<PerturbedProductPower>(g)) {
    throw InputError("perturbed functionals are two-dimensional");
  }
  return evaluate(g, x, 0.0);
}

std::vector<double> scheme_increments(const ObservationScheme& scheme, const PathRecord& path, int component) {
  const auto& t = scheme.times(component);
  const auto& pt = path.times();
  const auto col = path.values().col(component - 1);
  const double T = scheme.horizon();
  std::vector<double> out;
  out.reserve(t.size());
  std::size_t k = 0;
  double prev = 0.0;
  for (std::size_t i = 0; i < t.size() && t[i] <= T; ++i) {
    while (k < pt.size() && pt[k] < t[i]) ++k;
    if (k == pt.size() || pt[k] != t[i]) {
      throw LookupError("scheme time " + format_number(t[i]) + " of component " + std::to_string(component) +
                        " is not a sampled time of the path");
    }
    const double x = col(static_cast<Eigen::Index>(k));
    if (i > 0) out.push_back(x - prev);
    prev = x;
  }
  return out;
}

double eval_V(const FunctionalSpec& f, const ObservationScheme& scheme, const PathRecord& path) {
  const std::vector<double> d1 = scheme_increments(scheme, path, 1);
  const std::vector<double> d2 = scheme_increments(scheme, path, 2);
  KahanSum<double> sum;
  std::visit(
      [&](const auto& alt) {
        sweep_overlaps(scheme.times1(), scheme.times2(), scheme.horizon(),
                       [&](std::size_t i, std::size_t j) { sum += evaluate(alt, d1[i - 1], d2[j - 1]); });
      },
      f);
  return sum.value();
}

double eval_V_onedim(const FunctionalSpec& g, const ObservationScheme& scheme, const PathRecord& path, int l) {
  KahanSum<double> sum;
  for (double d : scheme_increments(scheme, path, l)) sum += evaluate_onedim(g, d);
  return sum.value();
}

namespace {

double rate_factor(double p, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw InputError("rate must be positive");
  if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("normalization power p must be >= 0");
  return std::pow(rate, p / 2.0 - 1.0);
}

}  // namespace

double eval_Vbar(double p, const FunctionalSpec& f, const ObservationScheme& scheme, const PathRecord& path,
                 double rate) {
  const double factor = rate_factor(p, rate);
  return factor * eval_V(f, scheme, path);
}

double eval_Vbar_onedim(double p, const FunctionalSpec& g, const ObservationScheme& scheme,
                        const PathRecord& path, int l, double rate) {
  const double factor = rate_factor(p, rate);
  return factor * eval_V_onedim(g, scheme, path, l);
}

}  // namespace hyvar
