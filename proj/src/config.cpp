// SPDX-License-Identifier: Apache-2.0
#include "hyvar/config.hpp"

#include <fstream>

#include "hyvar/errors.hpp"

namespace hyvar {

namespace {

// Wraps the JSON library's own exceptions so every config problem surfaces as InputError.
template <typename Fn>
auto guarded(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

void reject_unknown_keys(const Json& j, std::initializer_list<const char*> known, const char* where) {
  if (!j.is_object()) throw InputError(std::string(where) + " must be an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw InputError(std::string(where) + ": unknown key '" + item.key() + "'");
  }
}

SizeDistribution size_from_json(const Json& j) {
  reject_unknown_keys(j, {"dist", "value", "mean", "sd", "low", "high"}, "jump size distribution");
  const std::string dist = j.at("dist").get<std::string>();
  SizeDistribution d;
  if (dist == "constant") {
    d = {SizeDistribution::Kind::Constant, j.at("value").get<double>(), 0.0};
  } else if (dist == "normal") {
    d = {SizeDistribution::Kind::Normal, j.value("mean", 0.0), j.value("sd", 1.0)};
  } else if (dist == "uniform") {
    d = {SizeDistribution::Kind::Uniform, j.at("low").get<double>(), j.at("high").get<double>()};
  } else {
    throw InputError("unknown jump size distribution '" + dist + "'");
  }
  return d;
}

Json size_to_json(const SizeDistribution& d) {
  switch (d.kind) {
    case SizeDistribution::Kind::Constant:
      return {{"dist", "constant"}, {"value", d.a}};
    case SizeDistribution::Kind::Normal:
      return {{"dist", "normal"}, {"mean", d.a}, {"sd", d.b}};
    case SizeDistribution::Kind::Uniform:
      return {{"dist", "uniform"}, {"low", d.a}, {"high", d.b}};
  }
  return {};
}

Vector2d vec2(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw InputError(std::string(what) + " must be a 2-element array");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("'" + path.string() + "': " + e.what());
  }
}

Schedule schedule_from_json(const Json& j) {
  return guarded("schedule", [&] {
    if (j.is_number()) return Schedule(j.get<double>());
    reject_unknown_keys(j, {"breakpoints", "values"}, "schedule");
    return Schedule(j.at("breakpoints").get<std::vector<double>>(), j.at("values").get<std::vector<double>>());
  });
}

Json schedule_to_json(const Schedule& s) {
  if (s.is_constant()) return s.values().front();
  return {{"breakpoints", s.breakpoints()}, {"values", s.values()}};
}

SemimartingaleSpec model_from_json(const Json& j) {
  return guarded("model", [&] {
    reject_unknown_keys(j, {"horizon", "x0", "drift", "vol1", "vol2", "corr", "jumps", "poisson_jumps"}, "model");
    SemimartingaleSpec spec;
    spec.horizon = j.value("horizon", 1.0);
    if (j.contains("x0")) spec.x0 = vec2(j.at("x0"), "x0");
    if (j.contains("drift")) {
      const Json& d = j.at("drift");
      if (!d.is_array() || d.size() != 2) throw InputError("drift must be a 2-element array of schedules");
      spec.drift1 = schedule_from_json(d[0]);
      spec.drift2 = schedule_from_json(d[1]);
    }
    if (j.contains("vol1")) spec.vol1 = schedule_from_json(j.at("vol1"));
    if (j.contains("vol2")) spec.vol2 = schedule_from_json(j.at("vol2"));
    if (j.contains("corr")) spec.corr = schedule_from_json(j.at("corr"));
    if (j.contains("jumps")) {
      for (const Json& e : j.at("jumps")) {
        reject_unknown_keys(e, {"time", "size"}, "jump");
        spec.scheduled_jumps.push_back({e.at("time").get<double>(), vec2(e.at("size"), "jump size")});
      }
    }
    if (j.contains("poisson_jumps")) {
      const Json& p = j.at("poisson_jumps");
      reject_unknown_keys(p, {"intensity", "size1", "size2", "common_prob"}, "poisson_jumps");
      PoissonJumps pj;
      pj.intensity = p.at("intensity").get<double>();
      if (p.contains("size1")) pj.size1 = size_from_json(p.at("size1"));
      if (p.contains("size2")) pj.size2 = size_from_json(p.at("size2"));
      pj.common_prob = p.value("common_prob", 0.0);
      spec.poisson_jumps = pj;
    }
    spec.validate();
    return spec;
  });
}

Json model_to_json(const SemimartingaleSpec& spec) {
  Json j;
  j["horizon"] = spec.horizon;
  j["x0"] = {spec.x0[0], spec.x0[1]};
  j["drift"] = {schedule_to_json(spec.drift1), schedule_to_json(spec.drift2)};
  j["vol1"] = schedule_to_json(spec.vol1);
  j["vol2"] = schedule_to_json(spec.vol2);
  j["corr"] = schedule_to_json(spec.corr);
  Json jumps = Json::array();
  for (const JumpEvent& e : spec.scheduled_jumps) jumps.push_back({{"time", e.time}, {"size", {e.size[0], e.size[1]}}});
  j["jumps"] = jumps;
  if (spec.poisson_jumps) {
    const PoissonJumps& p = *spec.poisson_jumps;
    j["poisson_jumps"] = {{"intensity", p.intensity},
                          {"size1", size_to_json(p.size1)},
                          {"size2", size_to_json(p.size2)},
                          {"common_prob", p.common_prob}};
  }
  return j;
}

SchemeSpec scheme_from_json(const Json& j, const std::filesystem::path& base_dir) {
  return guarded("scheme", [&]() -> SchemeSpec {
    const std::string type = j.at("type").get<std::string>();
    const auto n = j.value("n", std::size_t{1});
    SchemeSpec spec;
    if (type == "equidistant_sync") {
      reject_unknown_keys(j, {"type", "n"}, "scheme");
      spec = EquidistantSync{n};
    } else if (type == "equidistant_async") {
      reject_unknown_keys(j, {"type", "n", "gamma"}, "scheme");
      spec = EquidistantAsync{n, j.at("gamma").get<double>()};
    } else if (type == "oscillating") {
      reject_unknown_keys(j, {"type", "n"}, "scheme");
      spec = Oscillating{n};
    } else if (type == "poisson") {
      reject_unknown_keys(j, {"type", "n", "lambda1", "lambda2"}, "scheme");
      spec = PoissonScheme{n, j.value("lambda1", 1.0), j.value("lambda2", 1.0)};
    } else if (type == "poisson_sync") {
      reject_unknown_keys(j, {"type", "n", "lambda"}, "scheme");
      spec = PoissonSync{n, j.value("lambda", 1.0)};
    } else if (type == "explicit") {
      reject_unknown_keys(j, {"type", "times1", "times2", "file"}, "scheme");
      if (j.contains("file")) {
        std::filesystem::path file = j.at("file").get<std::string>();
        if (file.is_relative()) file = base_dir / file;
        std::ifstream in(file);
        if (!in) throw InputError("cannot open scheme file '" + file.string() + "'");
        // The horizon is irrelevant for reading; the scheme is re-cut at generation time.
        const ObservationScheme s = read_scheme(in, 1.0);
        spec = Explicit{s.times1(), s.times2()};
      } else {
        spec = Explicit{j.at("times1").get<std::vector<double>>(), j.at("times2").get<std::vector<double>>()};
      }
    } else {
      throw InputError("unknown scheme type '" + type + "'");
    }
    validate(spec);
    return spec;
  });
}

ExperimentConfig experiment_from_json(const Json& j, const std::filesystem::path& base_dir) {
  return guarded("experiment", [&] {
    reject_unknown_keys(j,
                        {"model", "scheme", "alternating", "functional", "component", "normalization", "n_ladder",
                         "replications", "base_seed", "target", "se_band", "diagnostics", "output"},
                        "experiment");
    ExperimentConfig c;
    c.model = model_from_json(j.at("model"));
    c.scheme = scheme_from_json(j.at("scheme"), base_dir);
    c.alternating = j.value("alternating", false);
    c.functional = parse_functional(j.value("functional", std::string("hy")));
    c.component = j.value("component", 0);
    if (j.contains("normalization") && !j.at("normalization").is_null()) {
      const Json& nj = j.at("normalization");
      reject_unknown_keys(nj, {"p", "rate_scale", "rate_exponent"}, "normalization");
      c.normalization = Normalization{nj.at("p").get<double>(),
                                      RateLaw{nj.value("rate_scale", 1.0), nj.value("rate_exponent", 1.0)}};
    }
    c.n_ladder = j.at("n_ladder").get<std::vector<std::size_t>>();
    c.replications = j.value("replications", std::size_t{1});
    c.base_seed = j.value("base_seed", std::uint64_t{0});
    if (j.contains("target")) {
      const Json& t = j.at("target");
      if (t.is_string()) {
        c.target.kind = parse_target_kind(t.get<std::string>());
      } else if (t.is_number()) {
        c.target = {TargetKind::Explicit, t.get<double>()};
      } else {
        reject_unknown_keys(t, {"kind", "value"}, "target");
        c.target = {parse_target_kind(t.at("kind").get<std::string>()), t.value("value", 0.0)};
      }
    }
    c.se_band = j.value("se_band", 4.0);
    if (j.contains("diagnostics")) {
      const Json& d = j.at("diagnostics");
      reject_unknown_keys(d, {"p1", "p2"}, "diagnostics");
      c.diag_p1 = d.value("p1", 1.0);
      c.diag_p2 = d.value("p2", 1.0);
    }
    c.output = j.value("output", std::string());
    c.validate();
    return c;
  });
}

}  // namespace hyvar
