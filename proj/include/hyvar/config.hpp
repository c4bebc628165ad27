// SPDX-License-Identifier: Apache-2.0
//
// JSON configuration documents. The schema is described in the README.
#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "hyvar/harness.hpp"
#include "hyvar/model.hpp"
#include "hyvar/schemes.hpp"

namespace hyvar {

using Json = nlohmann::json;

/// Reads and parses a JSON file; InputError on I/O or syntax errors.
Json load_json(const std::filesystem::path& path);

Schedule schedule_from_json(const Json& j);
Json schedule_to_json(const Schedule& s);

SemimartingaleSpec model_from_json(const Json& j);
Json model_to_json(const SemimartingaleSpec& spec);

/// "n" is optional (default 1) for variants that take it. Explicit schemes either list
/// "times1"/"times2" or name a two-column "file", resolved relative to `base_dir`.
SchemeSpec scheme_from_json(const Json& j, const std::filesystem::path& base_dir = {});

ExperimentConfig experiment_from_json(const Json& j, const std::filesystem::path& base_dir = {});

}  // namespace hyvar
