// Copyright 2026 The tcmsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "tcm/evolution.hpp"
#include "tcm/model.hpp"

namespace tcm {

/// Everything `tcmsim simulate` needs. Defaults: one atom, hbar = omega = 1,
/// g = 0.02, dt = 0.05, 3142 steps (one half Rabi period), Taylor order 10,
/// serial strategy, no trace renormalization, every step recorded.
struct RunConfig {
    ModelParams model = ModelParams::uniform(1, 0.02);
    EvolutionConfig evolution{.dt = 0.05, .steps = 3142};
    int max_atoms = kDefaultMaxAtoms;
    std::filesystem::path trajectory_path = "trajectory.csv";
    std::filesystem::path summary_path = "summary.json";
    std::uint64_t seed = 0;

    /// Throws InvalidArgument on any invalid field.
    void validate() const;

    friend bool operator==(const RunConfig &, const RunConfig &);
};

/// Parses the JSON config format; missing keys keep their defaults, unknown
/// keys are rejected. Throws InvalidArgument on malformed input.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path &path);

/// Canonical JSON form; parse_run_config(serialize_run_config(c)) == c.
std::string serialize_run_config(const RunConfig &config);

}  // namespace tcm
