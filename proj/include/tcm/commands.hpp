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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "tcm/bench.hpp"
#include "tcm/config.hpp"
#include "tcm/error.hpp"
#include "tcm/evolution.hpp"
#include "tcm/verify.hpp"

namespace tcm {

/// Process exit codes; every failure path has its own.
enum class ExitCode : int {
    ok = 0,
    internal_error = 1,
    usage = 2,
    invalid_config = 3,
    accuracy_abort = 4,
    io_error = 5,
    verify_failed = 6,
    malformed_csv = 7,
};

/// A trajectory CSV could not be parsed.
class MalformedCsv : public Error {
  public:
    using Error::Error;
};

/// Header `t,P_0,...,P_n,trace,excitation`, values with 17 significant digits.
std::string trajectory_csv(const TrajectoryRecord &record);

/// Inverse of trajectory_csv (hermiticity diagnostics are not stored and come
/// back empty). Throws MalformedCsv.
TrajectoryRecord parse_trajectory_csv(std::string_view text);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);

/// Run a trajectory and write its CSV and JSON summary.
ExitCode cmd_simulate(const RunConfig &config, std::ostream &out, std::ostream &err);

/// Run the oracle checks; verify_failed if any check fails.
ExitCode cmd_verify(const VerifyOptions &options, std::ostream &out, std::ostream &err);

struct BenchCommand {
    BenchSpec spec;
    std::filesystem::path out_dir = "bench_out";
};

/// Time every strategy x dimension cell and write records.jsonl plus timing
/// and speedup CSVs per task.
ExitCode cmd_bench(const BenchCommand &command, std::ostream &out, std::ostream &err);

/// Split a trajectory CSV into P_<m>.csv series and a peaks.csv annotation.
ExitCode cmd_plotdata(const std::filesystem::path &trajectory, const std::filesystem::path &out_dir,
                      std::ostream &out, std::ostream &err);

}  // namespace tcm
