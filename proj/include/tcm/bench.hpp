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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tcm/cannon.hpp"
#include "tcm/densela.hpp"

namespace tcm {

enum class BenchTask { taylor, evolution };

std::string_view to_string(BenchTask task);
BenchTask bench_task_from_string(std::string_view s);

inline constexpr std::uint64_t kDefaultBenchSeed = 20240917;

/// One timed measurement (median over repetitions).
struct TimingRecord {
    BenchTask task = BenchTask::taylor;
    std::size_t dimension = 0;
    GridStrategy strategy = GridStrategy::serial();
    double wall_time = 0.0;  ///< seconds
    std::size_t workers = 1;
    int repetitions = 1;
    std::string timestamp;  ///< ISO 8601, UTC
    bool factors_included = true;
};

/// Deterministic Hermitian test matrix with ||H||_F <= sqrt(2).
ComplexMatrix synthetic_hermitian(std::size_t dim, std::uint64_t seed);

/// Times build_left_factor + build_right_factor (order 10, dt 0.1) on a
/// seeded synthetic Hamiltonian. If left_out is given it receives the left
/// factor from the final repetition.
TimingRecord time_taylor(std::size_t dimension, GridStrategy strategy, int repetitions,
                         std::uint64_t seed = kDefaultBenchSeed, ComplexMatrix *left_out = nullptr);

struct EvolutionTiming {
    /// Whether building L and R is part of the timed region.
    bool include_factors = true;
    std::uint64_t seed = kDefaultBenchSeed;
};

/// Times a fixed number of evolution steps from |0><0| under a seeded
/// synthetic Hamiltonian. If rho_out is given it receives the final state.
TimingRecord time_evolution(std::size_t dimension, GridStrategy strategy, int steps, int repetitions,
                            const EvolutionTiming &options = {}, ComplexMatrix *rho_out = nullptr);

/// Speedup T_serial / T_strategy; rows are strategies, columns dimensions.
struct SpeedupTable {
    BenchTask task = BenchTask::taylor;
    std::vector<GridStrategy> strategies;  ///< serial first, then by grid side
    std::vector<std::size_t> dimensions;   ///< ascending
    /// cells[row][col]; nullopt where no timing exists.
    std::vector<std::vector<std::optional<double>>> cells;

    std::optional<double> cell(const GridStrategy &strategy, std::size_t dimension) const;
};

/// Throws InvalidArgument for mixed tasks or duplicate cells, BaselineError
/// when some dimension has no serial timing.
SpeedupTable speedup_table(std::span<const TimingRecord> records);

/// Table of wall times shaped like the speedup table ("--" for absent).
std::string timing_csv(std::span<const TimingRecord> records, BenchTask task);
std::string speedup_csv(const SpeedupTable &table);

/// One line of JSON with keys task, dimension, strategy, workers,
/// repetitions, wall_time_seconds.
std::string to_json_line(const TimingRecord &record);

struct BenchSpec {
    std::vector<std::size_t> dimensions;
    std::vector<GridStrategy> strategies;
    std::vector<BenchTask> tasks{BenchTask::taylor, BenchTask::evolution};
    int repetitions = 3;
    int evolution_steps = 10;
    bool include_factors = true;
    std::uint64_t seed = kDefaultBenchSeed;
};

/// Runs every feasible (task, dimension, strategy) cell one after another.
/// Infeasible cells (divisibility or worker cap) are skipped and noted on log.
std::vector<TimingRecord> run_bench(const BenchSpec &spec, std::ostream *log = nullptr);

}  // namespace tcm
