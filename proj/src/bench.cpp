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

#include "tcm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <map>
#include <json.hpp>
#include <ostream>
#include <random>
#include <sstream>

#include "tcm/error.hpp"
#include "tcm/evolution.hpp"

namespace tcm {

namespace {

constexpr int kBenchTaylorOrder = 10;
constexpr double kBenchDt = 0.1;

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

void require_feasible(std::size_t dimension, const GridStrategy &strategy, int repetitions) {
    if (repetitions < 1) {
        throw InvalidArgument("bench: repetitions must be >= 1");
    }
    if (dimension == 0) {
        throw InvalidArgument("bench: dimension must be positive");
    }
    if (!strategy.is_serial() && dimension % strategy.side() != 0) {
        throw PartitionError("bench: grid side " + std::to_string(strategy.side()) + " does not divide dimension " +
                             std::to_string(dimension));
    }
}

template <typename F>
double median_seconds(int repetitions, F &&body) {
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(repetitions));
    for (int r = 0; r < repetitions; ++r) {
        const auto start = std::chrono::steady_clock::now();
        body();
        const auto stop = std::chrono::steady_clock::now();
        samples.push_back(std::chrono::duration<double>(stop - start).count());
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t mid = samples.size() / 2;
    const double median = samples.size() % 2 == 1 ? samples[mid] : 0.5 * (samples[mid - 1] + samples[mid]);
    // A zero reading would make the speedup undefined.
    return std::max(median, 1e-9);
}

TimingRecord make_record(BenchTask task, std::size_t dimension, const GridStrategy &strategy, int repetitions,
                         double seconds) {
    TimingRecord r;
    r.task = task;
    r.dimension = dimension;
    r.strategy = strategy;
    r.wall_time = seconds;
    r.workers = strategy.workers();
    r.repetitions = repetitions;
    r.timestamp = utc_timestamp();
    return r;
}

bool strategy_less(const GridStrategy &a, const GridStrategy &b) {
    if (a.is_serial() != b.is_serial()) {
        return a.is_serial();
    }
    return a.side() < b.side();
}

}  // namespace

std::string_view to_string(BenchTask task) { return task == BenchTask::taylor ? "taylor" : "evolution"; }

BenchTask bench_task_from_string(std::string_view s) {
    if (s == "taylor") {
        return BenchTask::taylor;
    }
    if (s == "evolution") {
        return BenchTask::evolution;
    }
    throw InvalidArgument("unknown bench task '" + std::string(s) + "'");
}

ComplexMatrix synthetic_hermitian(std::size_t dim, std::uint64_t seed) {
    // Raw mt19937_64 output is specified bit-for-bit; the std distributions are not.
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    ComplexMatrix h(dim);
    const double scale = 1.0 / static_cast<double>(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        h(i, i) = scale * uniform();
        for (std::size_t j = i + 1; j < dim; ++j) {
            const double re = scale * uniform();
            const double im = scale * uniform();
            h(i, j) = Complex(re, im);
            h(j, i) = Complex(re, -im);
        }
    }
    return h;
}

TimingRecord time_taylor(std::size_t dimension, GridStrategy strategy, int repetitions, std::uint64_t seed,
                         ComplexMatrix *left_out) {
    require_feasible(dimension, strategy, repetitions);
    const ComplexMatrix h = synthetic_hermitian(dimension, seed);
    Multiplier engine(strategy);
    ComplexMatrix left;
    const double seconds = median_seconds(repetitions, [&] {
        left = build_left_factor(h, kBenchDt, kBenchTaylorOrder, engine);
        const ComplexMatrix right = build_right_factor(h, kBenchDt, kBenchTaylorOrder, engine);
        (void)right;
    });
    if (left_out != nullptr) {
        *left_out = std::move(left);
    }
    return make_record(BenchTask::taylor, dimension, strategy, repetitions, seconds);
}

TimingRecord time_evolution(std::size_t dimension, GridStrategy strategy, int steps, int repetitions,
                            const EvolutionTiming &options, ComplexMatrix *rho_out) {
    require_feasible(dimension, strategy, repetitions);
    if (steps < 1) {
        throw InvalidArgument("bench: steps must be >= 1");
    }
    const ComplexMatrix h = synthetic_hermitian(dimension, options.seed);
    Multiplier engine(strategy);
    ComplexMatrix left;
    ComplexMatrix right;
    auto build = [&] {
        left = build_left_factor(h, kBenchDt, kBenchTaylorOrder, engine);
        right = build_right_factor(h, kBenchDt, kBenchTaylorOrder, engine);
    };
    if (!options.include_factors) {
        build();
    }
    std::optional<DensityMatrix> final_state;
    const double seconds = median_seconds(repetitions, [&] {
        if (options.include_factors) {
            build();
        }
        DensityMatrix rho = DensityMatrix::pure(dimension, 0);
        for (int s = 0; s < steps; ++s) {
            rho = evolve_step(left, rho, right, engine);
        }
        final_state = std::move(rho);
    });
    if (rho_out != nullptr) {
        *rho_out = final_state->matrix();
    }
    auto record = make_record(BenchTask::evolution, dimension, strategy, repetitions, seconds);
    record.factors_included = options.include_factors;
    return record;
}

std::optional<double> SpeedupTable::cell(const GridStrategy &strategy, std::size_t dimension) const {
    const auto row = std::find(strategies.begin(), strategies.end(), strategy);
    const auto col = std::find(dimensions.begin(), dimensions.end(), dimension);
    if (row == strategies.end() || col == dimensions.end()) {
        return std::nullopt;
    }
    return cells[static_cast<std::size_t>(row - strategies.begin())][static_cast<std::size_t>(col - dimensions.begin())];
}

SpeedupTable speedup_table(std::span<const TimingRecord> records) {
    SpeedupTable table;
    if (records.empty()) {
        return table;
    }
    table.task = records.front().task;
    std::map<std::pair<std::size_t, std::size_t>, double> times;  // (side, dim) -> seconds
    for (const auto &r : records) {
        if (r.task != table.task) {
            throw InvalidArgument("speedup_table: records mix taylor and evolution timings");
        }
        if (!(r.wall_time > 0.0)) {
            throw InvalidArgument("speedup_table: wall times must be positive");
        }
        if (!times.emplace(std::pair{r.strategy.side(), r.dimension}, r.wall_time).second) {
            throw InvalidArgument("speedup_table: duplicate timing for " + r.strategy.label() + " at dimension " +
                                  std::to_string(r.dimension));
        }
        if (std::find(table.strategies.begin(), table.strategies.end(), r.strategy) == table.strategies.end()) {
            table.strategies.push_back(r.strategy);
        }
        if (std::find(table.dimensions.begin(), table.dimensions.end(), r.dimension) == table.dimensions.end()) {
            table.dimensions.push_back(r.dimension);
        }
    }
    std::sort(table.strategies.begin(), table.strategies.end(), strategy_less);
    std::sort(table.dimensions.begin(), table.dimensions.end());

    for (std::size_t dim : table.dimensions) {
        if (!times.contains({0, dim})) {
            throw BaselineError("speedup_table: no serial timing for dimension " + std::to_string(dim));
        }
    }
    for (const auto &s : table.strategies) {
        std::vector<std::optional<double>> row;
        for (std::size_t dim : table.dimensions) {
            const auto it = times.find({s.side(), dim});
            if (it == times.end()) {
                row.emplace_back();
            } else {
                row.emplace_back(times.at({0, dim}) / it->second);
            }
        }
        table.cells.push_back(std::move(row));
    }
    return table;
}

std::string timing_csv(std::span<const TimingRecord> records, BenchTask task) {
    std::vector<GridStrategy> strategies;
    std::vector<std::size_t> dims;
    std::map<std::pair<std::size_t, std::size_t>, double> times;
    for (const auto &r : records) {
        if (r.task != task) {
            continue;
        }
        if (std::find(strategies.begin(), strategies.end(), r.strategy) == strategies.end()) {
            strategies.push_back(r.strategy);
        }
        if (std::find(dims.begin(), dims.end(), r.dimension) == dims.end()) {
            dims.push_back(r.dimension);
        }
        times[{r.strategy.side(), r.dimension}] = r.wall_time;
    }
    std::sort(strategies.begin(), strategies.end(), strategy_less);
    std::sort(dims.begin(), dims.end());

    std::ostringstream out;
    out << "strategy";
    for (auto d : dims) {
        out << ',' << d;
    }
    out << '\n';
    for (const auto &s : strategies) {
        out << s.label();
        for (auto d : dims) {
            const auto it = times.find({s.side(), d});
            out << ',';
            if (it == times.end()) {
                out << "--";
            } else {
                out << std::fixed << std::setprecision(6) << it->second;
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string speedup_csv(const SpeedupTable &table) {
    std::ostringstream out;
    out << "strategy";
    for (auto d : table.dimensions) {
        out << ',' << d;
    }
    out << '\n';
    for (std::size_t r = 0; r < table.strategies.size(); ++r) {
        out << table.strategies[r].label();
        for (const auto &c : table.cells[r]) {
            out << ',';
            if (c) {
                out << std::fixed << std::setprecision(3) << *c;
            } else {
                out << "--";
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string to_json_line(const TimingRecord &record) {
    nlohmann::ordered_json j;
    j["task"] = to_string(record.task);
    j["dimension"] = record.dimension;
    j["strategy"] = record.strategy.label();
    j["workers"] = record.workers;
    j["repetitions"] = record.repetitions;
    j["wall_time_seconds"] = record.wall_time;
    return j.dump();
}

std::vector<TimingRecord> run_bench(const BenchSpec &spec, std::ostream *log) {
    std::vector<TimingRecord> records;
    for (BenchTask task : spec.tasks) {
        for (std::size_t dim : spec.dimensions) {
            for (const auto &strategy : spec.strategies) {
                if (!strategy.feasible_for(dim)) {
                    if (log != nullptr) {
                        *log << "skip " << to_string(task) << ' ' << strategy.label() << " at " << dim
                             << ": infeasible\n";
                    }
                    continue;
                }
                TimingRecord record;
                if (task == BenchTask::taylor) {
                    record = time_taylor(dim, strategy, spec.repetitions, spec.seed);
                } else {
                    EvolutionTiming options;
                    options.include_factors = spec.include_factors;
                    options.seed = spec.seed;
                    record = time_evolution(dim, strategy, spec.evolution_steps, spec.repetitions, options);
                }
                if (log != nullptr) {
                    *log << to_string(task) << ' ' << strategy.label() << " at " << dim << ": " << record.wall_time
                         << " s\n";
                }
                records.push_back(std::move(record));
            }
        }
    }
    return records;
}

}  // namespace tcm
