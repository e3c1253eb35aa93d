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

#include "tcm/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "tcm/analysis.hpp"
#include "tcm/error.hpp"

namespace tcm {

namespace {

using nlohmann::ordered_json;

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

double parse_double(std::string_view field, std::size_t line_no) {
    double v = 0.0;
    const auto *end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw MalformedCsv("line " + std::to_string(line_no) + ": not a number: '" + std::string(field) + "'");
    }
    return v;
}

std::string summary_json(const RunConfig &config, const TrajectoryRecord &record) {
    const auto rwa = check_rwa(config.model);
    const auto sectors = analyze_sectors(record);
    ordered_json j;
    j["atoms"] = config.model.n;
    j["photon_factors"] = to_string(config.model.photon_factors);
    j["dt"] = config.evolution.dt;
    j["steps"] = config.evolution.steps;
    j["taylor_order"] = config.evolution.taylor_order;
    j["strategy"] = config.evolution.strategy.label();
    j["rwa"] = {{"ratio", rwa.ratio}, {"valid", rwa.valid}};
    j["max_trace_drift"] = record.max_trace_drift;
    j["final_trace"] = record.trace.back();
    double max_defect = 0.0;
    for (double d : record.hermiticity_defect) {
        max_defect = std::max(max_defect, d);
    }
    j["max_hermiticity_defect"] = max_defect;
    j["sectors"] = ordered_json::array();
    for (int m = 0; m <= config.model.n; ++m) {
        const auto k = static_cast<std::size_t>(m);
        j["sectors"].push_back({{"m", m},
                                {"first_peak_time", number_or_null(sectors.first_peak_time[k])},
                                {"first_peak_height", number_or_null(sectors.first_peak_height[k])},
                                {"max_time", sectors.max_time[k]},
                                {"max_height", sectors.max_height[k]}});
    }
    j["peaks_ordered"] = sectors.peaks_ordered;
    j["max_symmetry_gap"] = sectors.max_symmetry_gap;
    return j.dump(2) + "\n";
}

std::string machine_header(const BenchCommand &command) {
    std::ostringstream out;
    out << "# hardware_concurrency=" << std::thread::hardware_concurrency() << " max_workers=" << max_workers()
        << " repetitions=" << command.spec.repetitions << " evolution_steps=" << command.spec.evolution_steps
        << " factors_included=" << (command.spec.include_factors ? "true" : "false") << '\n';
    return out.str();
}

}  // namespace

std::string trajectory_csv(const TrajectoryRecord &record) {
    std::ostringstream out;
    out << std::setprecision(17);
    const std::size_t sectors = record.photon_probs.empty() ? 0 : record.photon_probs.front().size();
    out << 't';
    for (std::size_t m = 0; m < sectors; ++m) {
        out << ",P_" << m;
    }
    out << ",trace,excitation\n";
    for (std::size_t k = 0; k < record.times.size(); ++k) {
        out << record.times[k];
        for (double p : record.photon_probs[k]) {
            out << ',' << p;
        }
        out << ',' << record.trace[k] << ',' << record.excitation[k] << '\n';
    }
    return out.str();
}

TrajectoryRecord parse_trajectory_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (!line.empty()) {
            lines.push_back(line);
        }
    }
    if (lines.empty()) {
        throw MalformedCsv("empty trajectory file");
    }
    const auto header = split(lines.front(), ',');
    if (header.size() < 4 || header.front() != "t" || header[header.size() - 2] != "trace" ||
        header.back() != "excitation") {
        throw MalformedCsv("header must be t,P_0,...,P_n,trace,excitation");
    }
    const std::size_t sectors = header.size() - 3;
    for (std::size_t m = 0; m < sectors; ++m) {
        if (header[m + 1] != "P_" + std::to_string(m)) {
            throw MalformedCsv("header column " + std::to_string(m + 1) + " should be P_" + std::to_string(m));
        }
    }
    if (lines.size() < 2) {
        throw MalformedCsv("trajectory has no rows");
    }
    TrajectoryRecord record;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split(lines[i], ',');
        if (fields.size() != header.size()) {
            throw MalformedCsv("line " + std::to_string(i + 1) + ": expected " + std::to_string(header.size()) +
                               " fields, got " + std::to_string(fields.size()));
        }
        record.times.push_back(parse_double(fields[0], i + 1));
        std::vector<double> probs;
        for (std::size_t m = 0; m < sectors; ++m) {
            probs.push_back(parse_double(fields[m + 1], i + 1));
        }
        record.photon_probs.push_back(std::move(probs));
        record.trace.push_back(parse_double(fields[sectors + 1], i + 1));
        record.excitation.push_back(parse_double(fields[sectors + 2], i + 1));
        if (i > 1 && !(record.times[i - 1] > record.times[i - 2])) {
            throw MalformedCsv("line " + std::to_string(i + 1) + ": times must increase");
        }
    }
    for (double t : record.trace) {
        record.max_trace_drift = std::max(record.max_trace_drift, std::abs(t - 1.0));
    }
    return record;
}

void write_file_atomic(const std::filesystem::path &path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::filesystem::filesystem_error("cannot open for writing", tmp,
                                                    std::make_error_code(std::errc::io_error));
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::filesystem::remove(tmp);
            throw std::filesystem::filesystem_error("write failed", tmp, std::make_error_code(std::errc::io_error));
        }
    }
    std::filesystem::rename(tmp, path);
}

ExitCode cmd_simulate(const RunConfig &config, std::ostream &out, std::ostream &err) {
    try {
        config.validate();
    } catch (const Error &e) {
        err << "invalid config: " << e.what() << '\n';
        return ExitCode::invalid_config;
    }
    const auto rwa = check_rwa(config.model);
    if (!rwa.valid) {
        err << "warning: g/(hbar omega) = " << rwa.ratio << " is not small; the rotating-wave approximation is "
            << "questionable\n";
    }

    TrajectoryRecord record;
    try {
        const auto basis = enumerate_basis(config.model.n, config.max_atoms);
        record = run_trajectory(config.model, config.evolution, DensityMatrix::pure(basis.size(), basis.size() - 1),
                                config.max_atoms);
    } catch (const AccuracyError &e) {
        err << "trajectory aborted: " << e.what() << '\n';
        return ExitCode::accuracy_abort;
    } catch (const Error &e) {
        err << "invalid config: " << e.what() << '\n';
        return ExitCode::invalid_config;
    }

    try {
        const auto csv = trajectory_csv(record);
        const auto summary = summary_json(config, record);
        write_file_atomic(config.trajectory_path, csv);
        write_file_atomic(config.summary_path, summary);
    } catch (const std::exception &e) {
        err << "cannot write output: " << e.what() << '\n';
        return ExitCode::io_error;
    }
    out << "wrote " << record.times.size() << " rows to " << config.trajectory_path.string() << ", summary to "
        << config.summary_path.string() << " (max trace drift " << record.max_trace_drift << ")\n";
    return ExitCode::ok;
}

ExitCode cmd_verify(const VerifyOptions &options, std::ostream &out, std::ostream &err) {
    try {
        const auto results = run_verification(options, &out);
        std::size_t failed = 0;
        for (const auto &r : results) {
            failed += r.passed ? 0 : 1;
        }
        out << results.size() - failed << "/" << results.size() << " checks passed\n";
        return failed == 0 ? ExitCode::ok : ExitCode::verify_failed;
    } catch (const AccuracyError &e) {
        err << "verification aborted: " << e.what() << '\n';
        return ExitCode::verify_failed;
    } catch (const Error &e) {
        err << "verification error: " << e.what() << '\n';
        return ExitCode::verify_failed;
    }
}

ExitCode cmd_bench(const BenchCommand &command, std::ostream &out, std::ostream &err) {
    const auto &spec = command.spec;
    if (spec.dimensions.empty() || spec.strategies.empty() || spec.tasks.empty() || spec.repetitions < 1 ||
        spec.evolution_steps < 1) {
        err << "bench: need at least one dimension, strategy and task, and positive repetitions and steps\n";
        return ExitCode::invalid_config;
    }
    if (std::find(spec.strategies.begin(), spec.strategies.end(), GridStrategy::serial()) == spec.strategies.end()) {
        err << "bench: the serial strategy is required as the speedup baseline\n";
        return ExitCode::invalid_config;
    }

    std::vector<TimingRecord> records;
    try {
        records = run_bench(spec, &err);
    } catch (const Error &e) {
        err << "bench failed: " << e.what() << '\n';
        return ExitCode::invalid_config;
    }

    try {
        std::filesystem::create_directories(command.out_dir);
        const std::string header = machine_header(command);
        std::string jsonl;
        for (const auto &r : records) {
            jsonl += to_json_line(r) + "\n";
        }
        write_file_atomic(command.out_dir / "records.jsonl", jsonl);
        out << header;
        for (BenchTask task : spec.tasks) {
            std::vector<TimingRecord> subset;
            for (const auto &r : records) {
                if (r.task == task) {
                    subset.push_back(r);
                }
            }
            const auto timing = timing_csv(subset, task);
            const auto speedup = speedup_csv(speedup_table(subset));
            const std::string name(to_string(task));
            write_file_atomic(command.out_dir / ("timing_" + name + ".csv"), header + timing);
            write_file_atomic(command.out_dir / ("speedup_" + name + ".csv"), header + speedup);
            out << "\n" << name << " wall time (s)\n" << timing << "\n" << name << " speedup\n" << speedup;
        }
    } catch (const std::exception &e) {
        err << "cannot write bench output: " << e.what() << '\n';
        return ExitCode::io_error;
    }
    return ExitCode::ok;
}

ExitCode cmd_plotdata(const std::filesystem::path &trajectory, const std::filesystem::path &out_dir,
                      std::ostream &out, std::ostream &err) {
    std::string text;
    {
        std::ifstream in(trajectory, std::ios::binary);
        if (!in) {
            err << "cannot read " << trajectory.string() << '\n';
            return ExitCode::io_error;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    TrajectoryRecord record;
    try {
        record = parse_trajectory_csv(text);
    } catch (const MalformedCsv &e) {
        err << "malformed trajectory CSV: " << e.what() << '\n';
        return ExitCode::malformed_csv;
    }

    const int sectors = static_cast<int>(record.photon_probs.front().size());
    try {
        std::filesystem::create_directories(out_dir);
        std::ostringstream peaks;
        peaks << std::setprecision(17) << "sector,t,height\n";
        for (int m = 0; m < sectors; ++m) {
            const auto series = sector_series(record, m);
            std::ostringstream csv;
            csv << std::setprecision(17) << "t,P_" << m << '\n';
            for (std::size_t k = 0; k < series.size(); ++k) {
                csv << record.times[k] << ',' << series[k] << '\n';
            }
            write_file_atomic(out_dir / ("P_" + std::to_string(m) + ".csv"), csv.str());
            for (const auto &p : find_peaks(record.times, series)) {
                peaks << m << ',' << p.time << ',' << p.height << '\n';
            }
        }
        write_file_atomic(out_dir / "peaks.csv", peaks.str());
    } catch (const std::exception &e) {
        err << "cannot write plot data: " << e.what() << '\n';
        return ExitCode::io_error;
    }
    out << "wrote " << sectors << " series and peaks.csv to " << out_dir.string() << '\n';
    return ExitCode::ok;
}

}  // namespace tcm
