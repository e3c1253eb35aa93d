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

// Command-line front end: simulate, verify, bench, plotdata.

#include <CLI11.hpp>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tcm/commands.hpp"
#include "tcm/error.hpp"

namespace {

struct SimulateFlags {
    std::string config_path;
    std::optional<int> atoms;
    std::optional<double> coupling;
    std::vector<double> couplings;
    std::optional<double> omega;
    std::optional<double> hbar;
    std::optional<std::string> photon_factors;
    std::optional<double> dt;
    std::optional<int> steps;
    std::optional<int> order;
    std::optional<std::string> strategy;
    std::optional<int> stride;
    bool renormalize = false;
    std::optional<int> max_atoms;
    std::optional<std::string> output;
    std::optional<std::string> summary;
    bool print_config = false;
};

tcm::RunConfig resolve(const SimulateFlags &f) {
    tcm::RunConfig c = f.config_path.empty() ? tcm::RunConfig{} : tcm::load_run_config(f.config_path);
    if (f.atoms) {
        c.model.n = *f.atoms;
        if (!f.coupling && f.couplings.empty()) {
            c.model.couplings.assign(static_cast<std::size_t>(std::max(*f.atoms, 0)), c.model.couplings.front());
        }
    }
    if (f.coupling) {
        c.model.couplings.assign(static_cast<std::size_t>(std::max(c.model.n, 0)), *f.coupling);
    }
    if (!f.couplings.empty()) {
        c.model.couplings = f.couplings;
    }
    if (f.omega) {
        c.model.omega = *f.omega;
    }
    if (f.hbar) {
        c.model.hbar = *f.hbar;
    }
    if (f.photon_factors) {
        c.model.photon_factors = tcm::photon_factors_from_string(*f.photon_factors);
    }
    if (f.dt) {
        c.evolution.dt = *f.dt;
    }
    if (f.steps) {
        c.evolution.steps = *f.steps;
    }
    if (f.order) {
        c.evolution.taylor_order = *f.order;
    }
    if (f.strategy) {
        c.evolution.strategy = tcm::GridStrategy::parse(*f.strategy);
    }
    if (f.stride) {
        c.evolution.stride = *f.stride;
    }
    if (f.renormalize) {
        c.evolution.renormalize_trace = true;
    }
    if (f.max_atoms) {
        c.max_atoms = *f.max_atoms;
    }
    if (f.output) {
        c.trajectory_path = *f.output;
    }
    if (f.summary) {
        c.summary_path = *f.summary;
    }
    return c;
}

std::vector<std::size_t> parse_dims(const std::vector<std::string> &items) {
    std::vector<std::size_t> dims;
    for (const auto &s : items) {
        // "2^9" or "512"
        if (auto caret = s.find('^'); caret != std::string::npos) {
            if (s.substr(0, caret) != "2") {
                throw tcm::InvalidArgument("dimension '" + s + "' must be 2^k");
            }
            dims.push_back(std::size_t{1} << std::stoul(s.substr(caret + 1)));
        } else {
            dims.push_back(std::stoul(s));
        }
    }
    return dims;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Tavis-Cummings unitary evolution with Cannon block-distributed matrix products"};
    app.require_subcommand(1);

    SimulateFlags sim;
    auto *simulate = app.add_subcommand("simulate", "Run a trajectory; write CSV and a JSON summary");
    simulate->add_option("-c,--config", sim.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    simulate->add_option("-n,--atoms", sim.atoms, "Number of atoms");
    simulate->add_option("-g,--coupling", sim.coupling, "Equal coupling for every atom");
    simulate->add_option("--couplings", sim.couplings, "Per-atom couplings")->delimiter(',');
    simulate->add_option("--omega", sim.omega, "Shared atom/cavity angular frequency");
    simulate->add_option("--hbar", sim.hbar, "Reduced Planck constant (internal units)");
    simulate->add_option("--photon-factors", sim.photon_factors, "bosonic (sqrt(p+1)) or flat");
    simulate->add_option("--dt", sim.dt, "Time step");
    simulate->add_option("--steps", sim.steps, "Number of steps");
    simulate->add_option("-K,--order", sim.order, "Taylor order");
    simulate->add_option("-s,--strategy", sim.strategy, "serial, grid(q), qxq or q");
    simulate->add_option("--stride", sim.stride, "Record every stride-th step");
    simulate->add_flag("--renormalize", sim.renormalize, "Divide rho by its trace after each step");
    simulate->add_option("--max-atoms", sim.max_atoms, "Refuse models with more atoms than this");
    simulate->add_option("-o,--output", sim.output, "Trajectory CSV path");
    simulate->add_option("--summary", sim.summary, "Summary JSON path");
    simulate->add_flag("--print-config", sim.print_config, "Print the resolved configuration and exit");

    std::string level = "quick";
    std::string verify_factors = "bosonic";
    auto *verify = app.add_subcommand("verify", "Run the oracle checks");
    verify->add_option("-l,--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
    verify->add_option("--photon-factors", verify_factors, "bosonic or flat")
        ->check(CLI::IsMember({"bosonic", "flat"}));

    std::vector<std::string> dims{"2^6", "2^7", "2^8"};
    std::vector<std::string> strategies{"serial", "2x2", "4x4", "8x8", "16x16"};
    std::vector<std::string> tasks{"taylor", "evolution"};
    tcm::BenchCommand bench_cmd;
    bool exclude_factors = false;
    auto *bench = app.add_subcommand("bench", "Time strategies against serial execution");
    bench->add_option("-d,--dims", dims, "Matrix dimensions (e.g. 2^8,2^9)")->delimiter(',');
    bench->add_option("-s,--strategies", strategies, "Strategies (serial must be included)")->delimiter(',');
    bench->add_option("-t,--tasks", tasks, "taylor, evolution")->delimiter(',');
    bench->add_option("-r,--reps", bench_cmd.spec.repetitions, "Repetitions per cell (median reported)");
    bench->add_option("--steps", bench_cmd.spec.evolution_steps, "Evolution steps per timed run");
    bench->add_flag("--exclude-factors", exclude_factors, "Build L and R outside the evolution timing");
    bench->add_option("--seed", bench_cmd.spec.seed, "Seed of the synthetic Hamiltonians");
    bench->add_option("-o,--out", bench_cmd.out_dir, "Output directory");

    std::string plot_input;
    std::string plot_out = "plotdata";
    auto *plotdata = app.add_subcommand("plotdata", "Split a trajectory CSV into per-sector series");
    plotdata->add_option("trajectory", plot_input, "Trajectory CSV from simulate")->required();
    plotdata->add_option("-o,--out", plot_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(tcm::ExitCode::usage);
    }

    try {
        tcm::ExitCode code = tcm::ExitCode::ok;
        if (*simulate) {
            tcm::RunConfig config;
            try {
                config = resolve(sim);
                config.validate();
            } catch (const tcm::Error &e) {
                std::cerr << "invalid config: " << e.what() << '\n';
                return static_cast<int>(tcm::ExitCode::invalid_config);
            }
            if (sim.print_config) {
                std::cout << tcm::serialize_run_config(config);
                return 0;
            }
            code = tcm::cmd_simulate(config, std::cout, std::cerr);
        } else if (*verify) {
            tcm::VerifyOptions options;
            options.level = level == "full" ? tcm::VerifyLevel::full : tcm::VerifyLevel::quick;
            options.photon_factors = tcm::photon_factors_from_string(verify_factors);
            code = tcm::cmd_verify(options, std::cout, std::cerr);
        } else if (*bench) {
            try {
                bench_cmd.spec.dimensions = parse_dims(dims);
                bench_cmd.spec.strategies.clear();
                for (const auto &s : strategies) {
                    bench_cmd.spec.strategies.push_back(tcm::GridStrategy::parse(s));
                }
                bench_cmd.spec.tasks.clear();
                for (const auto &t : tasks) {
                    bench_cmd.spec.tasks.push_back(tcm::bench_task_from_string(t));
                }
            } catch (const std::exception &e) {
                std::cerr << "invalid bench spec: " << e.what() << '\n';
                return static_cast<int>(tcm::ExitCode::invalid_config);
            }
            bench_cmd.spec.include_factors = !exclude_factors;
            code = tcm::cmd_bench(bench_cmd, std::cout, std::cerr);
        } else if (*plotdata) {
            code = tcm::cmd_plotdata(plot_input, plot_out, std::cout, std::cerr);
        }
        return static_cast<int>(code);
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return static_cast<int>(tcm::ExitCode::internal_error);
    }
}
