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

#include "tcm/verify.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "tcm/analysis.hpp"
#include "tcm/error.hpp"
#include "tcm/evolution.hpp"

namespace tcm {

ComplexMatrix random_complex_matrix(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    ComplexMatrix m(dim);
    for (auto &z : m.data()) {
        const double re = uniform();
        z = Complex(re, uniform());
    }
    return m;
}

CheckResult check_cannon_oracle(const std::vector<CannonOracleCase> &cases, int seeds, double tolerance,
                                std::uint64_t first_seed) {
    CheckResult result{"cannon_vs_serial", 0.0, tolerance, true, {}};
    std::map<std::size_t, Multiplier> engines;
    std::string worst;
    for (int s = 0; s < seeds; ++s) {
        const std::uint64_t seed = first_seed + static_cast<std::uint64_t>(s);
        for (const auto &c : cases) {
            const auto a = random_complex_matrix(c.dimension, 2 * seed);
            const auto b = random_complex_matrix(c.dimension, 2 * seed + 1);
            const auto reference = matmul_serial(a, b);
            const double scale = frobenius_norm(reference);
            for (const auto &strategy : c.strategies) {
                auto it = engines.find(strategy.side());
                if (it == engines.end()) {
                    it = engines.emplace(strategy.side(), Multiplier(strategy)).first;
                }
                const double err = frobenius_distance(it->second.multiply(a, b), reference) / scale;
                if (!(err <= result.max_error)) {
                    result.max_error = err;
                    worst = "dim " + std::to_string(c.dimension) + ", " + strategy.label() + ", seed " +
                            std::to_string(seed);
                }
            }
        }
    }
    result.passed = result.max_error <= tolerance;
    result.detail = "worst case " + worst;
    return result;
}

CheckResult check_taylor_exact(const ModelParams &params, double dt, int order, GridStrategy strategy) {
    const auto h = build_hamiltonian(params);
    const double x = spectral_norm_hermitian(h) * dt / params.hbar;
    Multiplier engine(strategy);
    const auto left = build_left_factor(h, dt, order, engine, params.hbar);
    const auto right = build_right_factor(h, dt, order, engine, params.hbar);
    const auto exact_left = matexp_exact(Complex(0.0, -dt / params.hbar) * h);
    const auto exact_right = matexp_exact(Complex(0.0, dt / params.hbar) * h);
    const double err_left = frobenius_distance(left, exact_left);
    const double err_right = frobenius_distance(right, exact_right);
    const bool adjoint_exact = right == adjoint(left);

    CheckResult result;
    result.name = "taylor_vs_exact";
    result.max_error = std::max(err_left, err_right);
    result.threshold = taylor_remainder_bound(x, order) + 1e-12;
    result.passed = result.max_error <= result.threshold && adjoint_exact;
    std::ostringstream detail;
    detail << "n=" << params.n << ", ||H||dt/hbar=" << x << ", K=" << order << ", " << strategy.label()
           << ", |L-exp|=" << err_left << ", |R-exp|=" << err_right
           << ", R==L^dagger: " << (adjoint_exact ? "yes" : "NO");
    result.detail = detail.str();
    return result;
}

CheckResult check_rabi(const ModelParams &params, double dt, double t_end, double tolerance,
                       GridStrategy strategy) {
    if (params.n != 1) {
        throw InvalidArgument("check_rabi: needs a single atom");
    }
    EvolutionConfig config;
    config.dt = dt;
    config.steps = static_cast<int>(std::ceil(t_end / dt - 1e-9));
    config.strategy = strategy;
    const auto record = run_trajectory(params, config, initial_state_all_excited(1));
    const double g = params.couplings.front();

    CheckResult result{"rabi_analytic", 0.0, tolerance, false, {}};
    for (std::size_t k = 0; k < record.times.size(); ++k) {
        const double s = std::sin(g * record.times[k] / params.hbar);
        result.max_error = std::max(result.max_error, std::abs(record.photon_probs[k][1] - s * s));
    }
    result.passed = result.max_error <= tolerance;
    std::ostringstream detail;
    detail << "g=" << g << ", dt=" << dt << ", " << config.steps << " steps to t=" << record.times.back();
    result.detail = detail.str();
    return result;
}

SymmetryCheck check_sector_symmetry(const ModelParams &params, double dt, int steps, double tolerance,
                                    GridStrategy strategy) {
    EvolutionConfig config;
    config.dt = dt;
    config.steps = steps;
    config.strategy = strategy;
    const auto record = run_trajectory(params, config, initial_state_all_excited(params.n));
    const auto report = analyze_sectors(record);

    SymmetryCheck out;
    std::ostringstream times;
    int violations = 0;
    for (int m = 1; m <= params.n; ++m) {
        const double t = report.first_peak_time[static_cast<std::size_t>(m)];
        times << (m > 1 ? " " : "") << "P_" << m << "@" << t;
        if (std::isnan(t) || (m > 1 && !(report.first_peak_time[static_cast<std::size_t>(m - 1)] < t))) {
            ++violations;
        }
    }
    out.ordering = {"sector_peak_order", static_cast<double>(violations), 0.0, violations == 0, times.str()};

    std::ostringstream heights;
    for (int m = 0; m <= params.n; ++m) {
        heights << (m > 0 ? " " : "") << "max P_" << m << "=" << report.max_height[static_cast<std::size_t>(m)];
    }
    out.symmetry = {"sector_peak_symmetry", report.max_symmetry_gap, tolerance,
                    report.max_symmetry_gap <= tolerance, heights.str()};
    return out;
}

std::vector<CheckResult> run_verification(const VerifyOptions &options, std::ostream *log) {
    const bool full = options.level == VerifyLevel::full;
    std::vector<CheckResult> results;
    auto report = [&](CheckResult r) {
        if (log != nullptr) {
            *log << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": max error " << r.max_error << " (threshold "
                 << r.threshold << ") " << r.detail << '\n';
        }
        results.push_back(std::move(r));
    };

    std::vector<CannonOracleCase> cases{{16, {GridStrategy::grid(2), GridStrategy::grid(4)}},
                                        {64, {GridStrategy::grid(2), GridStrategy::grid(4), GridStrategy::grid(8)}}};
    if (full) {
        cases.push_back({256, GridStrategy::default_grids()});
    }
    report(check_cannon_oracle(cases, full ? 10 : 5, 1e-10));

    auto model = [&](int n, double g) {
        auto p = ModelParams::uniform(n, g);
        p.photon_factors = options.photon_factors;
        return p;
    };
    if (full) {
        report(check_taylor_exact(model(8, 0.02), 0.02, kDefaultTaylorOrder, GridStrategy::grid(4)));
    } else {
        report(check_taylor_exact(model(4, 0.02), 0.04, kDefaultTaylorOrder, GridStrategy::grid(2)));
    }

    report(check_rabi(model(1, 1.0), 1e-3, (full ? 2.0 : 1.0) * std::numbers::pi, 1e-4));

    if (full) {
        auto sym = check_sector_symmetry(model(8, 0.02), 0.02, 5000, 0.02);
        report(std::move(sym.ordering));
        report(std::move(sym.symmetry));
    }
    return results;
}

}  // namespace tcm
