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

#include "tcm/evolution.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "tcm/error.hpp"

namespace tcm {

namespace {

void require_hermitian(const ComplexMatrix &h, const char *what) {
    if (hermiticity_defect(h) > 1e-10 * std::max(1.0, frobenius_norm(h))) {
        throw InvalidArgument(std::string(what) + ": Hamiltonian is not Hermitian");
    }
}

void require_series_args(double dt, int order, double hbar, const char *what) {
    if (order < 1) {
        throw InvalidArgument(std::string(what) + ": Taylor order must be >= 1");
    }
    if (!std::isfinite(dt) || dt < 0.0) {
        throw InvalidArgument(std::string(what) + ": dt must be finite and non-negative");
    }
    if (!(hbar > 0.0)) {
        throw InvalidArgument(std::string(what) + ": hbar must be positive");
    }
}

enum class Side { left, right };

ComplexMatrix taylor_factor(const ComplexMatrix &h, double dt, int order, Multiplier &engine, double hbar,
                            Side side) {
    const char *what = side == Side::left ? "build_left_factor" : "build_right_factor";
    require_series_args(dt, order, hbar, what);
    require_hermitian(h, what);
    if (!engine.strategy().is_serial() && h.dim() % engine.strategy().side() != 0) {
        throw PartitionError(std::string(what) + ": grid side " + std::to_string(engine.strategy().side()) +
                             " does not divide dimension " + std::to_string(h.dim()));
    }

    const double s = dt / hbar;
    const ComplexMatrix m = Complex(0.0, side == Side::left ? -s : s) * h;
    ComplexMatrix factor = ComplexMatrix::identity(h.dim()) + m;
    ComplexMatrix power = m;
    double factorial = 1.0;
    for (int k = 2; k <= order; ++k) {
        // Cannon^k(M) = Cannon(M, Cannon^{k-1}(M)).
        power = side == Side::left ? engine.multiply(m, power) : engine.multiply(power, m);
        factorial *= k;
        factor += (1.0 / factorial) * power;
    }
    return factor;
}

}  // namespace

// --- DensityMatrix ---

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix m) {
    if (m.empty()) {
        throw InvalidArgument("DensityMatrix: empty matrix");
    }
    if (!m.all_finite()) {
        throw InvalidArgument("DensityMatrix: non-finite entry");
    }
    if (hermiticity_defect(m) > 1e-10) {
        throw InvalidArgument("DensityMatrix: not Hermitian");
    }
    if (std::abs(tcm::trace(m) - Complex(1.0)) > 1e-8) {
        throw InvalidArgument("DensityMatrix: trace is not 1");
    }
    for (std::size_t i = 0; i < m.dim(); ++i) {
        if (m(i, i).real() < -1e-12) {
            throw InvalidArgument("DensityMatrix: negative diagonal entry");
        }
    }
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw DimensionError("DensityMatrix::pure: index out of range");
    }
    ComplexMatrix m(dim);
    m(index, index) = 1.0;
    return DensityMatrix(std::move(m));
}

double DensityMatrix::trace() const { return tcm::trace(mat_).real(); }

// --- EvolutionConfig ---

void EvolutionConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidArgument("evolution: dt must be positive");
    }
    if (steps < 1) {
        throw InvalidArgument("evolution: steps must be >= 1");
    }
    if (taylor_order < 1) {
        throw InvalidArgument("evolution: taylor_order must be >= 1");
    }
    if (stride < 1) {
        throw InvalidArgument("evolution: stride must be >= 1");
    }
}

double taylor_remainder_bound(double x, int order) {
    double term = 1.0;
    for (int k = 1; k <= order + 1; ++k) {
        term *= x / k;
    }
    return term;
}

ComplexMatrix build_left_factor(const ComplexMatrix &h, double dt, int order, Multiplier &engine, double hbar) {
    return taylor_factor(h, dt, order, engine, hbar, Side::left);
}

ComplexMatrix build_left_factor(const ComplexMatrix &h, double dt, int order, GridStrategy strategy,
                                double hbar) {
    Multiplier engine(strategy);
    return build_left_factor(h, dt, order, engine, hbar);
}

ComplexMatrix build_right_factor(const ComplexMatrix &h, double dt, int order, Multiplier &engine, double hbar) {
    return taylor_factor(h, dt, order, engine, hbar, Side::right);
}

ComplexMatrix build_right_factor(const ComplexMatrix &h, double dt, int order, GridStrategy strategy,
                                 double hbar) {
    Multiplier engine(strategy);
    return build_right_factor(h, dt, order, engine, hbar);
}

DensityMatrix evolve_step(const ComplexMatrix &left, const DensityMatrix &rho, const ComplexMatrix &right,
                          Multiplier &engine, bool renormalize_trace) {
    if (left.dim() != rho.dim() || right.dim() != rho.dim()) {
        throw DimensionError("evolve_step: propagator and density matrix dimensions differ");
    }
    ComplexMatrix next = engine.chain({left, rho.matrix(), right});
    if (renormalize_trace) {
        next *= 1.0 / tcm::trace(next).real();
    }
    return DensityMatrix(std::move(next));
}

DensityMatrix evolve_step(const ComplexMatrix &left, const DensityMatrix &rho, const ComplexMatrix &right,
                          GridStrategy strategy, bool renormalize_trace) {
    Multiplier engine(strategy);
    return evolve_step(left, rho, right, engine, renormalize_trace);
}

DensityMatrix initial_state_all_excited(int n) {
    const auto basis = enumerate_basis(n);
    return DensityMatrix::pure(basis.size(), basis.size() - 1);
}

std::vector<double> photon_distribution(const DensityMatrix &rho, int n) {
    if (n < 1 || n > 31 || rho.dim() != (std::size_t{1} << n)) {
        throw DimensionError("photon_distribution: density matrix dimension is not 2^n for n=" +
                             std::to_string(n));
    }
    std::vector<double> probs(static_cast<std::size_t>(n) + 1, 0.0);
    const auto &m = rho.matrix();
    for (std::size_t s = 0; s < m.dim(); ++s) {
        const int excited = std::popcount(s);
        probs[static_cast<std::size_t>(n - excited)] += m(s, s).real();
    }
    return probs;
}

TrajectoryRecord run_trajectory(const ModelParams &params, const EvolutionConfig &config,
                                const DensityMatrix &rho0, int max_atoms) {
    params.validate();
    config.validate();
    if (rho0.dim() != params.dimension()) {
        throw DimensionError("run_trajectory: initial state has dimension " + std::to_string(rho0.dim()) +
                             ", model needs " + std::to_string(params.dimension()));
    }
    if (!config.strategy.feasible_for(rho0.dim())) {
        throw PartitionError("run_trajectory: strategy " + config.strategy.label() +
                             " cannot split dimension " + std::to_string(rho0.dim()));
    }

    Multiplier engine(config.strategy);
    const ComplexMatrix h = build_hamiltonian(params, max_atoms);
    const ComplexMatrix left = build_left_factor(h, config.dt, config.taylor_order, engine, params.hbar);
    const ComplexMatrix right = build_right_factor(h, config.dt, config.taylor_order, engine, params.hbar);

    TrajectoryRecord record;
    const int n = params.n;
    auto observe = [&](int step, const DensityMatrix &rho) {
        const auto probs = photon_distribution(rho, n);
        double excitation = 0.0;
        for (int m = 0; m <= n; ++m) {
            const double p = probs[static_cast<std::size_t>(m)];
            excitation += (n - m) * p + m * p;
        }
        record.times.push_back(step * config.dt);
        record.photon_probs.push_back(probs);
        record.trace.push_back(rho.trace());
        record.excitation.push_back(excitation);
        record.hermiticity_defect.push_back(hermiticity_defect(rho.matrix()));
    };

    DensityMatrix rho = rho0;
    record.max_trace_drift = std::abs(rho.trace() - 1.0);
    observe(0, rho);
    for (int step = 1; step <= config.steps; ++step) {
        rho = evolve_step(left, rho, right, engine, config.renormalize_trace);
        const double drift = std::abs(rho.trace() - 1.0);
        record.max_trace_drift = std::max(record.max_trace_drift, drift);
        if (!(drift <= kTraceAbortThreshold)) {
            throw AccuracyError("run_trajectory: trace drifted by " + std::to_string(drift) + " at step " +
                                std::to_string(step) + "; reduce dt or raise the Taylor order");
        }
        if (step % config.stride == 0 || step == config.steps) {
            observe(step, rho);
        }
    }
    return record;
}

}  // namespace tcm
