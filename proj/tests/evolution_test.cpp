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

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "tcm/error.hpp"
#include "tcm/evolution.hpp"
#include "tcm/verify.hpp"

namespace tcm {
namespace {

ComplexMatrix random_hermitian(std::size_t dim, std::uint64_t seed) {
    const auto x = random_complex_matrix(dim, seed);
    ComplexMatrix h(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            h(r, c) = x(r, c) + std::conj(x(c, r));
        }
    }
    return h;
}

double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

TEST(TaylorFactor, ZeroStepIsIdentity) {
    const auto h = build_hamiltonian(ModelParams::uniform(3, 0.4));
    EXPECT_EQ(build_left_factor(h, 0.0, 10, GridStrategy::serial()), ComplexMatrix::identity(8));
    EXPECT_EQ(build_right_factor(h, 0.0, 10, GridStrategy::grid(2)), ComplexMatrix::identity(8));
}

TEST(TaylorFactor, FirstOrderIsEuler) {
    const auto h = build_hamiltonian(ModelParams::uniform(2, 0.3));
    const double dt = 0.01;
    const auto left = build_left_factor(h, dt, 1, GridStrategy::serial());
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            const Complex want = (r == c ? 1.0 : 0.0) - Complex(0.0, dt) * h(r, c);
            EXPECT_LE(std::abs(left(r, c) - want), 1e-17);
        }
    }
}

TEST(TaylorFactor, MatchesExactExponential) {
    const auto h = build_hamiltonian(ModelParams::uniform(1, 1.0));
    const double dt = 0.01;
    const auto exact = matexp_exact(Complex(0.0, -dt) * h);
    EXPECT_LE(frobenius_distance(build_left_factor(h, dt, 10, GridStrategy::serial()), exact), 1e-14);
    EXPECT_LE(frobenius_distance(build_right_factor(h, dt, 10, GridStrategy::serial()), adjoint(exact)), 1e-14);
}

TEST(TaylorFactor, ErrorWithinRemainderBound) {
    const auto h = build_hamiltonian(ModelParams::uniform(4, 0.02));
    const double dt = 0.5;
    const double x = spectral_norm_hermitian(h) * dt;
    for (int order : {2, 4, 6}) {
        const auto left = build_left_factor(h, dt, order, GridStrategy::grid(2));
        const auto exact = matexp_exact(Complex(0.0, -dt) * h);
        // Entry-wise the error is below the operator-norm bound; Frobenius adds sqrt(dim).
        EXPECT_LE(frobenius_distance(left, exact), 4.0 * taylor_remainder_bound(x, order) * std::exp(x) + 1e-14)
            << "order " << order;
    }
    EXPECT_DOUBLE_EQ(taylor_remainder_bound(1.0, 1), 0.5);
    EXPECT_DOUBLE_EQ(taylor_remainder_bound(2.0, 2), 8.0 / 6.0);
}

TEST(TaylorFactor, RightIsBitwiseAdjointOfLeft) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto h = random_hermitian(16, seed);
        for (const auto &strategy : {GridStrategy::serial(), GridStrategy::grid(2), GridStrategy::grid(4)}) {
            const auto left = build_left_factor(h, 0.03, 10, strategy, 1.5);
            const auto right = build_right_factor(h, 0.03, 10, strategy, 1.5);
            EXPECT_EQ(right, adjoint(left)) << "seed " << seed << " " << strategy.label();
        }
    }
}

TEST(TaylorFactor, RejectsBadArguments) {
    const auto h = build_hamiltonian(ModelParams::uniform(2, 0.1));
    EXPECT_THROW(build_left_factor(h, 0.1, 0, GridStrategy::serial()), InvalidArgument);
    EXPECT_THROW(build_left_factor(h, -0.1, 4, GridStrategy::serial()), InvalidArgument);
    EXPECT_THROW(build_left_factor(h, 0.1, 4, GridStrategy::serial(), 0.0), InvalidArgument);
    EXPECT_THROW(build_left_factor(h, 0.1, 4, GridStrategy::grid(3)), PartitionError);
    ComplexMatrix skew = h;
    skew(0, 1) += Complex(0.0, 1.0);
    EXPECT_THROW(build_left_factor(skew, 0.1, 4, GridStrategy::serial()), InvalidArgument);
}

TEST(EvolveStep, IdentityFactorsLeaveStateUnchanged) {
    const auto rho = initial_state_all_excited(3);
    const auto id = ComplexMatrix::identity(8);
    EXPECT_EQ(evolve_step(id, rho, id, GridStrategy::grid(2)).matrix(), rho.matrix());
}

TEST(DensityMatrix, Validation) {
    EXPECT_THROW(DensityMatrix::from_matrix(ComplexMatrix(2)), InvalidArgument);
    EXPECT_THROW(DensityMatrix::from_matrix(ComplexMatrix(2, {0.5, 1.0, 0.0, 0.5})), InvalidArgument);
    EXPECT_THROW(DensityMatrix::from_matrix(ComplexMatrix(2, {1.5, 0.0, 0.0, -0.5})), InvalidArgument);
    EXPECT_NO_THROW(DensityMatrix::from_matrix(ComplexMatrix(2, {0.5, 0.5, 0.5, 0.5})));
    EXPECT_THROW(DensityMatrix::pure(4, 4), DimensionError);
    EXPECT_EQ(initial_state_all_excited(3).matrix()(7, 7), 1.0);
}

TEST(PhotonDistribution, Examples) {
    const auto p = photon_distribution(initial_state_all_excited(4), 4);
    EXPECT_EQ(p, (std::vector<double>{1.0, 0.0, 0.0, 0.0, 0.0}));
    const auto mixed = DensityMatrix::from_matrix(0.25 * ComplexMatrix::identity(4));
    EXPECT_EQ(photon_distribution(mixed, 2), (std::vector<double>{0.25, 0.5, 0.25}));
    EXPECT_THROW(photon_distribution(mixed, 3), DimensionError);
}

TEST(RunTrajectory, SingleAtomFullTransfer) {
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.steps = 1571;
    const auto rec = run_trajectory(ModelParams::uniform(1, 1.0), cfg, initial_state_all_excited(1));
    EXPECT_LE(rec.photon_probs.back()[0], 1e-4);
    EXPECT_GE(rec.photon_probs.back()[1], 1.0 - 1e-4);
}

TEST(RunTrajectory, SingleAtomSineSquaredLaw) {
    const double g = 0.02;
    EvolutionConfig cfg;
    cfg.dt = 0.05;
    cfg.steps = 3142;  // one period pi/g
    const auto rec = run_trajectory(ModelParams::uniform(1, g), cfg, initial_state_all_excited(1));
    ASSERT_EQ(rec.times.size(), 3143u);
    double worst = 0.0;
    for (std::size_t k = 0; k < rec.times.size(); ++k) {
        const double s = std::sin(g * rec.times[k]);
        worst = std::max(worst, std::abs(rec.photon_probs[k][1] - s * s));
    }
    EXPECT_LE(worst, 1e-10);
    EXPECT_GE(rec.photon_probs.back()[0], 1.0 - 1e-4);
    EXPECT_LE(rec.max_trace_drift, 1e-12);
}

TEST(RunTrajectory, ObservablesStayConsistent) {
    EvolutionConfig cfg;
    cfg.dt = 0.1;
    cfg.steps = 200;
    const int n = 4;
    const auto rec = run_trajectory(ModelParams::uniform(n, 0.05), cfg, initial_state_all_excited(n));
    for (std::size_t k = 0; k < rec.times.size(); ++k) {
        double total = 0.0;
        for (double p : rec.photon_probs[k]) {
            EXPECT_GE(p, -1e-12);
            total += p;
        }
        EXPECT_NEAR(total, rec.trace[k], 1e-12);
        EXPECT_NEAR(rec.excitation[k], n * rec.trace[k], 1e-12);
        EXPECT_LE(rec.hermiticity_defect[k], 1e-12);
    }
}

TEST(RunTrajectory, GlobalPhaseDoesNotMatter) {
    // omega only shifts the diagonal by a multiple of the identity.
    EvolutionConfig cfg;
    // Kept small so the truncation error (which does depend on the shift) is negligible.
    cfg.dt = 0.01;
    cfg.steps = 200;
    const auto a = run_trajectory(ModelParams::uniform(3, 0.05, 1.0), cfg, initial_state_all_excited(3));
    const auto b = run_trajectory(ModelParams::uniform(3, 0.05, 1.5), cfg, initial_state_all_excited(3));
    for (std::size_t k = 0; k < a.times.size(); ++k) {
        EXPECT_LE(max_abs_diff(a.photon_probs[k], b.photon_probs[k]), 1e-11);
    }
}

TEST(RunTrajectory, StrategiesAgree) {
    EvolutionConfig cfg;
    cfg.dt = 0.1;
    cfg.steps = 50;
    const auto params = ModelParams::uniform(4, 0.05);
    const auto serial = run_trajectory(params, cfg, initial_state_all_excited(4));
    for (std::size_t q : {2u, 4u}) {
        cfg.strategy = GridStrategy::grid(q);
        const auto grid = run_trajectory(params, cfg, initial_state_all_excited(4));
        EXPECT_LE(max_abs_diff(grid.photon_probs.back(), serial.photon_probs.back()), 1e-12);
    }
    cfg.strategy = GridStrategy::grid(3);
    EXPECT_THROW(run_trajectory(params, cfg, initial_state_all_excited(4)), PartitionError);
}

TEST(RunTrajectory, AbortsOnTraceDrift) {
    EvolutionConfig cfg;
    cfg.dt = 0.5;
    cfg.steps = 100;
    cfg.taylor_order = 1;
    const auto params = ModelParams::uniform(3, 1.0);
    EXPECT_THROW(run_trajectory(params, cfg, initial_state_all_excited(3)), AccuracyError);
    cfg.renormalize_trace = true;
    const auto rec = run_trajectory(params, cfg, initial_state_all_excited(3));
    EXPECT_LE(rec.max_trace_drift, 1e-12);
}

TEST(RunTrajectory, StrideKeepsEndpoints) {
    EvolutionConfig cfg;
    cfg.dt = 0.1;
    cfg.steps = 10;
    cfg.stride = 4;
    const auto rec = run_trajectory(ModelParams::uniform(2, 0.1), cfg, initial_state_all_excited(2));
    ASSERT_EQ(rec.times.size(), 4u);  // 0, 4, 8, 10
    EXPECT_DOUBLE_EQ(rec.times[1], 0.4);
    EXPECT_DOUBLE_EQ(rec.times.back(), 1.0);
}

TEST(EvolutionConfig, Validation) {
    EvolutionConfig cfg;
    cfg.steps = 0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = {};
    cfg.dt = 0.0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = {};
    cfg.stride = 0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    EXPECT_THROW(run_trajectory(ModelParams::uniform(2, 0.1), EvolutionConfig{}, initial_state_all_excited(3)),
                 DimensionError);
}

}  // namespace
}  // namespace tcm
