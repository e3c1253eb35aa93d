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
#include <string>
#include <vector>

#include "tcm/cannon.hpp"
#include "tcm/model.hpp"

namespace tcm {

/// Outcome of one oracle check: the worst error seen against its threshold.
struct CheckResult {
    std::string name;
    double max_error = 0.0;
    double threshold = 0.0;
    bool passed = false;
    std::string detail;
};

/// Seeded matrix with real and imaginary parts uniform in [-1, 1).
ComplexMatrix random_complex_matrix(std::size_t dim, std::uint64_t seed);

struct CannonOracleCase {
    std::size_t dimension = 0;
    std::vector<GridStrategy> strategies;
};

/// Relative Frobenius error of cannon_multiply against matmul_serial over
/// every case and seeds [first_seed, first_seed + seeds).
CheckResult check_cannon_oracle(const std::vector<CannonOracleCase> &cases, int seeds, double tolerance,
                                std::uint64_t first_seed = 1);

/// L and R against the spectral exponential, plus the bitwise R == L^dagger
/// identity. The threshold is the order-K remainder at ||H|| dt / hbar plus
/// 1e-12; a failed adjoint identity fails the check regardless.
CheckResult check_taylor_exact(const ModelParams &params, double dt, int order, GridStrategy strategy);

/// One atom starting excited: P_1(t) against sin^2(g t / hbar) over
/// [0, t_end] at step dt.
CheckResult check_rabi(const ModelParams &params, double dt, double t_end, double tolerance,
                       GridStrategy strategy = GridStrategy::serial());

struct SymmetryCheck {
    CheckResult ordering;  ///< max_error counts out-of-order sectors
    CheckResult symmetry;  ///< max_error is the worst m <-> n-m peak gap
};

/// All-excited start at n atoms; first peaks of P_1..P_n must be strictly
/// ordered and peak heights of P_m and P_{n-m} within tolerance.
SymmetryCheck check_sector_symmetry(const ModelParams &params, double dt, int steps, double tolerance,
                                    GridStrategy strategy = GridStrategy::serial());

enum class VerifyLevel { quick, full };

struct VerifyOptions {
    VerifyLevel level = VerifyLevel::quick;
    PhotonFactors photon_factors = PhotonFactors::bosonic;
};

std::vector<CheckResult> run_verification(const VerifyOptions &options, std::ostream *log = nullptr);

}  // namespace tcm
