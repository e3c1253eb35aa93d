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
#include <vector>

#include "tcm/cannon.hpp"
#include "tcm/densela.hpp"
#include "tcm/model.hpp"

namespace tcm {

inline constexpr int kDefaultTaylorOrder = 10;

/// Trajectories abort once |trace(rho) - 1| exceeds this.
inline constexpr double kTraceAbortThreshold = 1e-4;

/// Density matrix checked at construction: Hermitian to 1e-10, unit trace to
/// 1e-8, real diagonal no lower than -1e-12. Evolved states are not
/// re-validated; their drift is what the trajectory diagnostics report.
class DensityMatrix {
  public:
    /// Throws InvalidArgument if the invariants above do not hold.
    static DensityMatrix from_matrix(ComplexMatrix m);

    /// |index><index| in a dim-dimensional space.
    static DensityMatrix pure(std::size_t dim, std::size_t index);

    const ComplexMatrix &matrix() const { return mat_; }
    std::size_t dim() const { return mat_.dim(); }
    double trace() const;

  private:
    explicit DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {}
    friend DensityMatrix evolve_step(const ComplexMatrix &, const DensityMatrix &, const ComplexMatrix &,
                                     Multiplier &, bool);

    ComplexMatrix mat_;
};

struct EvolutionConfig {
    double dt = 1e-3;
    int steps = 1;
    int taylor_order = kDefaultTaylorOrder;
    GridStrategy strategy = GridStrategy::serial();
    bool renormalize_trace = false;
    /// Record every stride-th step (t = 0 and the final step are always kept).
    int stride = 1;

    void validate() const;
};

/// Observables of a run, one entry per recorded time.
struct TrajectoryRecord {
    std::vector<double> times;
    /// photon_probs[k][m] is P_m at times[k].
    std::vector<std::vector<double>> photon_probs;
    std::vector<double> trace;
    /// Atomic excitations plus photons; equals n * trace on this subspace.
    std::vector<double> excitation;
    std::vector<double> hermiticity_defect;
    /// Largest |trace - 1| over every step, recorded or not.
    double max_trace_drift = 0.0;
};

/// (x)^(K+1) / (K+1)!, the leading remainder of the order-K Taylor series at x.
double taylor_remainder_bound(double x, int order);

/// I + M + sum_{k=2..K} M^k / k! with M = -(i/hbar) H dt. The powers are the
/// right-nested chains M (M (... M)), each reusing the previous one.
ComplexMatrix build_left_factor(const ComplexMatrix &h, double dt, int order, Multiplier &engine,
                                double hbar = 1.0);
ComplexMatrix build_left_factor(const ComplexMatrix &h, double dt, int order, GridStrategy strategy,
                                double hbar = 1.0);

/// Same series with M = +(i/hbar) H dt. The powers are accumulated as
/// (M^{k-1}) M, the mirror image of the left factor's products, which makes
/// the result bitwise equal to adjoint(build_left_factor(...)) for any
/// Hermitian H and any strategy.
ComplexMatrix build_right_factor(const ComplexMatrix &h, double dt, int order, Multiplier &engine,
                                 double hbar = 1.0);
ComplexMatrix build_right_factor(const ComplexMatrix &h, double dt, int order, GridStrategy strategy,
                                 double hbar = 1.0);

/// rho' = L (rho R), optionally divided by its trace afterwards.
DensityMatrix evolve_step(const ComplexMatrix &left, const DensityMatrix &rho, const ComplexMatrix &right,
                          Multiplier &engine, bool renormalize_trace = false);
DensityMatrix evolve_step(const ComplexMatrix &left, const DensityMatrix &rho, const ComplexMatrix &right,
                          GridStrategy strategy, bool renormalize_trace = false);

/// All n atoms excited, no photons.
DensityMatrix initial_state_all_excited(int n);

/// P_0..P_n: population of each free-photon sector (sector m holds the
/// states with n - m excited atoms).
std::vector<double> photon_distribution(const DensityMatrix &rho, int n);

/// Builds H, L and R once, then steps config.steps times. Throws
/// AccuracyError when the trace drifts past kTraceAbortThreshold.
TrajectoryRecord run_trajectory(const ModelParams &params, const EvolutionConfig &config,
                                const DensityMatrix &rho0, int max_atoms = kDefaultMaxAtoms);

}  // namespace tcm
