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
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tcm/densela.hpp"

namespace tcm {

/// Environment variable capping the number of Cannon workers per grid.
inline constexpr const char *kMaxWorkersEnv = "TCM_MAX_WORKERS";
inline constexpr std::size_t kDefaultMaxWorkers = 1024;

/// Worker-count cap from TCM_MAX_WORKERS, or kDefaultMaxWorkers when unset.
std::size_t max_workers();

/// Either the serial product or Cannon on a q x q torus of workers.
class GridStrategy {
  public:
    static GridStrategy serial() { return GridStrategy(0); }
    static GridStrategy grid(std::size_t q);

    /// Accepts "serial", "grid(q)", "qxq" or a bare side length.
    static GridStrategy parse(std::string_view text);

    /// The grid sides swept by default: 2, 4, 8, 16.
    static std::vector<GridStrategy> default_grids();

    bool is_serial() const { return side_ == 0; }
    /// Grid side q; 0 for serial.
    std::size_t side() const { return side_; }
    std::size_t workers() const { return is_serial() ? 1 : side_ * side_; }

    /// "serial" or "qxq".
    std::string label() const;

    /// Whether this strategy can multiply dim x dim matrices (divisibility and
    /// the worker cap).
    bool feasible_for(std::size_t dim) const;

    friend bool operator==(const GridStrategy &, const GridStrategy &) = default;

  private:
    explicit GridStrategy(std::size_t side) : side_(side) {}
    std::size_t side_;
};

struct BlockIndex {
    std::size_t row = 0;
    std::size_t col = 0;
    friend bool operator==(const BlockIndex &, const BlockIndex &) = default;
};

/// q x q tiling of a square matrix; block (i, j) is owned by worker P_{i,j}.
class BlockGrid {
  public:
    BlockGrid(std::size_t q, std::size_t block_dim);

    std::size_t side() const { return q_; }
    std::size_t block_dim() const { return block_dim_; }
    std::size_t dim() const { return q_ * block_dim_; }

    bool has_block(BlockIndex at) const;
    const ComplexMatrix &block(BlockIndex at) const;
    void set_block(BlockIndex at, ComplexMatrix block);
    void remove_block(BlockIndex at);

  private:
    std::size_t slot(BlockIndex at) const;

    std::size_t q_;
    std::size_t block_dim_;
    std::vector<std::optional<ComplexMatrix>> blocks_;
};

/// Block (i, j) receives rows [i N/q, (i+1) N/q) x cols [j N/q, (j+1) N/q).
/// Throws PartitionError when q does not divide N.
BlockGrid partition(const ComplexMatrix &m, std::size_t q);

/// Inverse of partition. Throws PartitionError if any block is absent.
ComplexMatrix gather(const BlockGrid &grid);

/// Where worker (i, j) takes its A block from after alignment: (i, (j+i) mod q).
BlockIndex aligned_a_source(BlockIndex worker, std::size_t q);
/// Where worker (i, j) takes its B block from after alignment: ((i+j) mod q, j).
BlockIndex aligned_b_source(BlockIndex worker, std::size_t q);

struct AlignedGrids {
    BlockGrid a;
    BlockGrid b;
};

/// Skews A left by i in row i and B up by j in column j, as a single
/// permutation. Throws PartitionError on mismatched grids.
AlignedGrids initial_alignment(const BlockGrid &a, const BlockGrid &b);

/// q x q persistent workers connected as a torus by point-to-point mailboxes.
///
/// A multiplication runs the full Cannon schedule: each worker cuts its own
/// blocks from the (read-only) operands, aligns, then does q rounds of local
/// multiply-accumulate, each followed by a cyclic shift of A one step left and
/// B one step up. Rounds are separated by a barrier, so the result does not
/// depend on thread scheduling. Calls on one grid are serialized.
class WorkerGrid {
  public:
    explicit WorkerGrid(std::size_t q);
    ~WorkerGrid();

    WorkerGrid(const WorkerGrid &) = delete;
    WorkerGrid &operator=(const WorkerGrid &) = delete;

    std::size_t side() const;
    std::size_t workers() const { return side() * side(); }

    /// A * B. Throws PartitionError if q does not divide the dimension and
    /// WorkerError if any worker fails (no partial result is returned).
    ComplexMatrix multiply(const ComplexMatrix &a, const ComplexMatrix &b);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Multiplication engine bound to one strategy. Owns its worker grid for its
/// whole lifetime, so a trajectory pays thread start-up once.
class Multiplier {
  public:
    explicit Multiplier(GridStrategy strategy);
    ~Multiplier();
    Multiplier(Multiplier &&) noexcept;
    Multiplier &operator=(Multiplier &&) noexcept;

    const GridStrategy &strategy() const { return strategy_; }

    ComplexMatrix multiply(const ComplexMatrix &a, const ComplexMatrix &b);

    /// M_1 (M_2 (... (M_{k-1} M_k))). Needs at least two factors.
    ComplexMatrix chain(std::span<const ComplexMatrix *const> factors);
    ComplexMatrix chain(std::initializer_list<std::reference_wrapper<const ComplexMatrix>> factors);

  private:
    GridStrategy strategy_;
    std::unique_ptr<WorkerGrid> grid_;
};

/// A * B under the given strategy; serial delegates to matmul_serial.
ComplexMatrix cannon_multiply(const ComplexMatrix &a, const ComplexMatrix &b, GridStrategy strategy);

/// Right-nested product of the list; for k copies of M this is M^k.
ComplexMatrix cannon_chain(std::span<const ComplexMatrix> factors, GridStrategy strategy);

namespace testing {

/// Deliberate defects for mutation tests. Not for production use.
struct FaultInjection {
    /// Shift A blocks right instead of left during the transfer rounds.
    bool reverse_a_shift = false;
    /// Worker that throws during its first multiply-accumulate.
    std::optional<BlockIndex> failing_worker;
};

/// Installs a fault for the lifetime of the guard (process-wide).
class ScopedFault {
  public:
    explicit ScopedFault(FaultInjection fault);
    ~ScopedFault();
    ScopedFault(const ScopedFault &) = delete;
    ScopedFault &operator=(const ScopedFault &) = delete;

  private:
    FaultInjection previous_;
};

}  // namespace testing

}  // namespace tcm
