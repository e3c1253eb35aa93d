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

#include "tcm/cannon.hpp"

#include <algorithm>
#include <barrier>
#include <charconv>
#include <condition_variable>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

#include "tcm/error.hpp"

namespace tcm {

namespace {

std::mutex g_fault_mutex;
testing::FaultInjection g_fault;

testing::FaultInjection current_fault() {
    std::lock_guard lock(g_fault_mutex);
    return g_fault;
}

std::size_t parse_size(std::string_view text) {
    std::size_t value = 0;
    const auto *end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw InvalidArgument("cannot parse grid size '" + std::string(text) + "'");
    }
    return value;
}

using Block = std::vector<Complex>;

/// Single-consumer message queue. Closing it wakes the receiver with nothing.
class Mailbox {
  public:
    void send(Block block) {
        {
            std::lock_guard lock(mutex_);
            if (closed_) {
                return;
            }
            queue_.push_back(std::move(block));
        }
        cv_.notify_one();
    }

    std::optional<Block> receive() {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return closed_ || !queue_.empty(); });
        if (queue_.empty()) {
            return std::nullopt;
        }
        Block out = std::move(queue_.front());
        queue_.pop_front();
        return out;
    }

    void close() {
        {
            std::lock_guard lock(mutex_);
            closed_ = true;
        }
        cv_.notify_all();
    }

  private:
    std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<Block> queue_;
    bool closed_ = false;
};

struct Aborted {};

}  // namespace

std::size_t max_workers() {
    const char *env = std::getenv(kMaxWorkersEnv);
    if (env == nullptr || *env == '\0') {
        return kDefaultMaxWorkers;
    }
    return parse_size(env);
}

// --- GridStrategy ---

GridStrategy GridStrategy::grid(std::size_t q) {
    if (q == 0) {
        throw InvalidArgument("grid strategy needs a side of at least 1");
    }
    return GridStrategy(q);
}

GridStrategy GridStrategy::parse(std::string_view text) {
    if (text == "serial") {
        return serial();
    }
    if (text.starts_with("grid(") && text.ends_with(")")) {
        return grid(parse_size(text.substr(5, text.size() - 6)));
    }
    if (auto x = text.find('x'); x != std::string_view::npos) {
        const auto rows = parse_size(text.substr(0, x));
        const auto cols = parse_size(text.substr(x + 1));
        if (rows != cols) {
            throw InvalidArgument("only square worker grids are supported: '" + std::string(text) + "'");
        }
        return grid(rows);
    }
    return grid(parse_size(text));
}

std::vector<GridStrategy> GridStrategy::default_grids() { return {grid(2), grid(4), grid(8), grid(16)}; }

std::string GridStrategy::label() const {
    if (is_serial()) {
        return "serial";
    }
    return std::to_string(side_) + "x" + std::to_string(side_);
}

bool GridStrategy::feasible_for(std::size_t dim) const {
    if (is_serial()) {
        return true;
    }
    return dim % side_ == 0 && workers() <= max_workers();
}

// --- BlockGrid ---

BlockGrid::BlockGrid(std::size_t q, std::size_t block_dim) : q_(q), block_dim_(block_dim), blocks_(q * q) {
    if (q == 0 || block_dim == 0) {
        throw PartitionError("BlockGrid: grid side and block dimension must be positive");
    }
}

std::size_t BlockGrid::slot(BlockIndex at) const {
    if (at.row >= q_ || at.col >= q_) {
        throw PartitionError("BlockGrid: block index out of range");
    }
    return at.row * q_ + at.col;
}

bool BlockGrid::has_block(BlockIndex at) const { return blocks_[slot(at)].has_value(); }

const ComplexMatrix &BlockGrid::block(BlockIndex at) const {
    const auto &b = blocks_[slot(at)];
    if (!b) {
        throw PartitionError("BlockGrid: block (" + std::to_string(at.row) + ", " + std::to_string(at.col) +
                             ") is missing");
    }
    return *b;
}

void BlockGrid::set_block(BlockIndex at, ComplexMatrix block) {
    if (block.dim() != block_dim_) {
        throw DimensionError("BlockGrid: block has dimension " + std::to_string(block.dim()) + ", expected " +
                             std::to_string(block_dim_));
    }
    blocks_[slot(at)] = std::move(block);
}

void BlockGrid::remove_block(BlockIndex at) { blocks_[slot(at)].reset(); }

BlockGrid partition(const ComplexMatrix &m, std::size_t q) {
    if (q == 0 || m.dim() % q != 0) {
        throw PartitionError("partition: grid side " + std::to_string(q) + " does not divide dimension " +
                             std::to_string(m.dim()));
    }
    const std::size_t b = m.dim() / q;
    BlockGrid grid(q, b);
    for (std::size_t bi = 0; bi < q; ++bi) {
        for (std::size_t bj = 0; bj < q; ++bj) {
            ComplexMatrix block(b);
            for (std::size_t r = 0; r < b; ++r) {
                for (std::size_t c = 0; c < b; ++c) {
                    block(r, c) = m(bi * b + r, bj * b + c);
                }
            }
            grid.set_block({bi, bj}, std::move(block));
        }
    }
    return grid;
}

ComplexMatrix gather(const BlockGrid &grid) {
    const std::size_t q = grid.side();
    const std::size_t b = grid.block_dim();
    ComplexMatrix m(grid.dim());
    for (std::size_t bi = 0; bi < q; ++bi) {
        for (std::size_t bj = 0; bj < q; ++bj) {
            const auto &block = grid.block({bi, bj});
            for (std::size_t r = 0; r < b; ++r) {
                for (std::size_t c = 0; c < b; ++c) {
                    m(bi * b + r, bj * b + c) = block(r, c);
                }
            }
        }
    }
    return m;
}

BlockIndex aligned_a_source(BlockIndex worker, std::size_t q) { return {worker.row, (worker.col + worker.row) % q}; }

BlockIndex aligned_b_source(BlockIndex worker, std::size_t q) { return {(worker.row + worker.col) % q, worker.col}; }

AlignedGrids initial_alignment(const BlockGrid &a, const BlockGrid &b) {
    if (a.side() != b.side() || a.block_dim() != b.block_dim()) {
        throw PartitionError("initial_alignment: grids differ in side or block dimension");
    }
    const std::size_t q = a.side();
    AlignedGrids out{BlockGrid(q, a.block_dim()), BlockGrid(q, b.block_dim())};
    for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
            out.a.set_block({i, j}, a.block(aligned_a_source({i, j}, q)));
            out.b.set_block({i, j}, b.block(aligned_b_source({i, j}, q)));
        }
    }
    return out;
}

// --- WorkerGrid ---

namespace {

/// State of one multiplication, shared by the coordinator and all workers.
struct Job {
    Job(std::size_t q, const ComplexMatrix &a, const ComplexMatrix &b, testing::FaultInjection fault)
        : q(q), block_dim(a.dim() / q), a(a), b(b), fault(std::move(fault)), a_inbox(q * q), b_inbox(q * q),
          results(q * q), round_barrier(static_cast<std::ptrdiff_t>(q * q)) {}

    void fail(std::exception_ptr error) {
        {
            std::lock_guard lock(error_mutex);
            if (!first_error) {
                first_error = error;
            }
        }
        for (auto &box : a_inbox) {
            box.close();
        }
        for (auto &box : b_inbox) {
            box.close();
        }
    }

    std::size_t q;
    std::size_t block_dim;
    const ComplexMatrix &a;
    const ComplexMatrix &b;
    testing::FaultInjection fault;
    std::vector<Mailbox> a_inbox;
    std::vector<Mailbox> b_inbox;
    std::vector<Block> results;
    std::barrier<> round_barrier;
    std::mutex error_mutex;
    std::exception_ptr first_error;
};

Block cut_block(const ComplexMatrix &m, BlockIndex at, std::size_t b) {
    Block out(b * b);
    for (std::size_t r = 0; r < b; ++r) {
        const auto row = m.data().subspan((at.row * b + r) * m.dim() + at.col * b, b);
        std::copy(row.begin(), row.end(), out.begin() + static_cast<std::ptrdiff_t>(r * b));
    }
    return out;
}

Block receive_or_abort(Mailbox &box) {
    auto block = box.receive();
    if (!block) {
        throw Aborted{};
    }
    return std::move(*block);
}

void run_worker(Job &job, BlockIndex me) {
    const std::size_t q = job.q;
    const std::size_t b = job.block_dim;
    auto id = [q](BlockIndex at) { return at.row * q + at.col; };
    const std::size_t self = id(me);

    // Generalization: cut own blocks A_ij, B_ij.
    Block a_block = cut_block(job.a, me, b);
    Block b_block = cut_block(job.b, me, b);

    // Alignment: A_ij goes left i steps, B_ij goes up j steps.
    job.a_inbox[id({me.row, (me.col + q - me.row % q) % q})].send(std::move(a_block));
    job.b_inbox[id({(me.row + q - me.col % q) % q, me.col})].send(std::move(b_block));
    a_block = receive_or_abort(job.a_inbox[self]);
    b_block = receive_or_abort(job.b_inbox[self]);
    job.round_barrier.arrive_and_wait();

    const BlockIndex left{me.row, (me.col + q - 1) % q};
    const BlockIndex right{me.row, (me.col + 1) % q};
    const BlockIndex up{(me.row + q - 1) % q, me.col};
    const BlockIndex a_target = job.fault.reverse_a_shift ? right : left;

    Block c_block(b * b);
    for (std::size_t round = 0; round < q; ++round) {
        if (round == 0 && job.fault.failing_worker && *job.fault.failing_worker == me) {
            throw WorkerError("injected failure in worker (" + std::to_string(me.row) + ", " +
                              std::to_string(me.col) + ")");
        }
        multiply_accumulate(a_block, b_block, c_block, b);
        job.a_inbox[id(a_target)].send(std::move(a_block));
        job.b_inbox[id(up)].send(std::move(b_block));
        a_block = receive_or_abort(job.a_inbox[self]);
        b_block = receive_or_abort(job.b_inbox[self]);
        job.round_barrier.arrive_and_wait();
    }
    job.results[self] = std::move(c_block);
}

}  // namespace

struct WorkerGrid::Impl {
    explicit Impl(std::size_t q) : q(q) {
        threads.reserve(q * q);
        for (std::size_t w = 0; w < q * q; ++w) {
            threads.emplace_back([this, w] { loop(w); });
        }
    }

    ~Impl() {
        {
            std::lock_guard lock(mutex);
            stopping = true;
        }
        cv.notify_all();
        for (auto &t : threads) {
            t.join();
        }
    }

    void loop(std::size_t w) {
        std::uint64_t seen = 0;
        for (;;) {
            Job *job = nullptr;
            {
                std::unique_lock lock(mutex);
                cv.wait(lock, [&] { return stopping || generation != seen; });
                if (stopping) {
                    return;
                }
                seen = generation;
                job = current;
            }
            const BlockIndex me{w / q, w % q};
            try {
                run_worker(*job, me);
            } catch (const Aborted &) {
                job->round_barrier.arrive_and_drop();
            } catch (...) {
                job->fail(std::current_exception());
                job->round_barrier.arrive_and_drop();
            }
            {
                std::lock_guard lock(mutex);
                ++finished;
            }
            done_cv.notify_all();
        }
    }

    std::size_t q;
    std::mutex checkout;  // one multiplication at a time
    std::mutex mutex;
    std::condition_variable cv;
    std::condition_variable done_cv;
    std::uint64_t generation = 0;
    std::size_t finished = 0;
    Job *current = nullptr;
    bool stopping = false;
    std::vector<std::thread> threads;
};

WorkerGrid::WorkerGrid(std::size_t q) {
    if (q == 0) {
        throw InvalidArgument("WorkerGrid: side must be at least 1");
    }
    if (q * q > max_workers()) {
        throw WorkerError("WorkerGrid: " + std::to_string(q * q) + " workers requested, cap is " +
                          std::to_string(max_workers()) + " (" + kMaxWorkersEnv + ")");
    }
    impl_ = std::make_unique<Impl>(q);
}

WorkerGrid::~WorkerGrid() = default;

std::size_t WorkerGrid::side() const { return impl_->q; }

ComplexMatrix WorkerGrid::multiply(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("cannon_multiply: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()) + ")");
    }
    const std::size_t q = impl_->q;
    if (a.dim() % q != 0) {
        throw PartitionError("cannon_multiply: grid side " + std::to_string(q) + " does not divide dimension " +
                             std::to_string(a.dim()));
    }
    std::lock_guard checkout(impl_->checkout);
    Job job(q, a, b, current_fault());
    {
        std::lock_guard lock(impl_->mutex);
        impl_->current = &job;
        impl_->finished = 0;
        ++impl_->generation;
    }
    impl_->cv.notify_all();
    {
        std::unique_lock lock(impl_->mutex);
        impl_->done_cv.wait(lock, [&] { return impl_->finished == q * q; });
        impl_->current = nullptr;
    }

    if (job.first_error) {
        try {
            std::rethrow_exception(job.first_error);
        } catch (const WorkerError &) {
            throw;
        } catch (const std::exception &e) {
            throw WorkerError(std::string("cannon_multiply: worker failed: ") + e.what());
        }
    }

    const std::size_t bd = job.block_dim;
    ComplexMatrix c(a.dim());
    for (std::size_t w = 0; w < q * q; ++w) {
        const std::size_t bi = w / q;
        const std::size_t bj = w % q;
        const Block &block = job.results[w];
        for (std::size_t r = 0; r < bd; ++r) {
            std::copy_n(block.begin() + static_cast<std::ptrdiff_t>(r * bd), bd,
                        c.data().begin() + static_cast<std::ptrdiff_t>((bi * bd + r) * c.dim() + bj * bd));
        }
    }
    return c;
}

// --- Multiplier ---

Multiplier::Multiplier(GridStrategy strategy) : strategy_(strategy) {
    if (!strategy_.is_serial()) {
        grid_ = std::make_unique<WorkerGrid>(strategy_.side());
    }
}

Multiplier::~Multiplier() = default;
Multiplier::Multiplier(Multiplier &&) noexcept = default;
Multiplier &Multiplier::operator=(Multiplier &&) noexcept = default;

ComplexMatrix Multiplier::multiply(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (!grid_) {
        return matmul_serial(a, b);
    }
    return grid_->multiply(a, b);
}

ComplexMatrix Multiplier::chain(std::span<const ComplexMatrix *const> factors) {
    if (factors.size() < 2) {
        throw InvalidArgument("cannon_chain: needs at least two matrices");
    }
    const std::size_t dim = factors.front()->dim();
    for (const auto *m : factors) {
        if (m->dim() != dim) {
            throw DimensionError("cannon_chain: all matrices must share one dimension");
        }
    }
    ComplexMatrix acc = multiply(*factors[factors.size() - 2], *factors.back());
    for (std::size_t k = factors.size() - 2; k-- > 0;) {
        acc = multiply(*factors[k], acc);
    }
    return acc;
}

ComplexMatrix Multiplier::chain(std::initializer_list<std::reference_wrapper<const ComplexMatrix>> factors) {
    std::vector<const ComplexMatrix *> ptrs;
    ptrs.reserve(factors.size());
    for (const auto &f : factors) {
        ptrs.push_back(&f.get());
    }
    return chain(std::span<const ComplexMatrix *const>(ptrs));
}

ComplexMatrix cannon_multiply(const ComplexMatrix &a, const ComplexMatrix &b, GridStrategy strategy) {
    if (!strategy.is_serial() && a.dim() % strategy.side() != 0) {
        throw PartitionError("cannon_multiply: grid side " + std::to_string(strategy.side()) +
                             " does not divide dimension " + std::to_string(a.dim()));
    }
    Multiplier engine(strategy);
    return engine.multiply(a, b);
}

ComplexMatrix cannon_chain(std::span<const ComplexMatrix> factors, GridStrategy strategy) {
    std::vector<const ComplexMatrix *> ptrs;
    ptrs.reserve(factors.size());
    for (const auto &f : factors) {
        ptrs.push_back(&f);
    }
    Multiplier engine(strategy);
    return engine.chain(ptrs);
}

namespace testing {

ScopedFault::ScopedFault(FaultInjection fault) {
    std::lock_guard lock(g_fault_mutex);
    previous_ = std::exchange(g_fault, std::move(fault));
}

ScopedFault::~ScopedFault() {
    std::lock_guard lock(g_fault_mutex);
    g_fault = std::move(previous_);
}

}  // namespace testing

}  // namespace tcm
