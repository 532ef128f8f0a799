#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "blocksplit/rng.hpp"

namespace blocksplit {

/// Block capacity B and batch size r, both in keys.
class SplitParams {
public:
    /// Throws ParameterError unless B >= 3 and r >= 1.
    SplitParams(int block_size, int batch_size);

    int block_size() const noexcept { return block_size_; }
    int batch_size() const noexcept { return batch_size_; }

    bool odd_capacity() const noexcept { return block_size_ % 2 == 1; }

    /// Half capacity (B+1)/2; only defined for odd B.
    std::optional<int> half() const noexcept;

    /// Half capacity, throwing ParameterError when B is even.
    int require_half() const;

    friend bool operator==(const SplitParams&, const SplitParams&) = default;

private:
    int block_size_;
    int batch_size_;
};

/// Multiset of block sizes produced by one batch landing in one block.
struct Outcome {
    std::vector<int> sizes;

    std::int64_t total() const noexcept;
};

enum class SeedingMode {
    /// One block holding only the dummy minus-infinity key.
    empty_with_dummy,
    /// One block of (B+1)/2 keys: the dummy plus a first batch of (B-1)/2.
    paper_seed,
};

/// Number of blocks of each size, plus the total key count n.
///
/// Sampling mass per size (size * count) is kept in a Fenwick tree so that a
/// uniformly drawn key rank maps to its block size in O(log B).
class BlockHistogram {
public:
    explicit BlockHistogram(int capacity);

    static BlockHistogram from_counts(int capacity,
                                      const std::vector<std::pair<int, std::int64_t>>& counts);

    int capacity() const noexcept { return capacity_; }
    std::int64_t total_keys() const noexcept { return total_keys_; }
    std::int64_t block_count() const noexcept { return block_count_; }
    bool empty() const noexcept { return block_count_ == 0; }

    std::int64_t count(int size) const;

    void add(int size, std::int64_t how_many = 1);
    /// Throws StateError when no block of this size exists.
    void remove(int size);

    /// Smallest size s whose cumulative key mass (sizes 1..s) reaches rank.
    /// rank must be in [1, total_keys()].
    int size_at_rank(std::int64_t rank) const;

    /// Nonzero (size, count) pairs in ascending size order.
    std::vector<std::pair<int, std::int64_t>> nonzero() const;

    /// Recomputes n from the counts and compares with the cached value.
    bool mass_consistent() const;

private:
    void check_size(int size) const;
    void fenwick_add(int size, std::int64_t delta);

    int capacity_;
    std::vector<std::int64_t> counts_;  // index = size
    std::vector<std::int64_t> tree_;    // Fenwick over size * count
    int top_bit_;
    std::int64_t total_keys_ = 0;
    std::int64_t block_count_ = 0;
};

/// Initial state for a simulation run.
BlockHistogram new_histogram(SeedingMode mode, const SplitParams& params);

/// Draws a block size with probability size * count / n.
int sample_hit(const BlockHistogram& hist, Rng& rng);

/// Replaces one block of size `hit` by the blocks in `out`. The outcome must
/// carry exactly hit + batch_size keys.
void apply_outcome(BlockHistogram& hist, int hit, const Outcome& out, int batch_size);

/// n / (B * number_of_blocks).
double fullness(const BlockHistogram& hist, int block_size);

struct SeriesPoint {
    std::int64_t keys;
    double fullness;
};

/// Per-run and cross-run fullness statistics for one batch size.
struct FullnessSummary {
    int batch_size = 0;
    std::vector<double> per_run_final_fullness;
    double mean_fullness = 0.0;
    double min_fullness = 0.0;
    double max_fullness = 0.0;
    /// One series per run when recording was requested, otherwise empty.
    std::vector<std::vector<SeriesPoint>> series;
};

/// Fills mean/min/max from per_run_final_fullness.
void summarize(FullnessSummary& summary);

}  // namespace blocksplit
