#include "blocksplit/core.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "blocksplit/errors.hpp"

namespace blocksplit {

SplitParams::SplitParams(int block_size, int batch_size)
    : block_size_(block_size), batch_size_(batch_size) {
    if (block_size < 3) {
        throw ParameterError("block size B must be at least 3, got " + std::to_string(block_size));
    }
    if (batch_size < 1) {
        throw ParameterError("batch size r must be at least 1, got " + std::to_string(batch_size));
    }
}

std::optional<int> SplitParams::half() const noexcept {
    if (!odd_capacity()) return std::nullopt;
    return (block_size_ + 1) / 2;
}

int SplitParams::require_half() const {
    if (!odd_capacity()) {
        throw ParameterError("half capacity d = (B+1)/2 needs odd B, got B=" +
                             std::to_string(block_size_));
    }
    return (block_size_ + 1) / 2;
}

std::int64_t Outcome::total() const noexcept {
    return std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0});
}

BlockHistogram::BlockHistogram(int capacity)
    : capacity_(capacity),
      counts_(static_cast<std::size_t>(capacity) + 1, 0),
      tree_(static_cast<std::size_t>(capacity) + 1, 0),
      top_bit_(static_cast<int>(std::bit_floor(static_cast<unsigned>(capacity)))) {
    if (capacity < 1) throw ParameterError("histogram capacity must be positive");
}

BlockHistogram BlockHistogram::from_counts(
    int capacity, const std::vector<std::pair<int, std::int64_t>>& counts) {
    BlockHistogram hist(capacity);
    for (const auto& [size, count] : counts) {
        if (count < 0) throw ParameterError("negative block count");
        if (count > 0) hist.add(size, count);
    }
    return hist;
}

void BlockHistogram::check_size(int size) const {
    if (size < 1 || size > capacity_) {
        throw ContractError("block size " + std::to_string(size) + " outside [1, " +
                            std::to_string(capacity_) + "]");
    }
}

std::int64_t BlockHistogram::count(int size) const {
    if (size < 1 || size > capacity_) return 0;
    return counts_[static_cast<std::size_t>(size)];
}

void BlockHistogram::fenwick_add(int size, std::int64_t delta) {
    for (int i = size; i <= capacity_; i += i & -i) tree_[static_cast<std::size_t>(i)] += delta;
}

void BlockHistogram::add(int size, std::int64_t how_many) {
    check_size(size);
    counts_[static_cast<std::size_t>(size)] += how_many;
    fenwick_add(size, how_many * size);
    total_keys_ += how_many * size;
    block_count_ += how_many;
}

void BlockHistogram::remove(int size) {
    if (count(size) == 0) {
        throw StateError("no block of size " + std::to_string(size) + " to remove");
    }
    counts_[static_cast<std::size_t>(size)] -= 1;
    fenwick_add(size, -size);
    total_keys_ -= size;
    block_count_ -= 1;
}

int BlockHistogram::size_at_rank(std::int64_t rank) const {
    if (rank < 1 || rank > total_keys_) {
        throw ContractError("key rank " + std::to_string(rank) + " outside [1, " +
                            std::to_string(total_keys_) + "]");
    }
    // Standard Fenwick descent: largest position whose prefix mass is < rank.
    int pos = 0;
    std::int64_t remaining = rank;
    for (int step = top_bit_; step > 0; step >>= 1) {
        const int next = pos + step;
        if (next <= capacity_ && tree_[static_cast<std::size_t>(next)] < remaining) {
            pos = next;
            remaining -= tree_[static_cast<std::size_t>(next)];
        }
    }
    return pos + 1;
}

std::vector<std::pair<int, std::int64_t>> BlockHistogram::nonzero() const {
    std::vector<std::pair<int, std::int64_t>> out;
    for (int s = 1; s <= capacity_; ++s) {
        if (counts_[static_cast<std::size_t>(s)] > 0) {
            out.emplace_back(s, counts_[static_cast<std::size_t>(s)]);
        }
    }
    return out;
}

bool BlockHistogram::mass_consistent() const {
    std::int64_t keys = 0;
    std::int64_t blocks = 0;
    for (int s = 1; s <= capacity_; ++s) {
        keys += s * counts_[static_cast<std::size_t>(s)];
        blocks += counts_[static_cast<std::size_t>(s)];
    }
    return keys == total_keys_ && blocks == block_count_;
}

BlockHistogram new_histogram(SeedingMode mode, const SplitParams& params) {
    BlockHistogram hist(params.block_size());
    switch (mode) {
        case SeedingMode::empty_with_dummy:
            hist.add(1);
            break;
        case SeedingMode::paper_seed: {
            const int d = params.require_half();
            if (params.batch_size() > d - 1) {
                throw ParameterError("paper seeding requires r <= (B-1)/2");
            }
            hist.add(d);
            break;
        }
    }
    return hist;
}

int sample_hit(const BlockHistogram& hist, Rng& rng) {
    if (hist.empty() || hist.total_keys() < 1) {
        throw StateError("cannot sample a hit block from an empty histogram");
    }
    const auto rank = static_cast<std::int64_t>(
        rng.uniform_1_to(static_cast<std::uint64_t>(hist.total_keys())));
    return hist.size_at_rank(rank);
}

void apply_outcome(BlockHistogram& hist, int hit, const Outcome& out, int batch_size) {
    if (hist.count(hit) == 0) {
        throw StateError("hit size " + std::to_string(hit) + " is not present");
    }
    if (out.sizes.empty()) throw ContractError("outcome has no blocks");
    if (out.total() != static_cast<std::int64_t>(hit) + batch_size) {
        throw ContractError("outcome mass " + std::to_string(out.total()) + " != hit " +
                            std::to_string(hit) + " + r " + std::to_string(batch_size));
    }
    for (int s : out.sizes) {
        if (s < 1 || s > hist.capacity()) {
            throw ContractError("outcome block size " + std::to_string(s) + " out of range");
        }
    }
    hist.remove(hit);
    for (int s : out.sizes) hist.add(s);
}

double fullness(const BlockHistogram& hist, int block_size) {
    if (hist.empty()) throw StateError("fullness of an empty histogram");
    return static_cast<double>(hist.total_keys()) /
           (static_cast<double>(block_size) * static_cast<double>(hist.block_count()));
}

void summarize(FullnessSummary& summary) {
    const auto& v = summary.per_run_final_fullness;
    if (v.empty()) return;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    summary.min_fullness = *lo;
    summary.max_fullness = *hi;
    summary.mean_fullness = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace blocksplit
