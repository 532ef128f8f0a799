#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "blocksplit/core.hpp"
#include "blocksplit/rng.hpp"
#include "blocksplit/strategies.hpp"

namespace blocksplit {

struct RunConfig {
    StrategyKind strategy = StrategyKind::even;
    SplitParams params{240, 1};
    std::int64_t total_insertions = 200000;
    int runs = 10;
    std::uint64_t base_seed = 1;
    SeedingMode seeding = SeedingMode::empty_with_dummy;
    bool record_series = false;
    /// Record one series point every this many batches (when recording).
    std::int64_t series_stride = 1;
    Uneven2Mode uneven2_mode = Uneven2Mode::exact;
    /// Worker threads for independent runs; 0 or 1 runs sequentially.
    int threads = 0;
};

/// Throws ParameterError for inconsistent configurations before any work.
void validate_config(const RunConfig& cfg);

/// Starting histogram for a strategy. Uneven regimes start from one block of
/// r keys (the first batch) and reject paper seeding.
BlockHistogram initial_histogram(const RunConfig& cfg);

/// Called after every batch with the updated state, the hit size and the outcome.
using BatchObserver = std::function<void(const BlockHistogram&, int, const Outcome&)>;

struct RunResult {
    BlockHistogram histogram{1};
    double final_fullness = 0.0;
    std::int64_t batches = 0;
    std::vector<SeriesPoint> series;
};

/// One Monte Carlo run with seed base_seed + run_index.
RunResult run_single(const RunConfig& cfg, int run_index, const BatchObserver& observer = {});

/// All runs of cfg, aggregated. Output does not depend on cfg.threads.
FullnessSummary run_monte_carlo(const RunConfig& cfg);

struct RecurrenceOptions {
    /// Iterate only on the support set (the full space carries zeros elsewhere).
    bool support_only = true;
    /// Record every this many steps; 0 records only the final state.
    std::int64_t record_stride = 0;
};

struct RecurrencePoint {
    std::int64_t n = 0;
    double fullness = 0.0;
    std::vector<double> v_over_n;
};

struct RecurrenceResult {
    std::vector<int> sizes;       // labels of v
    std::int64_t n0 = 0;
    std::int64_t n = 0;
    std::vector<double> v;        // expected block counts at n
    double fullness = 0.0;
    double min_entry = 0.0;       // smallest entry seen over the whole run
    double worst_mass_defect = 0.0;  // max |<v, w> - n| / n over the run
    std::vector<RecurrencePoint> trajectory;

    std::vector<double> v_over_n() const;
};

/// Iterates v <- v + A v / n from v = e_d at n = d for the given number of
/// batches. Requires odd B and r <= (B-1)/2.
RecurrenceResult run_expected_recurrence(const SplitParams& params, std::int64_t steps,
                                         const RecurrenceOptions& options = {});

enum class Continuation {
    /// Keep inserting into the ceil((B+1)/2) half after an even split.
    paper_rule,
    /// Keep inserting into whichever half holds the insertion gap.
    gap_following,
};

/// Explicit-key simulator used as an oracle for the histogram simulator.
/// Blocks hold key labels in rank order; a batch lands in a uniformly chosen
/// gap (the gap right after one of the n keys).
class KeyLevelSimulator {
public:
    static constexpr std::int64_t max_insertions = 1'000'000;

    KeyLevelSimulator(StrategyKind strategy, const SplitParams& params, Continuation continuation,
                      Uneven2Mode mode = Uneven2Mode::exact,
                      std::int64_t capacity_hint = max_insertions);

    /// Adds a block of `size` fresh keys.
    void seed_block(int size);

    /// Inserts one batch after the `position`-th key of block `slot`
    /// (position 0 means before its first key) and returns the sizes of the
    /// blocks the hit block turned into.
    std::vector<int> insert_batch(std::size_t slot, int position);

    /// Draws a gap uniformly and inserts a batch there. Returns the hit size.
    int step(Rng& rng);

    std::int64_t total_keys() const noexcept { return total_keys_; }
    std::size_t block_count() const noexcept { return blocks_.size(); }
    const std::vector<std::uint64_t>& block(std::size_t slot) const { return blocks_[slot]; }
    double fullness() const;
    BlockHistogram histogram() const;

private:
    void fenwick_add(std::size_t slot, std::int64_t delta);
    /// Brings the Fenwick entry of `slot` in line with its current size.
    void sync(std::size_t slot);
    std::size_t append_block(std::vector<std::uint64_t> keys);
    std::pair<std::size_t, std::int64_t> locate(std::int64_t rank) const;
    std::uint64_t fresh() { return next_label_++; }

    void even_batch(std::size_t slot, int position, std::vector<std::size_t>& touched);
    void deferred_batch(std::size_t slot, int position, std::vector<std::size_t>& touched);
    void uneven_batch(std::size_t slot, int position, std::vector<std::size_t>& touched);
    std::pair<int, int> uneven_targets(int hit) const;

    StrategyKind strategy_;
    SplitParams params_;
    Continuation continuation_;
    Uneven2Mode mode_;
    std::vector<std::vector<std::uint64_t>> blocks_;
    std::vector<std::int64_t> tracked_;  // slot sizes as recorded in tree_
    std::vector<std::int64_t> tree_;     // Fenwick over slot sizes, 1-based
    std::int64_t total_keys_ = 0;
    std::uint64_t next_label_ = 0;
};

/// Runs the key-level oracle for every seed of cfg.
FullnessSummary run_key_level(const RunConfig& cfg, Continuation continuation);

}  // namespace blocksplit
