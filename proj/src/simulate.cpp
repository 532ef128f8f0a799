#include "blocksplit/simulate.hpp"

#include <algorithm>
#include <bit>
#include <future>
#include <numeric>
#include <string>

#include "blocksplit/errors.hpp"
#include "blocksplit/spectral.hpp"

namespace blocksplit {

namespace {

bool is_uneven(StrategyKind kind) {
    return kind == StrategyKind::uneven_regime1 || kind == StrategyKind::uneven_regime2;
}

template <typename Fn>
FullnessSummary collect_runs(const RunConfig& cfg, Fn&& one_run) {
    FullnessSummary summary;
    summary.batch_size = cfg.params.batch_size();
    const auto runs = static_cast<std::size_t>(cfg.runs);
    std::vector<std::pair<double, std::vector<SeriesPoint>>> results(runs);
    if (cfg.threads > 1 && cfg.runs > 1) {
        // Runs are dispatched in waves of `threads`; each writes only its own slot.
        for (std::size_t start = 0; start < runs; start += static_cast<std::size_t>(cfg.threads)) {
            std::vector<std::future<void>> wave;
            const std::size_t stop = std::min(runs, start + static_cast<std::size_t>(cfg.threads));
            for (std::size_t k = start; k < stop; ++k) {
                wave.push_back(std::async(std::launch::async,
                                          [&, k] { results[k] = one_run(static_cast<int>(k)); }));
            }
            for (auto& f : wave) f.get();
        }
    } else {
        for (std::size_t k = 0; k < runs; ++k) results[k] = one_run(static_cast<int>(k));
    }
    for (auto& [fill, series] : results) {
        summary.per_run_final_fullness.push_back(fill);
        if (cfg.record_series) summary.series.push_back(std::move(series));
    }
    summarize(summary);
    return summary;
}

}  // namespace

void validate_config(const RunConfig& cfg) {
    if (cfg.runs < 1) throw ParameterError("runs must be at least 1");
    if (cfg.total_insertions < cfg.params.batch_size()) {
        throw ParameterError("total insertions must be at least r");
    }
    if (cfg.series_stride < 1) throw ParameterError("series stride must be positive");
    validate_strategy(cfg.strategy, cfg.params, cfg.uneven2_mode);
    const auto kind = resolve_strategy(cfg.strategy, cfg.params);
    if (is_uneven(kind) && cfg.seeding == SeedingMode::paper_seed) {
        throw ParameterError("paper seeding applies only to even and deferred even splitting");
    }
}

BlockHistogram initial_histogram(const RunConfig& cfg) {
    const auto kind = resolve_strategy(cfg.strategy, cfg.params);
    if (is_uneven(kind)) {
        if (cfg.seeding == SeedingMode::paper_seed) {
            throw ParameterError("paper seeding applies only to even and deferred even splitting");
        }
        BlockHistogram hist(cfg.params.block_size());
        hist.add(cfg.params.batch_size());
        return hist;
    }
    return new_histogram(cfg.seeding, cfg.params);
}

RunResult run_single(const RunConfig& cfg, int run_index, const BatchObserver& observer) {
    validate_config(cfg);
    const auto kind = resolve_strategy(cfg.strategy, cfg.params);
    const int b = cfg.params.block_size();
    const int r = cfg.params.batch_size();
    Rng rng = Rng::for_run(cfg.base_seed, static_cast<std::uint64_t>(run_index));
    RunResult res;
    res.histogram = initial_histogram(cfg);
    auto& hist = res.histogram;
    if (cfg.record_series) res.series.push_back({hist.total_keys(), fullness(hist, b)});
    while (hist.total_keys() < cfg.total_insertions) {
        const int hit = sample_hit(hist, rng);
        const Outcome out = strategy_outcome(kind, hit, cfg.params, cfg.uneven2_mode);
        apply_outcome(hist, hit, out, r);
        ++res.batches;
        if (observer) observer(hist, hit, out);
        if (cfg.record_series && res.batches % cfg.series_stride == 0) {
            res.series.push_back({hist.total_keys(), fullness(hist, b)});
        }
    }
    res.final_fullness = fullness(hist, b);
    return res;
}

FullnessSummary run_monte_carlo(const RunConfig& cfg) {
    validate_config(cfg);
    return collect_runs(cfg, [&cfg](int k) {
        auto res = run_single(cfg, k);
        return std::make_pair(res.final_fullness, std::move(res.series));
    });
}

std::vector<double> RecurrenceResult::v_over_n() const {
    std::vector<double> out(v);
    for (double& x : out) x /= static_cast<double>(n);
    return out;
}

RecurrenceResult run_expected_recurrence(const SplitParams& params, std::int64_t steps,
                                         const RecurrenceOptions& options) {
    if (steps < 1) throw ParameterError("recurrence needs at least one step");
    const int d = params.require_half();
    if (params.batch_size() > d - 1) throw ParameterError("recurrence needs r <= (B-1)/2");
    const auto full = build_matrix(params);
    const auto a = options.support_only ? restrict(full, support_set(params)) : full;

    struct Entry {
        std::size_t row, col;
        double value;
    };
    std::vector<Entry> nz;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            if (a.at(i, j) != 0) nz.push_back({i, j, static_cast<double>(a.at(i, j))});
        }
    }

    RecurrenceResult res;
    res.sizes = a.sizes;
    res.n0 = d;
    res.n = d;
    res.v.assign(a.dim(), 0.0);
    res.v[a.index_of(d)] = 1.0;
    const double b = params.block_size();
    const int r = params.batch_size();
    const auto record = [&] {
        const double blocks = std::accumulate(res.v.begin(), res.v.end(), 0.0);
        res.fullness = static_cast<double>(res.n) / (b * blocks);
        return RecurrencePoint{res.n, res.fullness, res.v_over_n()};
    };

    std::vector<double> av(a.dim());
    for (std::int64_t step = 1; step <= steps; ++step) {
        std::fill(av.begin(), av.end(), 0.0);
        for (const auto& e : nz) av[e.row] += e.value * res.v[e.col];
        const double inv_n = 1.0 / static_cast<double>(res.n);
        double mass = 0.0;
        for (std::size_t i = 0; i < res.v.size(); ++i) {
            res.v[i] += av[i] * inv_n;
            res.min_entry = std::min(res.min_entry, res.v[i]);
            mass += res.v[i] * res.sizes[i];
        }
        res.n += r;
        res.worst_mass_defect = std::max(
            res.worst_mass_defect, std::abs(mass - static_cast<double>(res.n)) / static_cast<double>(res.n));
        if (options.record_stride > 0 && step % options.record_stride == 0) {
            res.trajectory.push_back(record());
        }
    }
    record();
    return res;
}

// ---------------------------------------------------------------------------
// Key-level oracle

KeyLevelSimulator::KeyLevelSimulator(StrategyKind strategy, const SplitParams& params,
                                     Continuation continuation, Uneven2Mode mode,
                                     std::int64_t capacity_hint)
    : strategy_(resolve_strategy(strategy, params)),
      params_(params),
      continuation_(continuation),
      mode_(mode) {
    validate_strategy(strategy_, params_, mode_);
    if (strategy_ == StrategyKind::uneven_regime2 && 2 * params.batch_size() <= params.block_size()) {
        throw ParameterError(
            "key-level uneven regime II needs r > B/2 so that splitting a size-r block overflows");
    }
    tree_.assign(static_cast<std::size_t>(std::max<std::int64_t>(capacity_hint, 16)) + 1, 0);
}

void KeyLevelSimulator::fenwick_add(std::size_t slot, std::int64_t delta) {
    for (std::size_t i = slot + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
}

void KeyLevelSimulator::sync(std::size_t slot) {
    const auto now = static_cast<std::int64_t>(blocks_[slot].size());
    fenwick_add(slot, now - tracked_[slot]);
    tracked_[slot] = now;
}

std::size_t KeyLevelSimulator::append_block(std::vector<std::uint64_t> keys) {
    if (blocks_.size() + 1 >= tree_.size()) {
        tree_.assign(tree_.size() * 2, 0);
        for (std::size_t s = 0; s < tracked_.size(); ++s) fenwick_add(s, tracked_[s]);
    }
    const std::size_t slot = blocks_.size();
    total_keys_ += static_cast<std::int64_t>(keys.size());
    blocks_.push_back(std::move(keys));
    tracked_.push_back(0);
    sync(slot);
    return slot;
}

void KeyLevelSimulator::seed_block(int size) {
    if (size < 1 || size > params_.block_size()) throw ParameterError("seed block size out of range");
    std::vector<std::uint64_t> keys;
    for (int i = 0; i < size; ++i) keys.push_back(fresh());
    append_block(std::move(keys));
}

std::pair<std::size_t, std::int64_t> KeyLevelSimulator::locate(std::int64_t rank) const {
    std::size_t pos = 0;
    std::int64_t remaining = rank;
    for (std::size_t step = std::bit_floor(tree_.size() - 1); step > 0; step >>= 1) {
        const std::size_t next = pos + step;
        if (next < tree_.size() && tree_[next] < remaining) {
            pos = next;
            remaining -= tree_[next];
        }
    }
    return {pos, remaining};
}

int KeyLevelSimulator::step(Rng& rng) {
    if (total_keys_ < 1) throw StateError("key-level simulator has no keys");
    const auto rank = static_cast<std::int64_t>(rng.uniform_1_to(static_cast<std::uint64_t>(total_keys_)));
    const auto [slot, offset] = locate(rank);
    const int hit = static_cast<int>(blocks_[slot].size());
    insert_batch(slot, static_cast<int>(offset));
    return hit;
}

std::vector<int> KeyLevelSimulator::insert_batch(std::size_t slot, int position) {
    if (slot >= blocks_.size()) throw ParameterError("no such block");
    const auto before = static_cast<std::int64_t>(blocks_[slot].size());
    if (position < 0 || position > before) throw ParameterError("gap position outside block");
    std::vector<std::size_t> touched{slot};
    switch (strategy_) {
        case StrategyKind::even: even_batch(slot, position, touched); break;
        case StrategyKind::deferred_even: deferred_batch(slot, position, touched); break;
        default: uneven_batch(slot, position, touched); break;
    }
    sync(slot);
    total_keys_ = total_keys_ - before + static_cast<std::int64_t>(blocks_[slot].size());
    std::vector<int> sizes;
    for (std::size_t s : touched) sizes.push_back(static_cast<int>(blocks_[s].size()));
    return sizes;
}

void KeyLevelSimulator::even_batch(std::size_t slot, int position, std::vector<std::size_t>& touched) {
    const int b = params_.block_size();
    const int low = (b + 1) / 2;
    const int high = b + 1 - low;
    std::vector<std::uint64_t> cur = std::move(blocks_[slot]);
    std::size_t pos = static_cast<std::size_t>(position);
    std::vector<std::vector<std::uint64_t>> emitted;
    for (int i = 0; i < params_.batch_size(); ++i) {
        cur.insert(cur.begin() + static_cast<std::ptrdiff_t>(pos), fresh());
        ++pos;
        if (static_cast<int>(cur.size()) < b + 1) continue;
        // The half that keeps receiving keys is `keep`; the other is emitted.
        std::size_t cut = static_cast<std::size_t>(low);
        if (continuation_ == Continuation::paper_rule && pos <= static_cast<std::size_t>(high)) {
            cut = static_cast<std::size_t>(high);
        }
        std::vector<std::uint64_t> left(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(cut));
        std::vector<std::uint64_t> right(cur.begin() + static_cast<std::ptrdiff_t>(cut), cur.end());
        if (pos <= cut) {
            emitted.push_back(std::move(right));
            cur = std::move(left);
        } else {
            emitted.push_back(std::move(left));
            cur = std::move(right);
            pos -= cut;
        }
    }
    blocks_[slot] = std::move(cur);
    for (auto& e : emitted) touched.push_back(append_block(std::move(e)));
}

void KeyLevelSimulator::deferred_batch(std::size_t slot, int position, std::vector<std::size_t>& touched) {
    std::vector<std::uint64_t> cur = std::move(blocks_[slot]);
    std::vector<std::uint64_t> batch;
    for (int i = 0; i < params_.batch_size(); ++i) batch.push_back(fresh());
    cur.insert(cur.begin() + position, batch.begin(), batch.end());
    const auto sizes = deferred_even_outcome(static_cast<int>(cur.size()) - params_.batch_size(), params_).sizes;
    std::size_t at = 0;
    std::vector<std::vector<std::uint64_t>> pieces;
    for (int s : sizes) {
        pieces.emplace_back(cur.begin() + static_cast<std::ptrdiff_t>(at),
                            cur.begin() + static_cast<std::ptrdiff_t>(at + static_cast<std::size_t>(s)));
        at += static_cast<std::size_t>(s);
    }
    blocks_[slot] = std::move(pieces.front());
    for (std::size_t i = 1; i < pieces.size(); ++i) touched.push_back(append_block(std::move(pieces[i])));
}

std::pair<int, int> KeyLevelSimulator::uneven_targets(int hit) const {
    const int r = params_.batch_size();
    if (strategy_ == StrategyKind::uneven_regime1) {
        if (hit == 2 * r) return {r, 2 * r};
    } else {
        const int half = r / 2;
        if (hit == r) return {half, 2 * r - half};
        if (hit == half + r || hit == 2 * r - half) return {r, hit};
    }
    throw InvariantError("key-level uneven split saw block size " + std::to_string(hit));
}

void KeyLevelSimulator::uneven_batch(std::size_t slot, int position, std::vector<std::size_t>& touched) {
    const int b = params_.block_size();
    const int r = params_.batch_size();
    const int hit = static_cast<int>(blocks_[slot].size());
    const auto allowed = uneven_sizes(strategy_, params_, mode_);
    if (std::find(allowed.begin(), allowed.end(), hit) == allowed.end()) {
        throw InvariantError("key-level uneven split saw block size " + std::to_string(hit));
    }
    std::vector<std::uint64_t> cur = std::move(blocks_[slot]);
    std::size_t pos = static_cast<std::size_t>(position);
    std::vector<std::uint64_t> batch;
    for (int i = 0; i < r; ++i) batch.push_back(fresh());
    if (hit + r <= b) {
        cur.insert(cur.begin() + static_cast<std::ptrdiff_t>(pos), batch.begin(), batch.end());
        blocks_[slot] = std::move(cur);
        return;
    }
    const auto [f_left, f_right] = uneven_targets(hit);
    const int fill = b - hit;
    cur.insert(cur.begin() + static_cast<std::ptrdiff_t>(pos), batch.begin(), batch.begin() + fill);
    pos += static_cast<std::size_t>(fill);
    const std::vector<std::uint64_t> rest(batch.begin() + fill, batch.end());
    auto split = target_split_at(cur, pos, rest, f_left, f_right);
    if (split.consumed + 1 != rest.size()) {
        throw InvariantError("TargetSplit left part of the batch unplaced");
    }
    blocks_[slot] = std::move(split.left);
    touched.push_back(append_block(std::move(split.right)));
}

double KeyLevelSimulator::fullness() const {
    if (blocks_.empty()) throw StateError("fullness of an empty key-level state");
    return static_cast<double>(total_keys_) /
           (static_cast<double>(params_.block_size()) * static_cast<double>(blocks_.size()));
}

BlockHistogram KeyLevelSimulator::histogram() const {
    BlockHistogram hist(params_.block_size());
    for (const auto& blk : blocks_) hist.add(static_cast<int>(blk.size()));
    return hist;
}

FullnessSummary run_key_level(const RunConfig& cfg, Continuation continuation) {
    validate_config(cfg);
    if (cfg.total_insertions > KeyLevelSimulator::max_insertions) {
        throw ParameterError("key-level oracle is limited to 1e6 insertions");
    }
    const auto kind = resolve_strategy(cfg.strategy, cfg.params);
    return collect_runs(cfg, [&](int k) {
        KeyLevelSimulator sim(kind, cfg.params, continuation, cfg.uneven2_mode,
                              cfg.total_insertions + cfg.params.batch_size());
        const auto start = initial_histogram(cfg);
        for (const auto& [size, count] : start.nonzero()) {
            for (std::int64_t c = 0; c < count; ++c) sim.seed_block(size);
        }
        Rng rng = Rng::for_run(cfg.base_seed, static_cast<std::uint64_t>(k));
        std::vector<SeriesPoint> series;
        std::int64_t batches = 0;
        if (cfg.record_series) series.push_back({sim.total_keys(), sim.fullness()});
        while (sim.total_keys() < cfg.total_insertions) {
            sim.step(rng);
            ++batches;
            if (cfg.record_series && batches % cfg.series_stride == 0) {
                series.push_back({sim.total_keys(), sim.fullness()});
            }
        }
        return std::make_pair(sim.fullness(), std::move(series));
    });
}

}  // namespace blocksplit
