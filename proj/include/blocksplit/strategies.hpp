#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "blocksplit/core.hpp"
#include "blocksplit/errors.hpp"

namespace blocksplit {

enum class StrategyKind {
    even,
    deferred_even,
    uneven_regime1,
    uneven_regime2,
    recommended,
};

/// Regime II targets r/2 and 3r/2. Exact mode rejects odd r; relaxed mode
/// uses floor/ceil targets, which keeps every size within 1 of the ideal.
enum class Uneven2Mode { exact, relaxed };

std::string_view to_string(StrategyKind kind);
/// Accepts the names printed by to_string; throws ParameterError otherwise.
StrategyKind parse_strategy(std::string_view name);

/// Even split by single-key iteration: on reaching B+1 keys emit a block of
/// floor((B+1)/2) and keep inserting into the ceil((B+1)/2) half.
Outcome even_split_outcome(int k, const SplitParams& params);

/// ceil((l+r)/B) blocks whose sizes differ by at most one.
Outcome deferred_even_outcome(int l, const SplitParams& params);

/// Sizes stay in {r, 2r}. Requires B/3 < r <= B/2.
Outcome uneven1_outcome(int k, const SplitParams& params);

/// Sizes stay in {r/2, r, 3r/2}. Requires 2B/5 < r <= 2B/3.
Outcome uneven2_outcome(int k, const SplitParams& params, Uneven2Mode mode = Uneven2Mode::exact);

/// Table 1 dispatch on r/B.
StrategyKind recommended_strategy(const SplitParams& params);

/// Replaces `recommended` by the concrete strategy for these parameters.
StrategyKind resolve_strategy(StrategyKind kind, const SplitParams& params);

/// Throws ParameterError when (B, r) is outside the strategy's admissible range.
void validate_strategy(StrategyKind kind, const SplitParams& params,
                       Uneven2Mode mode = Uneven2Mode::exact);

/// Outcome of `kind` (already resolved) for a batch landing in a size-k block.
Outcome strategy_outcome(StrategyKind kind, int k, const SplitParams& params,
                         Uneven2Mode mode = Uneven2Mode::exact);

/// Block sizes a regime keeps at batch boundaries, ascending.
std::vector<int> uneven_sizes(StrategyKind kind, const SplitParams& params, Uneven2Mode mode);

template <typename Key>
struct TargetSplitResult {
    std::vector<Key> left;
    std::vector<Key> right;
    /// Number of keys taken from the remaining batch.
    std::size_t consumed = 0;
};

/// TargetSplit on a full block with the new key at position j (j existing
/// keys are smaller). `batch` starts with the new key, is ascending and lies
/// in the gap at j; exactly f_L + f_R - B of its keys are placed.
template <typename Key>
TargetSplitResult<Key> target_split_at(const std::vector<Key>& keys, std::size_t j,
                                       const std::vector<Key>& batch, int f_left, int f_right) {
    const auto block = static_cast<long>(keys.size());
    const long fl = f_left;
    const long fr = f_right;
    if (fl < 1 || fr < 1 || fl > block || fr > block) {
        throw ContractError("TargetSplit targets must lie in [1, B]");
    }
    if (fl + fr <= block) throw ContractError("TargetSplit needs f_L + f_R > B");
    if (static_cast<long>(j) > block) throw ContractError("TargetSplit position beyond block");
    const long take = fl + fr - block;
    if (static_cast<long>(batch.size()) < take) {
        throw ContractError("TargetSplit needs " + std::to_string(take - 1) +
                            " remaining batch keys, got " +
                            std::to_string(static_cast<long>(batch.size()) - 1));
    }

    const auto jj = static_cast<long>(j);
    const auto kb = keys.begin();
    const auto bb = batch.begin();
    TargetSplitResult<Key> res;
    res.consumed = static_cast<std::size_t>(take - 1);
    if (jj >= fl) {
        res.left.assign(kb, kb + fl);
        res.right.assign(kb + fl, kb + jj);
        res.right.insert(res.right.end(), bb, bb + take);
        res.right.insert(res.right.end(), kb + jj, keys.end());
    } else if (jj <= block - fr) {
        res.left.assign(kb, kb + jj);
        res.left.insert(res.left.end(), bb, bb + take);
        res.left.insert(res.left.end(), kb + jj, kb + (block - fr));
        res.right.assign(kb + (block - fr), keys.end());
    } else {
        const long to_left = fl - jj;
        res.left.assign(kb, kb + jj);
        res.left.insert(res.left.end(), bb, bb + to_left);
        res.right.assign(bb + to_left, bb + take);
        res.right.insert(res.right.end(), kb + jj, keys.end());
    }
    return res;
}

/// Comparator form: locates the new key among `keys` and runs TargetSplit
/// with `remaining` as the rest of the batch.
template <typename Key>
std::pair<std::vector<Key>, std::vector<Key>> target_split(const std::vector<Key>& keys,
                                                           const Key& new_key, int f_left,
                                                           int f_right,
                                                           const std::vector<Key>& remaining) {
    if (!std::is_sorted(keys.begin(), keys.end())) {
        throw ContractError("TargetSplit keys must be sorted");
    }
    const auto j = static_cast<std::size_t>(
        std::lower_bound(keys.begin(), keys.end(), new_key) - keys.begin());
    std::vector<Key> batch;
    batch.reserve(remaining.size() + 1);
    batch.push_back(new_key);
    batch.insert(batch.end(), remaining.begin(), remaining.end());
    auto res = target_split_at(keys, j, batch, f_left, f_right);
    return {std::move(res.left), std::move(res.right)};
}

}  // namespace blocksplit
