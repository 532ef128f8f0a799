#include "blocksplit/strategies.hpp"

#include <string>

namespace blocksplit {

namespace {

void check_hit(int k, const SplitParams& params, int lowest) {
    if (k < lowest || k > params.block_size()) {
        throw ParameterError("hit size " + std::to_string(k) + " outside [" +
                             std::to_string(lowest) + ", " + std::to_string(params.block_size()) +
                             "]");
    }
}

bool regime1_admissible(const SplitParams& p) {
    const int b = p.block_size();
    const int r = p.batch_size();
    return 3 * r > b && 2 * r <= b;
}

bool regime2_admissible(const SplitParams& p) {
    const int b = p.block_size();
    const int r = p.batch_size();
    return 5 * r > 2 * b && 3 * r <= 2 * b;
}

[[noreturn]] void invariant_breach(std::string_view regime, int k, const SplitParams& p) {
    throw InvariantError(std::string(regime) + " saw block size " + std::to_string(k) +
                         " (r=" + std::to_string(p.batch_size()) +
                         ", B=" + std::to_string(p.block_size()) + ")");
}

}  // namespace

std::string_view to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::even: return "even";
        case StrategyKind::deferred_even: return "deferred_even";
        case StrategyKind::uneven_regime1: return "uneven_regime1";
        case StrategyKind::uneven_regime2: return "uneven_regime2";
        case StrategyKind::recommended: return "recommended";
    }
    return "unknown";
}

StrategyKind parse_strategy(std::string_view name) {
    for (auto kind : {StrategyKind::even, StrategyKind::deferred_even, StrategyKind::uneven_regime1,
                      StrategyKind::uneven_regime2, StrategyKind::recommended}) {
        if (to_string(kind) == name) return kind;
    }
    if (name == "deferred") return StrategyKind::deferred_even;
    if (name == "uneven1") return StrategyKind::uneven_regime1;
    if (name == "uneven2") return StrategyKind::uneven_regime2;
    throw ParameterError("unknown strategy '" + std::string(name) + "'");
}

Outcome even_split_outcome(int k, const SplitParams& params) {
    check_hit(k, params, 1);
    const int b = params.block_size();
    const int low = (b + 1) / 2;
    const int high = b + 1 - low;
    Outcome out;
    int s = k;
    int left = params.batch_size();
    // Each pass jumps straight to the next overflow instead of adding keys one at a time.
    while (s + left > b) {
        left -= b + 1 - s;
        out.sizes.push_back(low);
        s = high;
    }
    out.sizes.push_back(s + left);
    return out;
}

Outcome deferred_even_outcome(int l, const SplitParams& params) {
    check_hit(l, params, 0);
    const long t = static_cast<long>(l) + params.batch_size();
    const long b = params.block_size();
    const long m = (t + b - 1) / b;
    const long big = t % m;
    Outcome out;
    out.sizes.reserve(static_cast<std::size_t>(m));
    for (long i = 0; i < m; ++i) {
        out.sizes.push_back(static_cast<int>(i < big ? t / m + 1 : t / m));
    }
    return out;
}

Outcome uneven1_outcome(int k, const SplitParams& params) {
    if (!regime1_admissible(params)) {
        throw ParameterError("uneven regime I needs B/3 < r <= B/2");
    }
    const int r = params.batch_size();
    if (k == r) return Outcome{{2 * r}};
    if (k == 2 * r) return Outcome{{r, 2 * r}};
    invariant_breach("uneven regime I", k, params);
}

Outcome uneven2_outcome(int k, const SplitParams& params, Uneven2Mode mode) {
    validate_strategy(StrategyKind::uneven_regime2, params, mode);
    const int r = params.batch_size();
    const int half = r / 2;
    const int big_low = half + r;             // floor(3r/2)
    const int big_high = 2 * r - half;        // ceil(3r/2)
    if (k == half) return Outcome{{big_low}};
    if (k == r) return Outcome{{half, big_high}};
    if (k == big_low || k == big_high) return Outcome{{r, k}};
    invariant_breach("uneven regime II", k, params);
}

StrategyKind recommended_strategy(const SplitParams& params) {
    const long b = params.block_size();
    const long r = params.batch_size();
    if (18 * r <= 7 * b) return StrategyKind::even;
    if (2 * r <= b) return StrategyKind::uneven_regime1;
    if (3 * r <= 2 * b) return StrategyKind::uneven_regime2;
    return StrategyKind::deferred_even;
}

StrategyKind resolve_strategy(StrategyKind kind, const SplitParams& params) {
    return kind == StrategyKind::recommended ? recommended_strategy(params) : kind;
}

void validate_strategy(StrategyKind kind, const SplitParams& params, Uneven2Mode mode) {
    switch (resolve_strategy(kind, params)) {
        case StrategyKind::even:
        case StrategyKind::deferred_even:
        case StrategyKind::recommended:
            return;
        case StrategyKind::uneven_regime1:
            if (!regime1_admissible(params)) {
                throw ParameterError("uneven regime I needs B/3 < r <= B/2 (B=" +
                                     std::to_string(params.block_size()) +
                                     ", r=" + std::to_string(params.batch_size()) + ")");
            }
            return;
        case StrategyKind::uneven_regime2:
            if (!regime2_admissible(params)) {
                throw ParameterError("uneven regime II needs 2B/5 < r <= 2B/3 (B=" +
                                     std::to_string(params.block_size()) +
                                     ", r=" + std::to_string(params.batch_size()) + ")");
            }
            if (mode == Uneven2Mode::exact && params.batch_size() % 2 != 0) {
                throw ParameterError("uneven regime II exact mode needs even r, got r=" +
                                     std::to_string(params.batch_size()) +
                                     "; use the relaxed mode for odd r");
            }
            return;
    }
}

Outcome strategy_outcome(StrategyKind kind, int k, const SplitParams& params, Uneven2Mode mode) {
    switch (resolve_strategy(kind, params)) {
        case StrategyKind::even: return even_split_outcome(k, params);
        case StrategyKind::deferred_even: return deferred_even_outcome(k, params);
        case StrategyKind::uneven_regime1: return uneven1_outcome(k, params);
        case StrategyKind::uneven_regime2: return uneven2_outcome(k, params, mode);
        case StrategyKind::recommended: break;
    }
    throw ParameterError("unresolved strategy");
}

std::vector<int> uneven_sizes(StrategyKind kind, const SplitParams& params, Uneven2Mode mode) {
    const int r = params.batch_size();
    switch (resolve_strategy(kind, params)) {
        case StrategyKind::uneven_regime1:
            return {r, 2 * r};
        case StrategyKind::uneven_regime2: {
            const int half = r / 2;
            if (mode == Uneven2Mode::exact || r % 2 == 0) return {half, r, half + r};
            return {half, r, half + r, 2 * r - half};
        }
        default:
            throw ParameterError("only uneven regimes have a fixed size set");
    }
}

}  // namespace blocksplit
