#include <doctest.h>

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "blocksplit/core.hpp"
#include "blocksplit/errors.hpp"
#include "blocksplit/rng.hpp"

using namespace blocksplit;

TEST_CASE("split params validation") {
    CHECK_NOTHROW(SplitParams(3, 1));
    CHECK_THROWS_AS(SplitParams(2, 1), ParameterError);
    CHECK_THROWS_AS(SplitParams(15, 0), ParameterError);
    CHECK_THROWS_AS(SplitParams(15, -3), ParameterError);

    const SplitParams odd(15, 4);
    REQUIRE(odd.half().has_value());
    CHECK(*odd.half() == 8);
    CHECK(odd.require_half() == 8);
    const SplitParams even(240, 4);
    CHECK_FALSE(even.half().has_value());
    CHECK_THROWS_AS(even.require_half(), ParameterError);
}

TEST_CASE("new histogram seeding") {
    const auto empty = new_histogram(SeedingMode::empty_with_dummy, SplitParams(240, 1));
    CHECK(empty.total_keys() == 1);
    CHECK(empty.block_count() == 1);
    CHECK(empty.count(1) == 1);

    const auto seeded = new_histogram(SeedingMode::paper_seed, SplitParams(15, 4));
    CHECK(seeded.total_keys() == 8);
    CHECK(seeded.count(8) == 1);

    const auto yao = new_histogram(SeedingMode::paper_seed, SplitParams(239, 1));
    CHECK(yao.total_keys() == 120);
    CHECK(yao.count(120) == 1);

    CHECK_THROWS_AS(new_histogram(SeedingMode::paper_seed, SplitParams(240, 1)), ParameterError);
}

TEST_CASE("sample_hit on a single block always returns it") {
    auto hist = BlockHistogram::from_counts(15, {{8, 1}});
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) CHECK(sample_hit(hist, rng) == 8);
}

TEST_CASE("sample_hit on an empty histogram") {
    BlockHistogram hist(15);
    Rng rng(1);
    CHECK_THROWS_AS(sample_hit(hist, rng), StateError);
}

TEST_CASE("sample_hit frequencies are size-proportional") {
    // {2:1, 3:2}: P(2) = 2/8, P(3) = 6/8. Chi-square with one degree of
    // freedom, critical value 10.83 at p = 0.001.
    auto hist = BlockHistogram::from_counts(15, {{2, 1}, {3, 2}});
    Rng rng(12345);
    const long draws = 1000000;
    long twos = 0;
    for (long i = 0; i < draws; ++i) {
        const int s = sample_hit(hist, rng);
        REQUIRE((s == 2 || s == 3));
        if (s == 2) ++twos;
    }
    const double e2 = draws * 0.25;
    const double e3 = draws * 0.75;
    const double o3 = static_cast<double>(draws - twos);
    const double chi2 = (twos - e2) * (twos - e2) / e2 + (o3 - e3) * (o3 - e3) / e3;
    CHECK(chi2 < 10.83);
}

TEST_CASE("sample_hit is deterministic for a seed") {
    auto hist = BlockHistogram::from_counts(31, {{5, 3}, {17, 2}, {31, 4}});
    Rng a(99);
    Rng b(99);
    for (int i = 0; i < 500; ++i) CHECK(sample_hit(hist, a) == sample_hit(hist, b));
}

TEST_CASE("uniform_1_to stays in range and covers it") {
    Rng rng(3);
    std::array<int, 7> seen{};
    for (int i = 0; i < 7000; ++i) {
        const auto x = rng.uniform_1_to(7);
        REQUIRE(x >= 1);
        REQUIRE(x <= 7);
        ++seen[x - 1];
    }
    for (int c : seen) CHECK(c > 800);
    CHECK(rng.uniform_1_to(1) == 1);
}

TEST_CASE("run seeds are base plus index") {
    auto a = Rng::for_run(10, 3);
    Rng b(13);
    for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("apply_outcome examples") {
    auto one = BlockHistogram::from_counts(15, {{8, 1}});
    apply_outcome(one, 8, Outcome{{12}}, 4);
    CHECK(one.count(8) == 0);
    CHECK(one.count(12) == 1);
    CHECK(one.total_keys() == 12);

    auto hist = BlockHistogram::from_counts(15, {{8, 2}, {12, 1}});
    CHECK(hist.total_keys() == 28);
    apply_outcome(hist, 12, Outcome{{8, 8}}, 4);
    CHECK(hist.count(8) == 4);
    CHECK(hist.count(12) == 0);
    CHECK(hist.total_keys() == 32);
    CHECK(hist.block_count() == 4);
    CHECK(hist.mass_consistent());
}

TEST_CASE("apply_outcome errors") {
    auto hist = BlockHistogram::from_counts(15, {{8, 1}});
    CHECK_THROWS_AS(apply_outcome(hist, 10, Outcome{{14}}, 4), StateError);
    CHECK_THROWS_AS(apply_outcome(hist, 8, Outcome{{13}}, 4), ContractError);
    CHECK_THROWS_AS(apply_outcome(hist, 8, Outcome{{6, 7}}, 4), ContractError);
    // A failed call leaves the state untouched.
    CHECK(hist.count(8) == 1);
    CHECK(hist.total_keys() == 8);
}

TEST_CASE("remove of a missing size") {
    BlockHistogram hist(15);
    hist.add(4);
    CHECK_THROWS_AS(hist.remove(5), StateError);
    hist.remove(4);
    CHECK(hist.empty());
}

TEST_CASE("fullness examples") {
    CHECK(fullness(BlockHistogram::from_counts(240, {{120, 1}}), 240) == doctest::Approx(0.5));
    CHECK(fullness(BlockHistogram::from_counts(15, {{8, 1}, {12, 1}}), 15) ==
          doctest::Approx(20.0 / 30.0));
    CHECK(fullness(BlockHistogram::from_counts(240, {{150, 2}}), 240) == doctest::Approx(0.625));
}

TEST_CASE("size_at_rank agrees with a linear scan") {
    Rng rng(2024);
    const int cap = 97;
    BlockHistogram hist(cap);
    std::map<int, std::int64_t> mirror;
    for (int step = 0; step < 400; ++step) {
        const int s = static_cast<int>(rng.uniform_1_to(cap));
        if (mirror[s] > 0 && rng.uniform_1_to(3) == 1) {
            hist.remove(s);
            --mirror[s];
        } else {
            const auto n = static_cast<std::int64_t>(rng.uniform_1_to(4));
            hist.add(s, n);
            mirror[s] += n;
        }
        std::int64_t total = 0;
        for (const auto& [size, c] : mirror) total += size * c;
        REQUIRE(hist.total_keys() == total);
        REQUIRE(hist.mass_consistent());
        if (total == 0) continue;
        for (int probe = 0; probe < 20; ++probe) {
            const auto rank = static_cast<std::int64_t>(rng.uniform_1_to(total));
            std::int64_t cum = 0;
            int expect = 0;
            for (const auto& [size, c] : mirror) {
                cum += size * c;
                if (cum >= rank) {
                    expect = size;
                    break;
                }
            }
            REQUIRE(hist.size_at_rank(rank) == expect);
        }
    }
    CHECK_THROWS_AS(hist.size_at_rank(0), ContractError);
    CHECK_THROWS_AS(hist.size_at_rank(hist.total_keys() + 1), ContractError);
}

TEST_CASE("nonzero lists ascending sizes") {
    auto hist = BlockHistogram::from_counts(31, {{20, 1}, {3, 2}, {31, 5}});
    const auto nz = hist.nonzero();
    REQUIRE(nz.size() == 3);
    CHECK(nz[0] == std::pair<int, std::int64_t>{3, 2});
    CHECK(nz[1] == std::pair<int, std::int64_t>{20, 1});
    CHECK(nz[2] == std::pair<int, std::int64_t>{31, 5});
}

TEST_CASE("summarize") {
    FullnessSummary s;
    s.per_run_final_fullness = {0.6, 0.7, 0.8};
    summarize(s);
    CHECK(s.mean_fullness == doctest::Approx(0.7));
    CHECK(s.min_fullness == doctest::Approx(0.6));
    CHECK(s.max_fullness == doctest::Approx(0.8));
}
