#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "climb/stats.hpp"

using namespace climb;
using namespace climb::stats;

namespace {

PairedRanks sequence_pair(int n, bool reversed) {
    PairedRanks d;
    for (int i = 1; i <= n; ++i)
        d.pairs.emplace_back(i, reversed ? n + 1 - i : i);
    return d;
}

// distribution of the concordant-pair count by enumerating all n! permutations
std::vector<double> enumerated_null(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 1);
    const int total_pairs = n * (n - 1) / 2;
    std::vector<double> counts(static_cast<std::size_t>(total_pairs) + 1, 0.0);
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(j)]) ++inversions;
        counts[static_cast<std::size_t>(inversions)] += 1.0;
    } while (std::next_permutation(p.begin(), p.end()));
    return counts;
}

} // namespace

TEST_CASE("kendall tau on perfectly ordered data") {
    CHECK(kendall_tau(sequence_pair(20, false)) == 1.0);
    CHECK(kendall_tau(sequence_pair(20, true)) == -1.0);
}

TEST_CASE("tau is symmetric and odd under negation") {
    std::mt19937 gen(5);
    std::uniform_real_distribution<> dist(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        PairedRanks d, swapped, negated;
        for (int i = 0; i < 15; ++i) {
            const double x = dist(gen), y = dist(gen);
            d.pairs.emplace_back(x, y);
            swapped.pairs.emplace_back(y, x);
            negated.pairs.emplace_back(x, -x);
        }
        CHECK(kendall_tau(d) == kendall_tau(swapped));
        CHECK(kendall_tau(negated) == -1.0);
    }
}

TEST_CASE("tau is invariant under strictly increasing transforms") {
    std::mt19937 gen(13);
    std::uniform_real_distribution<> dist(0.1, 9.0);
    PairedRanks d;
    for (int i = 0; i < 25; ++i) d.pairs.emplace_back(dist(gen), dist(gen));
    const double base = kendall_tau(d);
    PairedRanks warped;
    for (const auto& [x, y] : d.pairs)
        warped.pairs.emplace_back(std::exp(x), y * y * y + 2.0 * y);
    CHECK(kendall_tau(warped) == base);
}

TEST_CASE("tie-corrected tau on a hand-worked case") {
    // x = (1,2,3), y = (1,1,2): C=2, D=0, one y-tied pair
    // tau-b = 2 / sqrt(3 * 2)
    PairedRanks d;
    d.pairs = {{1, 1}, {2, 1}, {3, 2}};
    CHECK(kendall_tau(d) == doctest::Approx(2.0 / std::sqrt(6.0)).epsilon(1e-14));
}

TEST_CASE("degenerate margins are rejected") {
    PairedRanks constant_x;
    constant_x.pairs = {{1, 1}, {1, 2}, {1, 3}};
    CHECK_THROWS_AS(kendall_tau(constant_x), DomainError);
    PairedRanks constant_y;
    constant_y.pairs = {{1, 4}, {2, 4}, {3, 4}};
    CHECK_THROWS_AS(kendall_tau(constant_y), DomainError);
    PairedRanks single;
    single.pairs = {{1, 1}};
    CHECK_THROWS_AS(kendall_tau(single), DomainError);
}

TEST_CASE("inversion-count distribution equals direct enumeration for n <= 6") {
    for (int n = 1; n <= 6; ++n) {
        const auto dp = inversion_count_distribution(n);
        if (n == 1) {
            CHECK(dp == std::vector<double>{1.0});
            continue;
        }
        const auto enumerated = enumerated_null(n);
        REQUIRE(dp.size() == enumerated.size());
        for (std::size_t k = 0; k < dp.size(); ++k) CHECK(dp[k] == enumerated[k]);
    }
}

TEST_CASE("null distribution is symmetric with total mass n!") {
    for (int n : {3, 5, 8, 12, 20}) {
        const auto counts = inversion_count_distribution(n);
        double total = 0, factorial = 1;
        for (double c : counts) total += c;
        for (int i = 2; i <= n; ++i) factorial *= i;
        CHECK(total == doctest::Approx(factorial).epsilon(1e-12));
        for (std::size_t k = 0; k < counts.size(); ++k)
            CHECK(counts[k] == counts[counts.size() - 1 - k]);
    }
}

TEST_CASE("exact two-sided p agrees with enumeration for small n") {
    for (int n : {3, 4, 5, 6}) {
        const auto counts = enumerated_null(n);
        const int total_pairs = n * (n - 1) / 2;
        double factorial = 1;
        for (int i = 2; i <= n; ++i) factorial *= i;
        for (long long T = 0; T <= total_pairs; ++T) {
            const long long dev = std::llabs(2 * T - total_pairs);
            double mass = 0;
            for (std::size_t k = 0; k < counts.size(); ++k) {
                const long long t = total_pairs - static_cast<long long>(k);
                if (std::llabs(2 * t - total_pairs) >= dev) mass += counts[k];
            }
            CHECK(exact_two_sided_p(n, T) == doctest::Approx(mass / factorial).epsilon(1e-14));
        }
    }
}

TEST_CASE("reference p-values at n = 20") {
    CHECK(std::fabs(exact_two_sided_p(20, 109) - 0.386) < 0.001);
    CHECK(std::fabs(exact_two_sided_p(20, 136) - 0.007) < 0.001);
    CHECK(std::fabs(exact_two_sided_p(20, 139) - 0.004) < 0.001);
}

TEST_CASE("exact test statistic is the concordant-pair count") {
    std::mt19937 gen(29);
    std::vector<int> y(12);
    std::iota(y.begin(), y.end(), 1);
    for (int trial = 0; trial < 30; ++trial) {
        std::shuffle(y.begin(), y.end(), gen);
        PairedRanks d;
        long long concordant = 0;
        for (int i = 0; i < 12; ++i) d.pairs.emplace_back(i + 1, y[static_cast<std::size_t>(i)]);
        for (int i = 0; i < 12; ++i)
            for (int j = i + 1; j < 12; ++j)
                if ((y[static_cast<std::size_t>(j)] > y[static_cast<std::size_t>(i)])) ++concordant;
        const auto result = kendall_exact_test(d);
        CHECK(result.exact);
        CHECK(result.statistic_T == concordant);
        CHECK(result.p_value == exact_two_sided_p(12, concordant));
        CHECK(result.p_value >= 0.0);
        CHECK(result.p_value <= 1.0);
    }
}

TEST_CASE("large samples use the normal approximation even without ties") {
    std::mt19937 gen(61);
    std::vector<int> y(60);
    std::iota(y.begin(), y.end(), 1);
    std::shuffle(y.begin(), y.end(), gen);
    PairedRanks d;
    for (int i = 0; i < 60; ++i) d.pairs.emplace_back(i + 1, y[static_cast<std::size_t>(i)]);
    const auto result = kendall_exact_test(d);
    CHECK_FALSE(result.exact);
    CHECK(result.p_value > 0.0);
    CHECK(result.p_value <= 1.0);

    // strong association at this size is far in the tail
    PairedRanks ordered = sequence_pair(60, false);
    const auto extreme = kendall_exact_test(ordered);
    CHECK_FALSE(extreme.exact);
    CHECK(extreme.p_value < 1e-10);
}

TEST_CASE("ties fall back to the corrected normal approximation") {
    PairedRanks d;
    d.pairs = {{1, 2}, {2, 2}, {3, 5}, {4, 4}, {5, 9}, {6, 9}, {7, 11}, {8, 10}};
    const auto result = kendall_exact_test(d);
    CHECK_FALSE(result.exact);
    CHECK(result.p_value > 0.0);
    CHECK(result.p_value <= 1.0);
    CHECK(result.tau == kendall_tau(d));
}

TEST_CASE("bootstrap interval: degenerate-free concordant data pins to (1,1)") {
    PairedRanks d = sequence_pair(10, false);
    const auto ci = bootstrap_tau_ci(d, 2000, 0.95, 99);
    CHECK(ci.lower == 1.0);
    CHECK(ci.upper == 1.0);
}

TEST_CASE("bootstrap interval is deterministic and within [-1, 1]") {
    std::mt19937 gen(31);
    std::uniform_real_distribution<> dist(0.0, 1.0);
    PairedRanks d;
    for (int i = 0; i < 20; ++i) d.pairs.emplace_back(dist(gen), dist(gen));
    const auto a = bootstrap_tau_ci(d, 3000, 0.95, 1234);
    const auto b = bootstrap_tau_ci(d, 3000, 0.95, 1234);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
    CHECK(a.lower >= -1.0);
    CHECK(a.upper <= 1.0);
    CHECK(a.lower <= a.upper);

    const auto c = bootstrap_tau_ci(d, 3000, 0.95, 4321);
    CHECK((c.lower != a.lower || c.upper != a.upper));
}

TEST_CASE("bootstrap redraws degenerate resamples") {
    // heavy duplication makes constant-margin resamples likely
    PairedRanks d;
    d.pairs = {{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}};
    const auto ci = bootstrap_tau_ci(d, 2000, 0.95, 7);
    CHECK(ci.lower >= -1.0);
    CHECK(ci.upper <= 1.0);
}

TEST_CASE("bootstrap input validation") {
    PairedRanks tiny;
    tiny.pairs = {{1, 2}, {2, 1}};
    CHECK_THROWS_AS(bootstrap_tau_ci(tiny, 1000, 0.95, 1), DomainError);
    PairedRanks ok = sequence_pair(5, false);
    CHECK_THROWS_AS(bootstrap_tau_ci(ok, 0, 0.95, 1), DomainError);
    CHECK_THROWS_AS(bootstrap_tau_ci(ok, 1000, 1.5, 1), DomainError);
}
