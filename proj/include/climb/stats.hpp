#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "climb/errors.hpp"

namespace climb {
namespace stats {

// Aligned (x, y) observations for rank correlation.
struct PairedRanks {
    std::vector<std::pair<double, double>> pairs;

    int n() const { return static_cast<int>(pairs.size()); }

    static PairedRanks of(std::span<const double> x, std::span<const double> y);
    static PairedRanks of_ranks(std::span<const int> x, std::span<const int> y);
};

// Kendall tau; tie-corrected (tau-b) when either margin has ties.
// Throws DomainError when a margin is constant (undefined correlation).
double kendall_tau(const PairedRanks& data);

struct KendallTestResult {
    double tau = 0.0;
    long long statistic_T = 0; // number of concordant pairs
    double p_value = 1.0;
    bool exact = false;
};

// Exact two-sided test for tie-free data with n < 50: the null distribution
// of T under uniformly random permutations via the inversion-count
// recurrence. Ties or large n fall back to the normal approximation with
// tie and continuity corrections (exact = false).
KendallTestResult kendall_exact_test(const PairedRanks& data);

// Number of permutations of n elements with k inversions, k = 0..n(n-1)/2.
// Values are exact integers as long as they stay below 2^53 (n <= 18);
// beyond that they are correctly-rounded doubles, ample for p-values.
std::vector<double> inversion_count_distribution(int n);

// Two-sided p for an observed concordant count T at sample size n (no ties).
double exact_two_sided_p(int n, long long statistic_T);

struct BootstrapInterval {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.95;
    int resamples = 0;
    std::uint64_t seed = 0;
};

// Percentile interval of tau over B resamples of the pairs drawn with
// replacement. Resamples with a constant margin are redrawn. Deterministic
// given the seed.
BootstrapInterval bootstrap_tau_ci(const PairedRanks& data, int B, double level,
                                   std::uint64_t seed);

} // namespace stats
} // namespace climb
