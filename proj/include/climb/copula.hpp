#pragma once

#include <span>
#include <vector>

#include "climb/errors.hpp"
#include "climb/rng.hpp"

namespace climb {
namespace copula {

// Kendall tau between boulder and lead; speed is always independent.
struct CorrelationSpec {
    double tau = 0.0;
};

// One simulated field: per-discipline ranks aligned by climber index,
// each margin a permutation of 1..n.
struct RankField {
    int n = 0;
    std::vector<int> speed_ranks;
    std::vector<int> boulder_ranks;
    std::vector<int> lead_ranks;
};

// Gaussian-copula calibration: rho = sin(pi * tau / 2).
double tau_to_rho(double tau);

// 1-based ranks of a value vector; equal values keep input order.
std::vector<int> ranks_from_values(std::span<const double> values);

// Speed ranks are an independent uniform permutation. Boulder and lead come
// from n bivariate Gaussian-copula draws with parameter tau_to_rho(spec.tau),
// ranked within each margin. tau = 1 short-circuits to one shared
// permutation so perfect concordance is exact.
RankField sample_rank_field(int n, const CorrelationSpec& spec, RandomStream& stream);

} // namespace copula
} // namespace climb
