#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "climb/copula.hpp"
#include "climb/model.hpp"

namespace climb {
namespace mc {

struct SimulationConfig {
    int n = 8;
    model::RoundKind kind = model::RoundKind::Final;
    copula::CorrelationSpec spec;
    int replications = 10000;
    std::uint64_t master_seed = 1;
    model::AggregationMethod method = model::AggregationMethod::Product;

    static SimulationConfig qualification(double tau, int replications = 10000,
                                          std::uint64_t seed = 1);
    static SimulationConfig final_round(double tau, int replications = 10000,
                                        std::uint64_t seed = 1);
    static SimulationConfig custom(int n, double tau, int replications = 10000,
                                   std::uint64_t seed = 1);
};

struct Replicate {
    copula::RankField field;
    model::RoundResult round;
};

// Each replicate's randomness is derived from (master_seed, replicate index),
// so results are identical for any thread count or execution order.
std::vector<Replicate> run_simulation(const SimulationConfig& config, int threads = 1);

enum class WinCondition {
    WonSpeed,
    WonBoulder,
    WonLead,
    WonBoulderOrLead,
    WonAnyDiscipline,
};

const char* condition_name(WinCondition c);

// Climber indices ranked first in the condition's discipline(s); a climber
// winning several qualifying disciplines is listed once.
std::vector<int> condition_holders(const Replicate& replicate, WinCondition condition);

struct WinProbability {
    WinCondition condition;
    double probability = 0.0;
    double standard_error = 0.0;
    long long observations = 0;
};

// Each replicate contributes the mean win indicator over its qualifying
// climbers (a tied first place counts 1/(number tied)), so conditions
// covering one or several disciplines stay comparable.
WinProbability conditional_win_probability(std::span<const Replicate> replicates,
                                           WinCondition condition);

struct ConditionalTable {
    WinCondition condition;
    int n = 0;
    std::vector<double> probability; // P(placement == k), k = 1..n
    std::vector<double> cumulative;  // P(placement <= k)
    long long observations = 0;
};

// Distribution of final placements over (replicate, qualifying climber)
// observations; a climber satisfying the condition counts once.
ConditionalTable conditional_rank_distribution(
    std::span<const Replicate> replicates,
    WinCondition condition = WinCondition::WonAnyDiscipline);

struct ScoreByPlacement {
    int placement = 0;
    double mean_score = 0.0;
    double lower95 = 0.0; // normal-approximation interval on the mean
    double upper95 = 0.0;
    long long replicates = 0;
};

// Mean of the k-th lowest score per replicate, for every k.
std::vector<ScoreByPlacement> expected_score_by_placement(
    std::span<const Replicate> replicates);

} // namespace mc
} // namespace climb
