#include "climb/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace climb {
namespace mc {

SimulationConfig SimulationConfig::qualification(double tau, int replications,
                                                 std::uint64_t seed) {
    return {20, model::RoundKind::Qualification, {tau}, replications, seed,
            model::AggregationMethod::Product};
}

SimulationConfig SimulationConfig::final_round(double tau, int replications,
                                               std::uint64_t seed) {
    return {8, model::RoundKind::Final, {tau}, replications, seed,
            model::AggregationMethod::Product};
}

SimulationConfig SimulationConfig::custom(int n, double tau, int replications,
                                          std::uint64_t seed) {
    return {n, n > 8 ? model::RoundKind::Qualification : model::RoundKind::Final,
            {tau}, replications, seed, model::AggregationMethod::Product};
}

namespace {

Replicate make_replicate(const SimulationConfig& config, std::uint64_t index) {
    RandomStream stream = RandomStream::substream(config.master_seed, index);
    Replicate rep;
    rep.field = copula::sample_rank_field(config.n, config.spec, stream);

    std::vector<model::Entry> entries(static_cast<std::size_t>(config.n));
    for (int i = 0; i < config.n; ++i) {
        auto& e = entries[static_cast<std::size_t>(i)];
        e.climber.id = std::to_string(i + 1);
        e.ranks = {rep.field.speed_ranks[static_cast<std::size_t>(i)],
                   rep.field.boulder_ranks[static_cast<std::size_t>(i)],
                   rep.field.lead_ranks[static_cast<std::size_t>(i)]};
    }
    rep.round = model::build_round(config.kind, std::move(entries), config.method);
    return rep;
}

} // namespace

std::vector<Replicate> run_simulation(const SimulationConfig& config, int threads) {
    if (config.replications < 1)
        throw DomainError("replication count must be positive");
    if (config.n < 2)
        throw DomainError("field size must be at least 2");
    if (threads < 1) threads = 1;

    std::vector<Replicate> replicates(static_cast<std::size_t>(config.replications));
    auto worker = [&](int begin, int end) {
        for (int r = begin; r < end; ++r)
            replicates[static_cast<std::size_t>(r)] =
                make_replicate(config, static_cast<std::uint64_t>(r));
    };

    if (threads == 1) {
        worker(0, config.replications);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (config.replications + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int begin = t * chunk;
            const int end = std::min(config.replications, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return replicates;
}

const char* condition_name(WinCondition c) {
    switch (c) {
        case WinCondition::WonSpeed: return "won_speed";
        case WinCondition::WonBoulder: return "won_boulder";
        case WinCondition::WonLead: return "won_lead";
        case WinCondition::WonBoulderOrLead: return "won_boulder_or_lead";
        case WinCondition::WonAnyDiscipline: return "won_any_discipline";
    }
    return "?";
}

std::vector<int> condition_holders(const Replicate& rep, WinCondition condition) {
    const bool speed = condition == WinCondition::WonSpeed ||
                       condition == WinCondition::WonAnyDiscipline;
    const bool boulder = condition == WinCondition::WonBoulder ||
                         condition == WinCondition::WonBoulderOrLead ||
                         condition == WinCondition::WonAnyDiscipline;
    const bool lead = condition == WinCondition::WonLead ||
                      condition == WinCondition::WonBoulderOrLead ||
                      condition == WinCondition::WonAnyDiscipline;
    std::vector<int> holders;
    for (int i = 0; i < rep.field.n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if ((speed && rep.field.speed_ranks[idx] == 1) ||
            (boulder && rep.field.boulder_ranks[idx] == 1) ||
            (lead && rep.field.lead_ranks[idx] == 1))
            holders.push_back(i);
    }
    return holders;
}

WinProbability conditional_win_probability(std::span<const Replicate> replicates,
                                           WinCondition condition) {
    if (replicates.empty())
        throw DomainError("no replicates");
    double sum = 0.0, sumsq = 0.0;
    for (const auto& rep : replicates) {
        const int tied_first =
            static_cast<int>(std::count(rep.round.placements.begin(),
                                        rep.round.placements.end(), 1));
        const auto holders = condition_holders(rep, condition);
        double w = 0.0;
        for (int i : holders)
            if (rep.round.placements[static_cast<std::size_t>(i)] == 1)
                w += 1.0 / tied_first;
        w /= static_cast<double>(holders.size());
        sum += w;
        sumsq += w * w;
    }
    const auto reps = static_cast<double>(replicates.size());
    WinProbability out;
    out.condition = condition;
    out.observations = static_cast<long long>(replicates.size());
    out.probability = sum / reps;
    const double var = replicates.size() > 1
        ? std::max(0.0, (sumsq - reps * out.probability * out.probability) / (reps - 1.0))
        : 0.0;
    out.standard_error = std::sqrt(var / reps);
    return out;
}

ConditionalTable conditional_rank_distribution(std::span<const Replicate> replicates,
                                               WinCondition condition) {
    if (replicates.empty())
        throw DomainError("no replicates");
    const int n = replicates.front().field.n;
    ConditionalTable table;
    table.condition = condition;
    table.n = n;
    table.probability.assign(static_cast<std::size_t>(n), 0.0);
    for (const auto& rep : replicates) {
        for (int i : condition_holders(rep, condition)) {
            const int k = rep.round.placements[static_cast<std::size_t>(i)];
            table.probability[static_cast<std::size_t>(k - 1)] += 1.0;
            ++table.observations;
        }
    }
    double cum = 0.0;
    table.cumulative.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        table.probability[static_cast<std::size_t>(k)] /=
            static_cast<double>(table.observations);
        cum += table.probability[static_cast<std::size_t>(k)];
        table.cumulative[static_cast<std::size_t>(k)] = cum;
    }
    return table;
}

std::vector<ScoreByPlacement> expected_score_by_placement(
    std::span<const Replicate> replicates) {
    if (replicates.empty())
        throw DomainError("no replicates");
    const int n = replicates.front().field.n;
    const auto reps = static_cast<double>(replicates.size());

    std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
    std::vector<double> sumsq(static_cast<std::size_t>(n), 0.0);
    std::vector<double> sorted;
    for (const auto& rep : replicates) {
        sorted = rep.round.scores;
        std::sort(sorted.begin(), sorted.end());
        for (int k = 0; k < n; ++k) {
            sum[static_cast<std::size_t>(k)] += sorted[static_cast<std::size_t>(k)];
            sumsq[static_cast<std::size_t>(k)] +=
                sorted[static_cast<std::size_t>(k)] * sorted[static_cast<std::size_t>(k)];
        }
    }

    std::vector<ScoreByPlacement> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        auto& row = out[static_cast<std::size_t>(k)];
        row.placement = k + 1;
        row.replicates = static_cast<long long>(replicates.size());
        row.mean_score = sum[static_cast<std::size_t>(k)] / reps;
        const double var = replicates.size() > 1
            ? std::max(0.0, (sumsq[static_cast<std::size_t>(k)] -
                             reps * row.mean_score * row.mean_score) / (reps - 1.0))
            : 0.0;
        const double half = 1.959963984540054 * std::sqrt(var / reps);
        row.lower95 = row.mean_score - half;
        row.upper95 = row.mean_score + half;
    }
    return out;
}

} // namespace mc
} // namespace climb
