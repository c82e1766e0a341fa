#include "climb/audit.hpp"

#include <algorithm>

#include "climb/stats.hpp"

namespace climb {
namespace audit {

ExclusionResult remove_and_rescore(const model::RoundResult& round,
                                   const std::string& excluded_id) {
    int excluded = -1;
    for (int i = 0; i < round.n; ++i)
        if (round.entries[static_cast<std::size_t>(i)].climber.id == excluded_id) {
            excluded = i;
            break;
        }
    if (excluded < 0)
        throw DataError("no climber with id '" + excluded_id + "' in the round");
    if (round.n < 3)
        throw DomainError("cannot audit a field of fewer than three climbers");

    const model::RankTriple& gone =
        round.entries[static_cast<std::size_t>(excluded)].ranks;

    std::vector<model::Entry> survivors;
    std::vector<int> old_placements;
    survivors.reserve(static_cast<std::size_t>(round.n - 1));
    for (int i = 0; i < round.n; ++i) {
        if (i == excluded) continue;
        model::Entry e = round.entries[static_cast<std::size_t>(i)];
        // ranks are permutations, so compression is a shift past the removed rank
        e.ranks.speed -= e.ranks.speed > gone.speed ? 1 : 0;
        e.ranks.boulder -= e.ranks.boulder > gone.boulder ? 1 : 0;
        e.ranks.lead -= e.ranks.lead > gone.lead ? 1 : 0;
        survivors.push_back(std::move(e));
        old_placements.push_back(round.placements[static_cast<std::size_t>(i)]);
    }

    ExclusionResult result;
    result.excluded_id = excluded_id;
    result.excluded_placement = round.placements[static_cast<std::size_t>(excluded)];
    result.new_round = model::build_round(round.round_kind, std::move(survivors),
                                          round.method);

    const int m = result.new_round.n;
    std::vector<int> old_restricted(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        int below = 0;
        for (int j = 0; j < m; ++j)
            if (old_placements[static_cast<std::size_t>(j)] <
                old_placements[static_cast<std::size_t>(i)])
                ++below;
        old_restricted[static_cast<std::size_t>(i)] = below + 1;
    }

    result.rank_changes.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        result.rank_changes.push_back(
            {result.new_round.entries[static_cast<std::size_t>(i)].climber.id,
             old_restricted[static_cast<std::size_t>(i)],
             result.new_round.placements[static_cast<std::size_t>(i)]});

    result.perfect_agreement = true;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const int d_old = old_restricted[static_cast<std::size_t>(i)] -
                              old_restricted[static_cast<std::size_t>(j)];
            const int d_new = result.new_round.placements[static_cast<std::size_t>(i)] -
                              result.new_round.placements[static_cast<std::size_t>(j)];
            if ((d_old < 0) != (d_new < 0) || (d_old == 0) != (d_new == 0)) {
                result.perfect_agreement = false;
                if (d_old != 0 && d_new != 0) { // strict order reversed
                    const auto& a =
                        result.new_round.entries[static_cast<std::size_t>(i)].climber.id;
                    const auto& b =
                        result.new_round.entries[static_cast<std::size_t>(j)].climber.id;
                    if (d_old < 0)
                        result.swapped_pairs.emplace_back(a, b);
                    else
                        result.swapped_pairs.emplace_back(b, a);
                }
            }
        }
    }

    try {
        result.agreement_tau = stats::kendall_tau(stats::PairedRanks::of_ranks(
            old_restricted, result.new_round.placements));
    } catch (const DomainError&) {
        // a fully tied margin leaves tau undefined; fall back to the
        // pairwise verdict so the perfect-agreement contract still holds
        result.agreement_tau = result.perfect_agreement ? 1.0 : 0.0;
    }
    return result;
}

IIAReport iia_audit(const model::RoundResult& round) {
    std::vector<int> order(static_cast<std::size_t>(round.n));
    for (int i = 0; i < round.n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return round.placements[static_cast<std::size_t>(a)] <
               round.placements[static_cast<std::size_t>(b)];
    });

    IIAReport report;
    report.exclusions.reserve(static_cast<std::size_t>(round.n));
    for (int i : order) {
        report.exclusions.push_back(remove_and_rescore(
            round, round.entries[static_cast<std::size_t>(i)].climber.id));
        const ExclusionResult& ex = report.exclusions.back();
        if (ex.perfect_agreement) ++report.perfect_count;
        if (!ex.swapped_pairs.empty())
            report.violation_placements.push_back(ex.excluded_placement);
    }
    return report;
}

} // namespace audit
} // namespace climb
