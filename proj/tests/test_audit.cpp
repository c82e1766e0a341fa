#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "climb/audit.hpp"

using namespace climb;
using namespace climb::audit;
using model::AggregationMethod;
using model::Entry;
using model::RoundKind;
using model::RoundResult;

namespace {

std::vector<Entry> entries_from(const std::vector<int>& s, const std::vector<int>& b,
                                const std::vector<int>& l) {
    std::vector<Entry> e(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        e[i].climber.id = "c" + std::to_string(i);
        e[i].ranks = {s[i], b[i], l[i]};
    }
    return e;
}

std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 1);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// independent re-computation: rebuild survivor rank triples from scratch by
// re-ranking the original ranks, then aggregate and sort
struct OracleExclusion {
    std::vector<double> scores;   // by survivor order (original index order)
    std::vector<int> placements;
};

OracleExclusion oracle_exclude(const std::vector<int>& s, const std::vector<int>& b,
                               const std::vector<int>& l, int excluded,
                               AggregationMethod method) {
    const int n = static_cast<int>(s.size());
    auto compress = [&](const std::vector<int>& ranks) {
        std::vector<int> out;
        for (int i = 0; i < n; ++i) {
            if (i == excluded) continue;
            int r = 1;
            for (int j = 0; j < n; ++j)
                if (j != excluded && ranks[static_cast<std::size_t>(j)] <
                                         ranks[static_cast<std::size_t>(i)])
                    ++r;
            out.push_back(r);
        }
        return out;
    };
    const auto cs = compress(s), cb = compress(b), cl = compress(l);
    OracleExclusion out;
    for (std::size_t i = 0; i < cs.size(); ++i)
        out.scores.push_back(model::aggregate_score({cs[i], cb[i], cl[i]}, method));
    out.placements.resize(out.scores.size());
    for (std::size_t i = 0; i < out.scores.size(); ++i) {
        int below = 0;
        for (std::size_t j = 0; j < out.scores.size(); ++j)
            if (out.scores[j] < out.scores[i]) ++below;
        out.placements[i] = below + 1;
    }
    return out;
}

} // namespace

TEST_CASE("excluding the uniformly last climber changes nothing") {
    const auto round = model::build_round(
        RoundKind::Final, entries_from({1, 3, 2, 4}, {2, 1, 3, 4}, {1, 3, 2, 4}),
        AggregationMethod::Product);
    const auto ex = remove_and_rescore(round, "c3");
    CHECK(ex.excluded_placement == 4);
    CHECK(ex.agreement_tau == 1.0);
    CHECK(ex.perfect_agreement);
    CHECK(ex.swapped_pairs.empty());
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(ex.new_round.scores[i] == round.scores[i]);
        CHECK(ex.new_round.placements[i] == round.placements[i]);
        CHECK(ex.rank_changes[i].old_placement == ex.rank_changes[i].new_placement);
    }
}

TEST_CASE("identical discipline orders make every exclusion perfect") {
    const std::vector<int> order = {4, 1, 5, 2, 3};
    const auto round = model::build_round(RoundKind::Final,
                                          entries_from(order, order, order),
                                          AggregationMethod::Product);
    const auto report = iia_audit(round);
    CHECK(report.perfect_count == 5);
    CHECK(report.violation_placements.empty());
    for (const auto& ex : report.exclusions) CHECK(ex.agreement_tau == 1.0);
}

TEST_CASE("unknown climber id is rejected") {
    const auto round = model::build_round(
        RoundKind::Final, entries_from({1, 2, 3}, {2, 3, 1}, {2, 1, 3}),
        AggregationMethod::Product);
    CHECK_THROWS_AS(remove_and_rescore(round, "nobody"), DataError);
}

TEST_CASE("known reshuffle: dropping a lower-ranked climber lifts another") {
    // 4th-place climber overtakes 2nd and 3rd when 5th is removed
    const auto round = model::build_round(
        RoundKind::Final,
        entries_from({3, 2, 1, 4, 6, 5}, {3, 4, 5, 2, 1, 6}, {1, 3, 5, 4, 6, 2}),
        AggregationMethod::Product);
    REQUIRE(round.placements == std::vector<int>{1, 2, 3, 4, 5, 6});

    const auto ex = remove_and_rescore(round, "c4");
    CHECK(ex.excluded_placement == 5);
    const auto meul = std::find_if(ex.rank_changes.begin(), ex.rank_changes.end(),
                                   [](const RankChange& rc) { return rc.climber_id == "c3"; });
    REQUIRE(meul != ex.rank_changes.end());
    CHECK(meul->old_placement == 4);
    CHECK(meul->new_placement == 2);
    CHECK_FALSE(ex.perfect_agreement);
    CHECK(ex.agreement_tau < 1.0);
    // pair granularity: c1 and c2 were ahead of c3 and are now behind
    const std::vector<std::pair<std::string, std::string>> expected = {{"c1", "c3"},
                                                                       {"c2", "c3"}};
    CHECK(ex.swapped_pairs == expected);

    const auto report = iia_audit(round);
    CHECK(std::find(report.violation_placements.begin(), report.violation_placements.end(), 5) !=
          report.violation_placements.end());
}

TEST_CASE("every exclusion equals independent recomputation for n <= 4") {
    for (int n = 3; n <= 4; ++n) {
        const auto perms = all_permutations(n);
        for (const auto& s : perms)
            for (const auto& b : perms)
                for (const auto& l : perms) {
                    const auto round = model::build_round(RoundKind::Final,
                                                          entries_from(s, b, l),
                                                          AggregationMethod::Product);
                    for (int e = 0; e < n; ++e) {
                        const auto oracle = oracle_exclude(s, b, l, e,
                                                           AggregationMethod::Product);
                        const auto ex =
                            remove_and_rescore(round, "c" + std::to_string(e));
                        REQUIRE(ex.new_round.scores == oracle.scores);
                        REQUIRE(ex.new_round.placements == oracle.placements);
                    }
                }
    }
}

TEST_CASE("survivor ranks compress to a permutation preserving order") {
    std::mt19937 gen(41);
    std::vector<int> id(12);
    std::iota(id.begin(), id.end(), 1);
    for (int trial = 0; trial < 40; ++trial) {
        auto s = id, b = id, l = id;
        std::shuffle(s.begin(), s.end(), gen);
        std::shuffle(b.begin(), b.end(), gen);
        std::shuffle(l.begin(), l.end(), gen);
        const auto round = model::build_round(RoundKind::Qualification,
                                              entries_from(s, b, l),
                                              AggregationMethod::Product);
        const int excluded = static_cast<int>(gen() % 12);
        const auto ex = remove_and_rescore(round, "c" + std::to_string(excluded));

        std::vector<int> speed;
        for (const auto& entry : ex.new_round.entries) speed.push_back(entry.ranks.speed);
        auto sorted = speed;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> expected(11);
        std::iota(expected.begin(), expected.end(), 1);
        CHECK(sorted == expected);

        // original pairwise speed order preserved
        std::vector<int> original_speed;
        for (int i = 0; i < 12; ++i)
            if (i != excluded) original_speed.push_back(s[static_cast<std::size_t>(i)]);
        for (std::size_t i = 0; i < speed.size(); ++i)
            for (std::size_t j = i + 1; j < speed.size(); ++j)
                CHECK((original_speed[i] < original_speed[j]) == (speed[i] < speed[j]));

        // agreement tau is 1 exactly when no survivor pair reordered
        bool any_change = false;
        for (std::size_t i = 0; i < ex.rank_changes.size(); ++i)
            for (std::size_t j = i + 1; j < ex.rank_changes.size(); ++j) {
                const auto& a = ex.rank_changes[i];
                const auto& c = ex.rank_changes[j];
                if ((a.old_placement < c.old_placement) != (a.new_placement < c.new_placement))
                    any_change = true;
            }
        if (!round.has_score_ties && !ex.new_round.has_score_ties)
            CHECK((ex.agreement_tau == 1.0) == !any_change);
    }
}

TEST_CASE("under rank-sum, a uniformly dominated exclusion shifts scores equally") {
    const auto perms = all_permutations(4);
    for (const auto& s : perms)
        for (const auto& b : perms)
            for (const auto& l : perms) {
                const auto round = model::build_round(RoundKind::Final, entries_from(s, b, l),
                                                      AggregationMethod::Sum);
                for (int e = 0; e < 4; ++e) {
                    const auto ex = remove_and_rescore(round, "c" + std::to_string(e));
                    for (std::size_t i = 0; i < 3; ++i)
                        for (std::size_t j = i + 1; j < 3; ++j) {
                            // map new-round entries back to original indices
                            const int oi = ex.new_round.entries[i].climber.id[1] - '0';
                            const int oj = ex.new_round.entries[j].climber.id[1] - '0';
                            const auto& re = round.entries[static_cast<std::size_t>(e)].ranks;
                            const auto& ri = round.entries[static_cast<std::size_t>(oi)].ranks;
                            const auto& rj = round.entries[static_cast<std::size_t>(oj)].ranks;
                            const bool above_both =
                                re.speed < std::min(ri.speed, rj.speed) &&
                                re.boulder < std::min(ri.boulder, rj.boulder) &&
                                re.lead < std::min(ri.lead, rj.lead);
                            const bool below_both =
                                re.speed > std::max(ri.speed, rj.speed) &&
                                re.boulder > std::max(ri.boulder, rj.boulder) &&
                                re.lead > std::max(ri.lead, rj.lead);
                            if (above_both || below_both) {
                                const double old_diff =
                                    round.scores[static_cast<std::size_t>(oi)] -
                                    round.scores[static_cast<std::size_t>(oj)];
                                const double new_diff =
                                    ex.new_round.scores[i] - ex.new_round.scores[j];
                                CHECK(old_diff == new_diff);
                            }
                        }
                }
            }
}
