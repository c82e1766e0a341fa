#include "climb/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace climb {
namespace model {

const char* discipline_name(Discipline d) {
    switch (d) {
        case Discipline::Speed: return "speed";
        case Discipline::Boulder: return "boulder";
        case Discipline::Lead: return "lead";
    }
    return "?";
}

void validate(const SpeedPerformance& p) {
    if (!p.dnf && !(p.time > 0.0))
        throw DataError("speed time must be positive unless DNF");
}

void validate(const BoulderPerformance& p) {
    if (p.tops < 0 || p.zones < 0 || p.top_attempts < 0 || p.zone_attempts < 0)
        throw DataError("boulder counts must be non-negative");
    if (p.tops > p.zones)
        throw DataError("boulder tops cannot exceed zones");
    if (p.top_attempts < p.tops || p.zone_attempts < p.zones)
        throw DataError("boulder attempts cannot be fewer than successes");
}

void validate(const LeadPerformance& p) {
    if (p.highest_hold < 0)
        throw DataError("lead hold count must be non-negative");
    if (!(p.time > 0.0))
        throw DataError("lead time must be positive");
}

int RankTriple::rank(Discipline d) const {
    switch (d) {
        case Discipline::Speed: return speed;
        case Discipline::Boulder: return boulder;
        case Discipline::Lead: return lead;
    }
    return 0;
}

const char* method_name(AggregationMethod m) {
    switch (m) {
        case AggregationMethod::Product: return "product";
        case AggregationMethod::Sum: return "sum";
        case AggregationMethod::SumOfSquareRoots: return "sqrtsum";
    }
    return "?";
}

AggregationMethod method_from_name(const std::string& name) {
    if (name == "product") return AggregationMethod::Product;
    if (name == "sum") return AggregationMethod::Sum;
    if (name == "sqrtsum") return AggregationMethod::SumOfSquareRoots;
    throw DomainError("unknown aggregation method: " + name);
}

double aggregate_score(const RankTriple& ranks, AggregationMethod method) {
    if (ranks.speed < 1 || ranks.boulder < 1 || ranks.lead < 1)
        throw DomainError("ranks must be >= 1");
    switch (method) {
        case AggregationMethod::Product:
            // exact: kept in the integer range of double
            return static_cast<double>(static_cast<std::int64_t>(ranks.speed) *
                                       ranks.boulder * ranks.lead);
        case AggregationMethod::Sum:
            return static_cast<double>(ranks.speed + ranks.boulder + ranks.lead);
        case AggregationMethod::SumOfSquareRoots:
            return std::sqrt(static_cast<double>(ranks.speed)) +
                   std::sqrt(static_cast<double>(ranks.boulder)) +
                   std::sqrt(static_cast<double>(ranks.lead));
    }
    throw DomainError("unknown aggregation method");
}

namespace {

// Shared-minimum ranks from a strict-weak-order comparator. Equal elements
// (neither precedes the other) share the rank of the first of their group.
template <typename T, typename Less>
DisciplineRanking rank_by(std::span<const T> items, Less less) {
    const int n = static_cast<int>(items.size());
    if (n == 0)
        throw DomainError("cannot rank an empty field");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return less(items[a], items[b]); });

    DisciplineRanking out;
    out.ranks.assign(n, 0);
    int group_rank = 1;
    for (int i = 0; i < n; ++i) {
        if (i > 0) {
            const T& prev = items[order[i - 1]];
            const T& cur = items[order[i]];
            if (less(prev, cur))
                group_rank = i + 1;
            else
                out.has_unresolved_ties = true;
        }
        out.ranks[order[i]] = group_rank;
    }
    return out;
}

bool speed_less(const SpeedPerformance& a, const SpeedPerformance& b) {
    if (a.dnf != b.dnf) return !a.dnf; // finishers ahead of DNFs
    if (a.dnf) return false;           // DNFs tie among themselves
    return a.time < b.time;
}

bool boulder_less(const BoulderPerformance& a, const BoulderPerformance& b) {
    if (a.tops != b.tops) return a.tops > b.tops;
    if (a.zones != b.zones) return a.zones > b.zones;
    if (a.top_attempts != b.top_attempts) return a.top_attempts < b.top_attempts;
    return a.zone_attempts < b.zone_attempts;
}

bool lead_less(const LeadPerformance& a, const LeadPerformance& b) {
    if (a.highest_hold != b.highest_hold) return a.highest_hold > b.highest_hold;
    return a.time < b.time;
}

} // namespace

DisciplineRanking rank_speed(std::span<const SpeedPerformance> performances) {
    for (const auto& p : performances) validate(p);
    return rank_by(performances, speed_less);
}

DisciplineRanking rank_boulder(std::span<const BoulderPerformance> performances) {
    for (const auto& p : performances) validate(p);
    return rank_by(performances, boulder_less);
}

DisciplineRanking rank_lead(std::span<const LeadPerformance> performances) {
    for (const auto& p : performances) validate(p);
    return rank_by(performances, lead_less);
}

DisciplineRanking rank_discipline(std::span<const Performance> performances,
                                  Discipline discipline) {
    if (performances.empty())
        throw DomainError("cannot rank an empty field");
    const std::size_t expected = static_cast<std::size_t>(discipline);
    for (const auto& p : performances) {
        if (p.index() != expected)
            throw DataError(std::string("performance type does not match discipline ") +
                            discipline_name(discipline));
    }
    const std::size_t n = performances.size();
    switch (discipline) {
        case Discipline::Speed: {
            std::vector<SpeedPerformance> v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = std::get<SpeedPerformance>(performances[i]);
            return rank_speed(v);
        }
        case Discipline::Boulder: {
            std::vector<BoulderPerformance> v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = std::get<BoulderPerformance>(performances[i]);
            return rank_boulder(v);
        }
        case Discipline::Lead: {
            std::vector<LeadPerformance> v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = std::get<LeadPerformance>(performances[i]);
            return rank_lead(v);
        }
    }
    throw DomainError("unknown discipline");
}

Standings overall_standings(std::span<const double> scores) {
    const int n = static_cast<int>(scores.size());
    if (n == 0)
        throw DomainError("cannot rank an empty score list");
    for (double s : scores)
        if (!std::isfinite(s))
            throw DomainError("scores must be finite");

    // Placement = 1 + number of strictly lower scores; equal scores share it.
    // Product scores are exact integers in double, so == is exact there.
    Standings out;
    out.placement.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        int below = 0;
        for (int j = 0; j < n; ++j) {
            if (scores[j] < scores[i]) ++below;
            else if (j != i && scores[j] == scores[i]) out.has_ties = true;
        }
        out.placement[i] = below + 1;
    }
    return out;
}

const Entry* RoundResult::find(const std::string& climber_id) const {
    for (const auto& e : entries)
        if (e.climber.id == climber_id) return &e;
    return nullptr;
}

RoundResult build_round(RoundKind kind, std::vector<Entry> entries, AggregationMethod method) {
    RoundResult round;
    round.round_kind = kind;
    round.method = method;
    round.n = static_cast<int>(entries.size());
    round.entries = std::move(entries);
    if (round.n == 0)
        throw DataError("round has no entries");

    for (Discipline d : {Discipline::Speed, Discipline::Boulder, Discipline::Lead}) {
        std::vector<bool> seen(static_cast<std::size_t>(round.n) + 1, false);
        for (const auto& e : round.entries) {
            const int r = e.ranks.rank(d);
            if (r < 1 || r > round.n || seen[r])
                throw DataError(std::string(discipline_name(d)) +
                                " ranks are not a permutation of 1.." + std::to_string(round.n));
            seen[r] = true;
        }
    }

    round.scores.reserve(round.n);
    for (const auto& e : round.entries)
        round.scores.push_back(aggregate_score(e.ranks, method));
    Standings st = overall_standings(round.scores);
    round.placements = std::move(st.placement);
    round.has_score_ties = st.has_ties;
    return round;
}

std::vector<Climber> advance_cut(const RoundResult& round, int cut) {
    if (cut < 0 || cut > round.n)
        throw DomainError("cut must be between 0 and the field size");
    if (round.placements.empty())
        throw DomainError("round has no computed placements");

    std::vector<int> idx;
    for (int i = 0; i < round.n; ++i)
        if (round.placements[i] <= cut) idx.push_back(i);

    if (static_cast<int>(idx.size()) != cut) {
        // A shared placement straddles the boundary; refuse to pick.
        std::vector<std::string> tied;
        int boundary = 0;
        for (int i = 0; i < round.n; ++i)
            if (round.placements[i] <= cut) boundary = std::max(boundary, round.placements[i]);
        for (int i = 0; i < round.n; ++i)
            if (round.placements[i] == boundary) tied.push_back(round.entries[i].climber.id);
        std::ostringstream msg;
        msg << "tie straddles the cut at " << cut << " between:";
        for (const auto& id : tied) msg << ' ' << id;
        throw AmbiguousCutError(msg.str(), std::move(tied));
    }

    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return round.placements[a] < round.placements[b]; });
    std::vector<Climber> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(round.entries[i].climber);
    return out;
}

} // namespace model
} // namespace climb
