#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "climb/errors.hpp"

namespace climb {
namespace model {

// Serialization order is fixed: S, B, L.
enum class Discipline { Speed = 0, Boulder = 1, Lead = 2 };

const char* discipline_name(Discipline d);

struct SpeedPerformance {
    double time = 0.0; // seconds
    bool dnf = false;  // false start / fall, ranked last
};

struct BoulderPerformance {
    int tops = 0;
    int zones = 0;
    int top_attempts = 0;
    int zone_attempts = 0;
};

struct LeadPerformance {
    int highest_hold = 0;
    double time = 0.0; // seconds, tie-break only
};

using Performance = std::variant<SpeedPerformance, BoulderPerformance, LeadPerformance>;

void validate(const SpeedPerformance& p);
void validate(const BoulderPerformance& p);
void validate(const LeadPerformance& p);

struct Climber {
    std::string id;          // unique within a round
    std::string name;
    std::string nationality; // may be empty
};

// Per-discipline ranks of one climber, the inputs to the combined score.
struct RankTriple {
    int speed = 0;
    int boulder = 0;
    int lead = 0;

    int rank(Discipline d) const;
};

enum class AggregationMethod { Product, Sum, SumOfSquareRoots };

const char* method_name(AggregationMethod m);
AggregationMethod method_from_name(const std::string& name);

// Combined score; lower is better under every method.
double aggregate_score(const RankTriple& ranks, AggregationMethod method);

// Ranks within one discipline. Unresolved ties share the minimum rank
// and set has_unresolved_ties.
struct DisciplineRanking {
    std::vector<int> ranks;
    bool has_unresolved_ties = false;
};

// Comparator order:
//   Speed:   ascending time, DNF after all finishers
//   Boulder: tops desc, zones desc, top_attempts asc, zone_attempts asc
//   Lead:    highest_hold desc, time asc
DisciplineRanking rank_discipline(std::span<const Performance> performances, Discipline discipline);
DisciplineRanking rank_speed(std::span<const SpeedPerformance> performances);
DisciplineRanking rank_boulder(std::span<const BoulderPerformance> performances);
DisciplineRanking rank_lead(std::span<const LeadPerformance> performances);

struct Standings {
    std::vector<int> placement; // 1 = lowest score; ties share the minimum
    bool has_ties = false;
};

// Placement 1 goes to the lowest score. Product scores are integer-valued
// and compare exactly; throws DomainError on non-finite scores.
Standings overall_standings(std::span<const double> scores);

enum class RoundKind { Qualification, Final };

struct Entry {
    Climber climber;
    RankTriple ranks;
    std::optional<SpeedPerformance> speed_raw;
    std::optional<BoulderPerformance> boulder_raw;
    std::optional<LeadPerformance> lead_raw;
};

struct RoundResult {
    RoundKind round_kind = RoundKind::Qualification;
    int n = 0;
    AggregationMethod method = AggregationMethod::Product;
    std::vector<Entry> entries;
    std::vector<double> scores;
    std::vector<int> placements;
    bool has_score_ties = false;

    const Entry* find(const std::string& climber_id) const;
};

// Computes scores and placements from the entries' rank triples.
// Throws DataError if any discipline's ranks are not a permutation of 1..n.
RoundResult build_round(RoundKind kind, std::vector<Entry> entries, AggregationMethod method);

// Climbers with placement <= cut. Throws AmbiguousCutError when a score tie
// straddles the boundary (the set at or above the cut is not exactly `cut`).
std::vector<Climber> advance_cut(const RoundResult& round, int cut);

} // namespace model
} // namespace climb
