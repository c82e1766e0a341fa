#pragma once

#include <string>
#include <utility>
#include <vector>

#include "climb/model.hpp"

namespace climb {
namespace audit {

struct RankChange {
    std::string climber_id;
    int old_placement = 0; // original placement compressed to the survivors
    int new_placement = 0;
};

struct ExclusionResult {
    std::string excluded_id;
    int excluded_placement = 0; // original overall placement of the removed climber
    model::RoundResult new_round;
    std::vector<RankChange> rank_changes;
    double agreement_tau = 1.0;
    bool perfect_agreement = false;
    // survivor pairs whose strict order reversed (first climber originally ahead)
    std::vector<std::pair<std::string, std::string>> swapped_pairs;
};

// Removes one climber, compresses each discipline's survivor ranks to
// 1..n-1 preserving order, recomputes scores and standings with the round's
// aggregation method. Throws DataError if the id is unknown.
ExclusionResult remove_and_rescore(const model::RoundResult& round,
                                   const std::string& excluded_id);

struct IIAReport {
    std::vector<ExclusionResult> exclusions; // ordered by excluded placement
    int perfect_count = 0;                   // exclusions with agreement tau == 1
    std::vector<int> violation_placements;   // exclusions with a strict order swap
};

IIAReport iia_audit(const model::RoundResult& round);

} // namespace audit
} // namespace climb
