#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "climb/model.hpp"
#include "climb/pca.hpp"

namespace climb {
namespace io {

// A parsed competition file: the recomputed round plus the official columns
// carried through for cross-checking, aligned with round.entries.
struct CompetitionFile {
    model::RoundResult round;
    std::vector<std::optional<long long>> official_total;
    std::vector<std::optional<int>> official_place;
    bool has_raw_columns = false;
};

// Header-driven CSV reader. Required columns: id, name, nationality,
// speed_rank, boulder_rank, lead_rank. Optional raw performance columns:
// speed_time, boulder_tops, boulder_zones, boulder_top_attempts,
// boulder_zone_attempts, lead_hold, lead_time; optional official_total and
// official_place. Errors carry 1-based line numbers. A present
// official_total must equal the product of the three ranks.
CompetitionFile parse_competition_csv(const std::string& path,
                                      model::AggregationMethod method =
                                          model::AggregationMethod::Product);

CompetitionFile parse_competition_csv_text(const std::string& text,
                                           model::AggregationMethod method =
                                               model::AggregationMethod::Product);

void write_competition_csv(const CompetitionFile& file, std::ostream& out);

// Columns for the skills PCA: speed time, boulder tops, lead holds.
// Requires the raw performance columns.
pca::PerformanceMatrix to_performance_matrix(const CompetitionFile& file);

} // namespace io
} // namespace climb
