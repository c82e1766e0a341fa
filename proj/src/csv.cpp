#include "climb/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace climb {
namespace io {

namespace {

const std::vector<std::string> kRequired = {
    "id", "name", "nationality", "speed_rank", "boulder_rank", "lead_rank"};
const std::vector<std::string> kOptional = {
    "speed_time",        "boulder_tops",       "boulder_zones",
    "boulder_top_attempts", "boulder_zone_attempts", "lead_hold",
    "lead_time",         "official_total",     "official_place"};

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

long long parse_int(const std::string& s, int line_no, const std::string& column) {
    std::size_t consumed = 0;
    long long value = 0;
    try {
        value = std::stoll(s, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (consumed != s.size() || s.empty())
        throw DataError("line " + std::to_string(line_no) + ": column '" + column +
                        "' is not an integer: '" + s + "'");
    return value;
}

double parse_real(const std::string& s, int line_no, const std::string& column) {
    std::size_t consumed = 0;
    double value = 0;
    try {
        value = std::stod(s, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (consumed != s.size() || s.empty())
        throw DataError("line " + std::to_string(line_no) + ": column '" + column +
                        "' is not a number: '" + s + "'");
    return value;
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

CompetitionFile parse_competition_csv_text(const std::string& text,
                                           model::AggregationMethod method) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.empty())
        throw DataError("empty competition file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::map<std::string, int> column;
    {
        const auto headers = split_line(line);
        for (std::size_t i = 0; i < headers.size(); ++i) {
            const std::string& h = headers[i];
            const bool known =
                std::find(kRequired.begin(), kRequired.end(), h) != kRequired.end() ||
                std::find(kOptional.begin(), kOptional.end(), h) != kOptional.end();
            if (!known)
                throw DataError("unknown column '" + h + "' in header");
            if (column.count(h))
                throw DataError("duplicate column '" + h + "' in header");
            column[h] = static_cast<int>(i);
        }
        for (const auto& r : kRequired)
            if (!column.count(r))
                throw DataError("missing required column '" + r + "'");
    }
    const auto has = [&](const char* name) { return column.count(name) > 0; };
    const bool raw_speed = has("speed_time");
    const bool raw_boulder = has("boulder_tops") && has("boulder_zones") &&
                             has("boulder_top_attempts") && has("boulder_zone_attempts");
    const bool raw_lead = has("lead_hold") && has("lead_time");

    CompetitionFile file;
    std::vector<model::Entry> entries;
    std::map<std::string, int> seen_ids;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != column.size())
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(column.size()) + " fields, got " +
                            std::to_string(fields.size()));
        const auto cell = [&](const char* name) -> const std::string& {
            return fields[static_cast<std::size_t>(column.at(name))];
        };

        model::Entry e;
        e.climber.id = cell("id");
        e.climber.name = cell("name");
        e.climber.nationality = cell("nationality");
        if (e.climber.id.empty())
            throw DataError("line " + std::to_string(line_no) + ": empty id");
        if (seen_ids.count(e.climber.id))
            throw DataError("line " + std::to_string(line_no) + ": duplicate id '" +
                            e.climber.id + "' (first seen on line " +
                            std::to_string(seen_ids[e.climber.id]) + ")");
        seen_ids[e.climber.id] = line_no;

        e.ranks.speed = static_cast<int>(parse_int(cell("speed_rank"), line_no, "speed_rank"));
        e.ranks.boulder =
            static_cast<int>(parse_int(cell("boulder_rank"), line_no, "boulder_rank"));
        e.ranks.lead = static_cast<int>(parse_int(cell("lead_rank"), line_no, "lead_rank"));

        if (raw_speed) {
            model::SpeedPerformance sp;
            if (cell("speed_time") == "dnf") {
                sp.dnf = true;
                sp.time = 0.0;
            } else {
                sp.time = parse_real(cell("speed_time"), line_no, "speed_time");
            }
            validate(sp);
            e.speed_raw = sp;
        }
        if (raw_boulder) {
            model::BoulderPerformance bp;
            bp.tops = static_cast<int>(parse_int(cell("boulder_tops"), line_no, "boulder_tops"));
            bp.zones =
                static_cast<int>(parse_int(cell("boulder_zones"), line_no, "boulder_zones"));
            bp.top_attempts = static_cast<int>(
                parse_int(cell("boulder_top_attempts"), line_no, "boulder_top_attempts"));
            bp.zone_attempts = static_cast<int>(
                parse_int(cell("boulder_zone_attempts"), line_no, "boulder_zone_attempts"));
            validate(bp);
            e.boulder_raw = bp;
        }
        if (raw_lead) {
            model::LeadPerformance lp;
            lp.highest_hold =
                static_cast<int>(parse_int(cell("lead_hold"), line_no, "lead_hold"));
            lp.time = parse_real(cell("lead_time"), line_no, "lead_time");
            validate(lp);
            e.lead_raw = lp;
        }

        std::optional<long long> official_total;
        if (has("official_total") && !cell("official_total").empty())
            official_total = parse_int(cell("official_total"), line_no, "official_total");
        std::optional<int> official_place;
        if (has("official_place") && !cell("official_place").empty())
            official_place =
                static_cast<int>(parse_int(cell("official_place"), line_no, "official_place"));

        const long long product = static_cast<long long>(e.ranks.speed) *
                                  e.ranks.boulder * e.ranks.lead;
        if (official_total && *official_total != product)
            throw DataError("line " + std::to_string(line_no) + ": official_total " +
                            std::to_string(*official_total) +
                            " does not equal the rank product " + std::to_string(product));

        entries.push_back(std::move(e));
        file.official_total.push_back(official_total);
        file.official_place.push_back(official_place);
    }
    if (entries.empty())
        throw DataError("competition file has no climber rows");

    const auto kind = entries.size() > 8 ? model::RoundKind::Qualification
                                         : model::RoundKind::Final;
    file.round = model::build_round(kind, std::move(entries), method);
    file.has_raw_columns = raw_speed && raw_boulder && raw_lead;
    return file;
}

CompetitionFile parse_competition_csv(const std::string& path,
                                      model::AggregationMethod method) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_competition_csv_text(buf.str(), method);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_competition_csv(const CompetitionFile& file, std::ostream& out) {
    const bool officials =
        std::any_of(file.official_total.begin(), file.official_total.end(),
                    [](const auto& v) { return v.has_value(); }) ||
        std::any_of(file.official_place.begin(), file.official_place.end(),
                    [](const auto& v) { return v.has_value(); });

    out << "id,name,nationality,speed_rank,boulder_rank,lead_rank";
    if (file.has_raw_columns)
        out << ",speed_time,boulder_tops,boulder_zones,boulder_top_attempts"
            << ",boulder_zone_attempts,lead_hold,lead_time";
    if (officials) out << ",official_total,official_place";
    out << "\n";

    for (std::size_t i = 0; i < file.round.entries.size(); ++i) {
        const auto& e = file.round.entries[i];
        out << e.climber.id << ',' << e.climber.name << ',' << e.climber.nationality
            << ',' << e.ranks.speed << ',' << e.ranks.boulder << ',' << e.ranks.lead;
        if (file.has_raw_columns) {
            const auto& sp = *e.speed_raw;
            const auto& bp = *e.boulder_raw;
            const auto& lp = *e.lead_raw;
            out << ',' << (sp.dnf ? "dnf" : format_real(sp.time));
            out << ',' << bp.tops << ',' << bp.zones << ',' << bp.top_attempts << ','
                << bp.zone_attempts;
            out << ',' << lp.highest_hold << ',' << format_real(lp.time);
        }
        if (officials) {
            out << ',';
            if (file.official_total[i]) out << *file.official_total[i];
            out << ',';
            if (file.official_place[i]) out << *file.official_place[i];
        }
        out << "\n";
    }
}

pca::PerformanceMatrix to_performance_matrix(const CompetitionFile& file) {
    if (!file.has_raw_columns)
        throw DataError("file has no raw performance columns for PCA");
    pca::PerformanceMatrix m;
    m.rows.reserve(file.round.entries.size());
    for (const auto& e : file.round.entries) {
        if (e.speed_raw->dnf)
            throw DataError("PCA requires a speed time for every climber (id '" +
                            e.climber.id + "' is DNF)");
        m.rows.push_back({e.speed_raw->time,
                          static_cast<double>(e.boulder_raw->tops),
                          static_cast<double>(e.lead_raw->highest_hold)});
    }
    return m;
}

} // namespace io
} // namespace climb
