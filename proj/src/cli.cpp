#include "climb/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "climb/audit.hpp"
#include "climb/csv.hpp"
#include "climb/model.hpp"
#include "climb/montecarlo.hpp"
#include "climb/pca.hpp"
#include "climb/stats.hpp"

namespace climb {
namespace cli {

namespace {

using json = nlohmann::ordered_json;

// All floating-point output is printed with 6 significant digits; rounding
// through text keeps CSV and JSON in agreement.
double sig6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::strtod(buf, nullptr);
}

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
};

struct Report {
    std::vector<Table> tables;
};

std::string csv_cell(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void render_csv(const Report& report, std::ostream& out) {
    bool first = true;
    for (const auto& table : report.tables) {
        if (!first) out << "\n";
        first = false;
        out << "# " << table.name << "\n";
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            out << (c ? "," : "") << table.columns[c];
        out << "\n";
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                out << (c ? "," : "") << csv_cell(row[c]);
            out << "\n";
        }
    }
}

void render_json(const Report& report, std::ostream& out) {
    json root = json::object();
    for (const auto& table : report.tables) {
        json obj = json::object();
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            json column = json::array();
            for (const auto& row : table.rows) column.push_back(row[c]);
            obj[table.columns[c]] = std::move(column);
        }
        root[table.name] = std::move(obj);
    }
    out << root.dump(2) << "\n";
}

struct OutputOptions {
    std::string format = "csv";
    std::string out_path; // empty: stdout, no manifest
};

void emit(const Report& report, const OutputOptions& opts, const json& manifest) {
    std::ostringstream body;
    if (opts.format == "json")
        render_json(report, body);
    else
        render_csv(report, body);

    if (opts.out_path.empty()) {
        std::cout << body.str();
        return;
    }
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out)
        throw DataError("cannot write output file: " + opts.out_path);
    out << body.str();

    std::ofstream mf(opts.out_path + ".manifest.json", std::ios::binary);
    if (!mf)
        throw DataError("cannot write manifest next to: " + opts.out_path);
    mf << manifest.dump(2) << "\n";
}

json make_manifest(const std::string& command, const json& options,
                   const OutputOptions& opts) {
    json m = json::object();
    m["tool"] = "climb";
    m["version"] = kVersion;
    m["command"] = command;
    m["options"] = options;
    m["format"] = opts.format;
    return m;
}

std::vector<int> margin_ranks(const io::CompetitionFile& file, const std::string& which) {
    std::vector<int> out;
    out.reserve(file.round.entries.size());
    if (which == "overall") {
        out = file.round.placements;
    } else {
        for (const auto& e : file.round.entries) {
            if (which == "speed") out.push_back(e.ranks.speed);
            else if (which == "boulder" || which == "bouldering") out.push_back(e.ranks.boulder);
            else if (which == "lead") out.push_back(e.ranks.lead);
            else throw DomainError("unknown margin '" + which +
                                   "' (expected speed, boulder, lead or overall)");
        }
    }
    return out;
}

void append_win_probability_rows(Table& t, std::span<const mc::Replicate> reps,
                                 std::initializer_list<mc::WinCondition> conditions,
                                 const json& prefix = {}) {
    for (mc::WinCondition c : conditions) {
        const auto wp = mc::conditional_win_probability(reps, c);
        std::vector<json> row;
        if (!prefix.is_null()) row.push_back(prefix);
        row.insert(row.end(), {mc::condition_name(c), sig6(wp.probability),
                               sig6(wp.standard_error), wp.observations});
        t.rows.push_back(std::move(row));
    }
}

int cmd_score(const std::string& file_path, const std::string& method_name,
              const OutputOptions& opts) {
    const auto method = model::method_from_name(method_name);
    const auto file = io::parse_competition_csv(file_path, method);

    const bool officials =
        std::any_of(file.official_place.begin(), file.official_place.end(),
                    [](const auto& v) { return v.has_value(); });

    std::vector<std::string> columns = {"id",         "name",       "nationality",
                                        "speed_rank", "boulder_rank", "lead_rank",
                                        "score",      "placement"};
    if (officials) {
        columns.push_back("official_total");
        columns.push_back("official_place");
    }
    Report report;
    Table t{"standings", std::move(columns), {}};

    std::vector<int> order(file.round.entries.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return file.round.placements[static_cast<std::size_t>(a)] <
               file.round.placements[static_cast<std::size_t>(b)];
    });

    for (int i : order) {
        const auto idx = static_cast<std::size_t>(i);
        const auto& e = file.round.entries[idx];
        std::vector<json> row = {e.climber.id,    e.climber.name, e.climber.nationality,
                                 e.ranks.speed,   e.ranks.boulder, e.ranks.lead,
                                 sig6(file.round.scores[idx]), file.round.placements[idx]};
        if (officials) {
            row.push_back(file.official_total[idx] ? json(*file.official_total[idx])
                                                   : json(nullptr));
            row.push_back(file.official_place[idx] ? json(*file.official_place[idx])
                                                   : json(nullptr));
        }
        t.rows.push_back(std::move(row));
    }

    report.tables.push_back(std::move(t));
    json options = {{"file", file_path}, {"method", method_name}};
    emit(report, opts, make_manifest("score", options, opts));
    return 0;
}

int cmd_simulate(const std::string& round, int custom_n, double tau, int reps,
                 std::uint64_t seed, const std::string& method_name, int threads,
                 const OutputOptions& opts) {
    auto config = round == "qual" ? mc::SimulationConfig::qualification(tau, reps, seed)
               : round == "final" ? mc::SimulationConfig::final_round(tau, reps, seed)
                                  : mc::SimulationConfig::custom(custom_n, tau, reps, seed);
    config.method = model::method_from_name(method_name);
    const auto replicates = mc::run_simulation(config, threads);

    Report report;
    Table wins{"win_probability",
               {"condition", "probability", "standard_error", "observations"},
               {}};
    append_win_probability_rows(wins, replicates,
                                {mc::WinCondition::WonSpeed, mc::WinCondition::WonBoulder,
                                 mc::WinCondition::WonLead, mc::WinCondition::WonBoulderOrLead,
                                 mc::WinCondition::WonAnyDiscipline});

    report.tables.push_back(std::move(wins));

    const auto table = mc::conditional_rank_distribution(replicates);
    Table dist{"rank_distribution",
               {"placement", "probability", "cumulative", "observations"},
               {}};
    for (int k = 0; k < table.n; ++k)
        dist.rows.push_back({k + 1, sig6(table.probability[static_cast<std::size_t>(k)]),
                             sig6(table.cumulative[static_cast<std::size_t>(k)]),
                             table.observations});

    report.tables.push_back(std::move(dist));

    Table scores{"score_by_placement",
                 {"placement", "mean_score", "lower95", "upper95", "replicates"},
                 {}};
    for (const auto& row : mc::expected_score_by_placement(replicates))
        scores.rows.push_back({row.placement, sig6(row.mean_score), sig6(row.lower95),
                               sig6(row.upper95), row.replicates});
    report.tables.push_back(std::move(scores));

    json options = {{"round", round},   {"n", config.n},       {"tau", tau},
                    {"reps", reps},     {"seed", seed},        {"method", method_name},
                    {"threads", threads}};
    emit(report, opts, make_manifest("simulate", options, opts));
    return 0;
}

int cmd_sweep(const std::string& round, int custom_n, std::vector<double> taus, int reps,
              std::uint64_t seed, int threads, const OutputOptions& opts) {
    if (taus.empty())
        throw DomainError("sweep needs at least one tau value");
    Report report;
    Table t{"sweep",
            {"tau", "condition", "probability", "standard_error", "observations"},
            {}};
    for (double tau : taus) {
        auto config = round == "qual" ? mc::SimulationConfig::qualification(tau, reps, seed)
                   : round == "final" ? mc::SimulationConfig::final_round(tau, reps, seed)
                                      : mc::SimulationConfig::custom(custom_n, tau, reps, seed);
        const auto replicates = mc::run_simulation(config, threads);
        append_win_probability_rows(t, replicates,
                                    {mc::WinCondition::WonSpeed,
                                     mc::WinCondition::WonBoulderOrLead},
                                    json(sig6(tau)));
    }

    report.tables.push_back(std::move(t));
    json options = {{"round", round}, {"taus", taus},   {"reps", reps},
                    {"seed", seed},   {"threads", threads}};
    emit(report, opts, make_manifest("sweep", options, opts));
    return 0;
}

int cmd_correlate(const std::string& file_path, const std::string& x, const std::string& y,
                  int bootstrap_b, double level, std::uint64_t seed,
                  const OutputOptions& opts) {
    const auto file = io::parse_competition_csv(file_path);
    const auto xr = margin_ranks(file, x);
    const auto yr = margin_ranks(file, y);
    const auto data = stats::PairedRanks::of_ranks(xr, yr);

    const auto test = stats::kendall_exact_test(data);

    Report report;
    Table t{"correlation",
            {"x", "y", "n", "tau", "statistic_t", "p_value", "exact", "ci_lower",
             "ci_upper", "bootstrap_resamples", "seed"},
            {}};
    std::vector<json> row = {x,
                             y,
                             data.n(),
                             sig6(test.tau),
                             test.statistic_T,
                             sig6(test.p_value),
                             test.exact};
    if (bootstrap_b > 0) {
        const auto ci = stats::bootstrap_tau_ci(data, bootstrap_b, level, seed);
        row.insert(row.end(), {sig6(ci.lower), sig6(ci.upper), bootstrap_b, seed});
    } else {
        row.insert(row.end(), {json(nullptr), json(nullptr), 0, seed});
    }
    t.rows.push_back(std::move(row));
    report.tables.push_back(std::move(t));

    json options = {{"file", file_path}, {"x", x},           {"y", y},
                    {"bootstrap", bootstrap_b}, {"level", level}, {"seed", seed}};
    emit(report, opts, make_manifest("correlate", options, opts));
    return 0;
}

int cmd_audit(const std::string& file_path, const OutputOptions& opts) {
    const auto file = io::parse_competition_csv(file_path);
    const auto report_data = audit::iia_audit(file.round);

    Report report;
    Table summary{"exclusions",
                  {"excluded_placement", "excluded_id", "agreement_tau",
                   "perfect_agreement", "swapped_pairs"},
                  {}};
    Table standings{"restandings",
                    {"excluded_placement", "climber_id", "old_placement",
                     "new_placement", "new_score"},
                    {}};
    Table swaps{"swaps", {"excluded_placement", "originally_ahead", "originally_behind"}, {}};

    for (const auto& ex : report_data.exclusions) {
        summary.rows.push_back({ex.excluded_placement, ex.excluded_id,
                                sig6(ex.agreement_tau), ex.perfect_agreement,
                                static_cast<long long>(ex.swapped_pairs.size())});
        for (std::size_t i = 0; i < ex.rank_changes.size(); ++i) {
            const auto& rc = ex.rank_changes[i];
            standings.rows.push_back({ex.excluded_placement, rc.climber_id,
                                      rc.old_placement, rc.new_placement,
                                      sig6(ex.new_round.scores[i])});
        }
        for (const auto& [ahead, behind] : ex.swapped_pairs)
            swaps.rows.push_back({ex.excluded_placement, ahead, behind});
    }

    Table totals{"summary", {"exclusions", "perfect_agreements", "violations"}, {}};
    totals.rows.push_back({static_cast<long long>(report_data.exclusions.size()),
                           report_data.perfect_count,
                           static_cast<long long>(report_data.violation_placements.size())});
    report.tables.push_back(std::move(summary));
    report.tables.push_back(std::move(standings));
    report.tables.push_back(std::move(swaps));
    report.tables.push_back(std::move(totals));

    json options = {{"file", file_path}};
    emit(report, opts, make_manifest("audit", options, opts));
    return 0;
}

int cmd_pca(const std::string& file_path, const OutputOptions& opts) {
    const auto file = io::parse_competition_csv(file_path);
    const auto result = pca::pca(io::to_performance_matrix(file));

    Report report;
    Table loadings{"loadings", {"variable", "pc1", "pc2", "pc3"}, {}};
    for (int v = 0; v < 3; ++v)
        loadings.rows.push_back({pca::PerformanceMatrix::column_names[static_cast<std::size_t>(v)],
                                 sig6(result.loadings[static_cast<std::size_t>(v)][0]),
                                 sig6(result.loadings[static_cast<std::size_t>(v)][1]),
                                 sig6(result.loadings[static_cast<std::size_t>(v)][2])});

    report.tables.push_back(std::move(loadings));

    Table explained{"explained", {"component", "eigenvalue", "proportion"}, {}};
    for (int c = 0; c < 3; ++c)
        explained.rows.push_back({c + 1, sig6(result.eigenvalues[static_cast<std::size_t>(c)]),
                                  sig6(result.explained[static_cast<std::size_t>(c)])});

    report.tables.push_back(std::move(explained));

    Table scores{"scores", {"id", "pc1", "pc2", "pc3"}, {}};
    for (std::size_t i = 0; i < result.scores.size(); ++i)
        scores.rows.push_back({file.round.entries[i].climber.id, sig6(result.scores[i][0]),
                               sig6(result.scores[i][1]), sig6(result.scores[i][2])});
    report.tables.push_back(std::move(scores));

    json options = {{"file", file_path}};
    emit(report, opts, make_manifest("pca", options, opts));
    return 0;
}

} // namespace

int run(std::vector<std::string> args) {
    CLI::App app{"Rank-product combined scoring: standings, simulation and audits"};
    app.require_subcommand(1);
    app.fallthrough();

    OutputOptions output;
    app.add_option("--format", output.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", output.out_path,
                   "Write output here (a .manifest.json is written alongside)");

    std::string file_path;
    std::string method = "product";
    std::string round = "final";
    int custom_n = 8;
    double tau = 0.0;
    int reps = 10000;
    std::uint64_t seed = 1;
    int threads = 1;
    std::vector<double> taus = {0.0, 0.25, 0.5, 0.75, 1.0};
    std::string x_margin = "boulder", y_margin = "overall";
    int bootstrap_b = 10000;
    double level = 0.95;

    auto* score = app.add_subcommand("score", "Recompute scores and standings from a file");
    score->add_option("file", file_path, "competition CSV")->required();
    score->add_option("--method", method, "aggregation method")
        ->check(CLI::IsMember({"product", "sum", "sqrtsum"}))
        ->capture_default_str();

    auto* simulate = app.add_subcommand("simulate", "Simulate one round configuration");
    simulate->add_option("--round", round, "qual, final or custom")
        ->check(CLI::IsMember({"qual", "final", "custom"}))
        ->capture_default_str();
    simulate->add_option("--n", custom_n, "field size for --round custom");
    simulate->add_option("--tau", tau, "Kendall tau between boulder and lead")->required();
    simulate->add_option("--reps", reps, "replications")->capture_default_str();
    simulate->add_option("--seed", seed, "master seed")->capture_default_str();
    simulate->add_option("--method", method, "aggregation method")
        ->check(CLI::IsMember({"product", "sum", "sqrtsum"}))
        ->capture_default_str();
    simulate->add_option("--threads", threads, "worker threads")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "Win probabilities across tau values");
    sweep->add_option("--round", round, "qual, final or custom")
        ->check(CLI::IsMember({"qual", "final", "custom"}))
        ->capture_default_str();
    sweep->add_option("--n", custom_n, "field size for --round custom");
    sweep->add_option("--taus", taus, "comma-separated tau values")
        ->delimiter(',')
        ->capture_default_str();
    sweep->add_option("--reps", reps, "replications per tau")->capture_default_str();
    sweep->add_option("--seed", seed, "master seed")->capture_default_str();
    sweep->add_option("--threads", threads, "worker threads")->capture_default_str();

    auto* correlate = app.add_subcommand("correlate", "Kendall tau between two rank margins");
    correlate->add_option("file", file_path, "competition CSV")->required();
    correlate->add_option("--x", x_margin, "speed, boulder, lead or overall")
        ->capture_default_str();
    correlate->add_option("--y", y_margin, "speed, boulder, lead or overall")
        ->capture_default_str();
    correlate->add_option("--bootstrap", bootstrap_b, "bootstrap resamples (0 disables)")
        ->capture_default_str();
    correlate->add_option("--level", level, "confidence level")->capture_default_str();
    correlate->add_option("--seed", seed, "bootstrap seed")->capture_default_str();

    auto* audit_cmd = app.add_subcommand("audit", "Leave-one-climber-out re-scoring report");
    audit_cmd->add_option("file", file_path, "competition CSV")->required();

    auto* pca_cmd = app.add_subcommand("pca", "Skills PCA of raw performances");
    pca_cmd->add_option("file", file_path, "competition CSV")->required();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (score->parsed()) return cmd_score(file_path, method, output);
        if (simulate->parsed())
            return cmd_simulate(round, custom_n, tau, reps, seed, method, threads, output);
        if (sweep->parsed())
            return cmd_sweep(round, custom_n, taus, reps, seed, threads, output);
        if (correlate->parsed())
            return cmd_correlate(file_path, x_margin, y_margin, bootstrap_b, level, seed,
                                 output);
        if (audit_cmd->parsed()) return cmd_audit(file_path, output);
        if (pca_cmd->parsed()) return cmd_pca(file_path, output);
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}

} // namespace cli
} // namespace climb
