#include "cli.hpp"

#include <harnacklab/grid.hpp>
#include <harnacklab/report_io.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace hl::cli {

namespace {

struct CheckOptions {
    std::string suite = "all";
    std::string soliton = "all";
    std::uint64_t seed = 42;
    int points = 32;
    int order = kDefaultOrder;
    std::vector<std::string> tol;
    std::string format = "text";
    std::string output;
    int threads = 0;
};

struct GridOptions {
    std::string suite = "all";
    std::vector<int> resolutions = {32, 64, 128};
    double t_star = 0.05;
    double amplitude = 0.05;
    std::uint64_t seed = 42;
    std::string format = "text";
    std::string output;
};

struct ReportOptions {
    std::vector<std::string> inputs;
    std::string format = "json";
    std::string output;
};

std::map<std::string, double> parse_tolerances(const std::vector<std::string>& items) {
    std::map<std::string, double> out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
            throw ConfigError("--tol expects ID=value, got '" + item + "'");
        double v = 0.0;
        std::size_t used = 0;
        try {
            v = std::stod(item.substr(eq + 1), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() - eq - 1) throw ConfigError("--tol value is not a number in '" + item + "'");
        out[item.substr(0, eq)] = v;
    }
    return out;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << text;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
    std::filesystem::path p(path);
    return (p.parent_path() / (p.stem().string() + "_" + suffix + p.extension().string())).string();
}

int cmd_list(const std::string& format, std::ostream& out) {
    if (format == "json") {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& c : check_registry())
            doc.push_back({{"check_id", c.id},
                           {"description", c.description},
                           {"anchor", c.anchor},
                           {"fields", c.fields},
                           {"min_order", c.min_order},
                           {"tolerance", c.tolerance}});
        out << dump(doc);
        return kExitPass;
    }
    std::size_t w = 0;
    for (const auto& c : check_registry()) w = std::max(w, c.id.size());
    for (const auto& c : check_registry()) {
        out << std::left << std::setw(static_cast<int>(w)) << c.id << "  " << c.description << '\n';
        out << std::string(w + 2, ' ') << c.anchor << '\n';
    }
    out << "\nsolitons:\n";
    for (const auto& n : catalog_names()) {
        const auto& s = catalog_get(n);
        out << "  " << std::setw(20) << n << ' ' << std::setw(10) << to_string(s.cls) << ' ' << s.description << '\n';
    }
    return kExitPass;
}

int cmd_check(const CheckOptions& o, std::ostream& out, std::ostream& err) {
    CheckConfig cfg;
    cfg.seed = o.seed;
    cfg.points = o.points;
    cfg.order = o.order;
    cfg.threads = o.threads;
    cfg.tolerance_overrides = parse_tolerances(o.tol);
    cfg.keep_points = o.format == "csv";
    const auto res = run_suite(o.suite, o.soliton, cfg);
    for (const auto& w : res.warnings) err << "warning: " << w << '\n';

    std::string text;
    if (o.format == "json") {
        RunSummary run{o.seed, o.suite, o.soliton, o.points, o.order, cfg.tolerance_overrides};
        text = dump(to_json(res.reports, run));
    } else if (o.format == "csv") {
        text = to_csv(res.reports);
    } else {
        text = to_text(res.reports, res.warnings);
    }
    emit(text, o.output, out);
    return res.passed() ? kExitPass : kExitFail;
}

std::string grid_text(const ConvergenceReport& r) {
    std::ostringstream os;
    os << r.check_id << "  " << to_string(r.status) << "  fitted order " << std::fixed << std::setprecision(3)
       << r.fitted_order << "  accepted [" << r.band_lo << ", " << r.band_hi << "]\n";
    os << std::defaultfloat;
    for (const auto& row : r.rows) {
        os << "  N=" << std::setw(4) << row.n << "  residual " << std::scientific << std::setprecision(3)
           << row.residual << "  scale " << row.scale << std::defaultfloat;
        if (!std::isnan(row.observed_order)) os << "  order " << std::fixed << std::setprecision(3) << row.observed_order;
        os << std::defaultfloat << '\n';
    }
    if (!r.note.empty()) os << "  note: " << r.note << '\n';
    return os.str();
}

int cmd_grid(const GridOptions& o, std::ostream& out, std::ostream& err) {
    std::vector<std::string> ids;
    for (const auto& id : grid_check_ids())
        if (matches_filter(o.suite, id)) ids.push_back(id);
    if (ids.empty()) {
        err << "warning: no grid study matches '" << o.suite << "' (available: CHK-L1, CHK-B2, CHK-EQ1)\n";
        return kExitPass;
    }
    GridStudyOptions gs;
    gs.t_star = o.t_star;
    gs.amplitude = o.amplitude;
    gs.field_seed = o.seed;
    std::vector<ConvergenceReport> reports;
    for (const auto& id : ids) reports.push_back(dynamic_residual(id, o.resolutions, gs));

    bool ok = true;
    for (const auto& r : reports) ok = ok && r.status == GridStatus::pass;
    if (o.format == "csv") {
        if (reports.size() == 1) {
            emit(to_csv(reports[0]), o.output, out);
        } else if (!o.output.empty() && o.output != "-") {
            for (const auto& r : reports) emit(to_csv(r), with_suffix(o.output, r.check_id), out);
        } else {
            for (const auto& r : reports) out << "# " << r.check_id << '\n' << to_csv(r) << '\n';
        }
    } else if (o.format == "json") {
        nlohmann::json doc;
        doc["version"] = kReportVersion;
        doc["seed"] = o.seed;
        doc["studies"] = nlohmann::json::array();
        for (const auto& r : reports) {
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& row : r.rows)
                rows.push_back({{"N", row.n},
                                {"residual", row.residual},
                                {"scale", row.scale},
                                {"observed_order", std::isnan(row.observed_order) ? nlohmann::json(nullptr)
                                                                                  : nlohmann::json(row.observed_order)}});
            doc["studies"].push_back({{"check_id", r.check_id},
                                      {"status", to_string(r.status)},
                                      {"fitted_order", r.fitted_order},
                                      {"rows", rows},
                                      {"millis", r.millis}});
        }
        emit(dump(doc), o.output, out);
    } else {
        std::string text;
        for (const auto& r : reports) text += grid_text(r);
        emit(text, o.output, out);
    }
    return ok ? kExitPass : kExitFail;
}

int cmd_report(const ReportOptions& o, std::ostream& out) {
    std::vector<nlohmann::json> docs;
    for (const auto& path : o.inputs) {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot read '" + path + "'");
        try {
            docs.push_back(nlohmann::json::parse(f));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
        }
    }
    const auto merged = merge_reports(docs);
    const auto reports = reports_from_json(merged);
    emit(o.format == "json" ? dump(merged) : to_text(reports), o.output, out);
    const bool ok = std::none_of(reports.begin(), reports.end(),
                                 [](const CheckReport& r) { return r.status == CheckStatus::fail; });
    return ok ? kExitPass : kExitFail;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Identity checks for Harnack quantities on Ricci flow solitons", "harnacklab"};
    app.require_subcommand(1);

    std::string list_format = "text";
    auto* list = app.add_subcommand("list", "print the check registry with the formula each check verifies");
    list->add_option("--format", list_format, "text or json")->check(CLI::IsMember({"text", "json"}));

    CheckOptions co;
    auto* check = app.add_subcommand("check", "run jet identity checks");
    check->add_option("--suite", co.suite, "check ids, comma-separated globs or 'all'");
    check->add_option("--soliton", co.soliton, "soliton names, comma-separated globs or 'all'");
    check->add_option("--seed", co.seed, "random seed");
    check->add_option("--points", co.points, "sample points per pairing")->check(CLI::Range(1, 100000));
    check->add_option("--order", co.order, "jet order")->check(CLI::Range(1, JetSpace::max_order));
    check->add_option("--tol", co.tol, "tolerance override ID=value (at most 1e-6)");
    check->add_option("--format", co.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    check->add_option("--output", co.output, "output file (default stdout)");
    check->add_option("--threads", co.threads, "worker threads, 0 for all cores")->check(CLI::Range(0, 1024));

    GridOptions go;
    auto* grid = app.add_subcommand("grid", "finite-difference convergence studies on the torus");
    grid->add_option("--suite", go.suite, "CHK-L1, CHK-B2, CHK-EQ1 (globs) or 'all'");
    grid->add_option("--resolutions", go.resolutions, "grid sizes, each double the previous")->delimiter(',');
    grid->add_option("--t-star", go.t_star, "evaluation time")->check(CLI::PositiveNumber);
    grid->add_option("--amplitude", go.amplitude, "metric perturbation for CHK-EQ1");
    grid->add_option("--seed", go.seed, "seed of h, u and X");
    grid->add_option("--format", go.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    grid->add_option("--output", go.output, "output file (default stdout)");

    ReportOptions ro;
    auto* report = app.add_subcommand("report", "merge JSON reports of earlier runs");
    report->add_option("inputs", ro.inputs, "JSON report files")->required()->check(CLI::ExistingFile);
    report->add_option("--format", ro.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    report->add_option("--output", ro.output, "output file (default stdout)");

    std::vector<std::string> argv_store = {"harnacklab"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*list) return cmd_list(list_format, out);
        if (*check) return cmd_check(co, out, err);
        if (*grid) return cmd_grid(go, out, err);
        if (*report) return cmd_report(ro, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UnknownNameError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitUsage;
}

} // namespace hl::cli
