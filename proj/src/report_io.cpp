#include <harnacklab/report_io.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <sstream>

namespace hl {

namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& v) {
    return v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
}

std::string sci(double v) {
    if (std::isinf(v)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

std::size_t rank_of(const std::vector<std::string>& names, const std::string& name) {
    const auto it = std::find(names.begin(), names.end(), name);
    return static_cast<std::size_t>(it - names.begin());
}

std::vector<std::string> registry_ids() {
    std::vector<std::string> ids;
    for (const auto& c : check_registry()) ids.push_back(c.id);
    return ids;
}

} // namespace

CheckStatus parse_status(const std::string& s) {
    if (s == "pass") return CheckStatus::pass;
    if (s == "fail") return CheckStatus::fail;
    if (s == "skipped") return CheckStatus::skipped;
    throw ConfigError("unknown report status '" + s + "'");
}

json to_json(const std::vector<CheckReport>& reports, const RunSummary& run) {
    json doc;
    doc["version"] = kReportVersion;
    doc["seed"] = run.seed;
    json cfg;
    cfg["suite"] = run.suite;
    cfg["soliton"] = run.soliton;
    cfg["points"] = run.points;
    cfg["order"] = run.order;
    cfg["tolerance_overrides"] = json::object();
    for (const auto& [id, tol] : run.tolerance_overrides) cfg["tolerance_overrides"][id] = tol;
    doc["config"] = cfg;
    doc["reports"] = json::array();
    for (const auto& r : reports) {
        json j;
        j["check_id"] = r.check_id;
        j["soliton"] = r.soliton;
        j["n_points"] = r.n_points;
        j["max_rel_residual"] = number_or_null(r.max_rel_residual);
        j["median_rel_residual"] = number_or_null(r.median_rel_residual);
        j["tolerance"] = r.tolerance;
        j["status"] = to_string(r.status);
        j["millis"] = r.millis;
        doc["reports"].push_back(j);
    }
    return doc;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

std::vector<CheckReport> reports_from_json(const json& doc) {
    try {
        if (!doc.is_object() || !doc.contains("version") || !doc.contains("reports"))
            throw ConfigError("not a report document: expected keys version and reports");
        if (doc.at("version").get<int>() != kReportVersion)
            throw ConfigError("unsupported report version " + doc.at("version").dump());
        std::vector<CheckReport> out;
        for (const auto& j : doc.at("reports")) {
            CheckReport r;
            r.check_id = j.at("check_id").get<std::string>();
            r.soliton = j.at("soliton").get<std::string>();
            r.n_points = j.at("n_points").get<int>();
            r.max_rel_residual = number_from(j.at("max_rel_residual"));
            r.median_rel_residual = number_from(j.at("median_rel_residual"));
            r.tolerance = j.at("tolerance").get<double>();
            r.status = parse_status(j.at("status").get<std::string>());
            r.millis = j.value("millis", 0.0);
            if (doc.contains("seed") && doc.at("seed").is_number_unsigned()) r.seed = doc.at("seed").get<std::uint64_t>();
            out.push_back(std::move(r));
        }
        return out;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed report document: ") + e.what());
    }
}

json merge_reports(const std::vector<json>& docs) {
    if (docs.empty()) throw ConfigError("nothing to merge");
    std::vector<CheckReport> merged;
    json configs = json::array();
    json seed = nullptr;
    bool same_seed = true;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (auto& r : reports_from_json(docs[d])) {
            auto it = std::find_if(merged.begin(), merged.end(), [&r](const CheckReport& m) {
                return m.check_id == r.check_id && m.soliton == r.soliton;
            });
            if (it != merged.end())
                *it = std::move(r);
            else
                merged.push_back(std::move(r));
        }
        const json s = docs[d].value("seed", json(nullptr));
        if (d == 0)
            seed = s;
        else if (s != seed)
            same_seed = false;
        configs.push_back(docs[d].value("config", json::object()));
    }
    const auto ids = registry_ids();
    const auto& sols = catalog_names();
    std::stable_sort(merged.begin(), merged.end(), [&](const CheckReport& a, const CheckReport& b) {
        const auto ka = std::pair{rank_of(ids, a.check_id), rank_of(sols, a.soliton)};
        const auto kb = std::pair{rank_of(ids, b.check_id), rank_of(sols, b.soliton)};
        return ka < kb;
    });
    RunSummary run;
    json doc = to_json(merged, run);
    doc["seed"] = same_seed ? seed : json(nullptr);
    doc["config"] = json{{"merged_from", configs}};
    return doc;
}

json strip_timing(json doc) {
    if (doc.contains("reports"))
        for (auto& r : doc["reports"]) r.erase("millis");
    return doc;
}

std::string to_csv(const std::vector<CheckReport>& reports) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "check_id,soliton,point_index,residual\n";
    for (const auto& r : reports)
        for (std::size_t k = 0; k < r.residuals.size(); ++k) {
            os << r.check_id << ',' << r.soliton << ',' << k << ',';
            if (std::isinf(r.residuals[k]))
                os << "inf";
            else
                os << r.residuals[k];
            os << '\n';
        }
    return os.str();
}

std::string to_text(const std::vector<CheckReport>& reports, const std::vector<std::string>& warnings) {
    std::ostringstream os;
    std::size_t wid = 8, wsol = 7;
    for (const auto& r : reports) {
        wid = std::max(wid, r.check_id.size());
        wsol = std::max(wsol, r.soliton.size());
    }
    os << std::left << std::setw(static_cast<int>(wid)) << "check" << "  " << std::setw(static_cast<int>(wsol))
       << "soliton" << "  status   points  max       median    tolerance\n";
    int counts[3] = {0, 0, 0};
    for (const auto& r : reports) {
        ++counts[static_cast<int>(r.status)];
        os << std::setw(static_cast<int>(wid)) << r.check_id << "  " << std::setw(static_cast<int>(wsol)) << r.soliton
           << "  " << std::setw(7) << to_string(r.status) << "  ";
        if (r.status == CheckStatus::skipped) {
            os << r.note << '\n';
            continue;
        }
        os << std::setw(6) << r.n_points << "  " << std::setw(8) << sci(r.max_rel_residual) << "  " << std::setw(8)
           << sci(r.median_rel_residual) << "  " << sci(r.tolerance) << '\n';
        std::string anchor;
        try {
            anchor = check_get(r.check_id).anchor;
        } catch (const UnknownNameError&) {
        }
        if (!anchor.empty()) os << "    " << anchor << '\n';
        if (!r.note.empty()) os << "    note: " << r.note << '\n';
    }
    for (const auto& w : warnings) os << "warning: " << w << '\n';
    os << counts[static_cast<int>(CheckStatus::pass)] << " passed, " << counts[static_cast<int>(CheckStatus::fail)]
       << " failed, " << counts[static_cast<int>(CheckStatus::skipped)] << " skipped\n";
    return os.str();
}

} // namespace hl
