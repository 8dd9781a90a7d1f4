#pragma once

/**
 * @file report_io.hpp
 * @brief JSON, CSV and text renderings of check reports, and merging of
 *        JSON reports from separate runs.
 *
 * JSON layout (stable):
 *   {version, seed, config, reports: [{check_id, soliton, n_points,
 *    max_rel_residual, median_rel_residual, tolerance, status, millis}]}
 * Non-finite residuals are written as null. Apart from millis, identical
 * inputs give byte-identical documents.
 */

#include <harnacklab/checks.hpp>

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace hl {

constexpr int kReportVersion = 1;

/// The run parameters echoed in the JSON "config" object.
struct RunSummary {
    std::uint64_t seed = 42;
    std::string suite = "all";
    std::string soliton = "all";
    int points = 32;
    int order = kDefaultOrder;
    std::map<std::string, double> tolerance_overrides;
};

nlohmann::json to_json(const std::vector<CheckReport>& reports, const RunSummary& run);
/// Two-space indented JSON with a trailing newline.
std::string dump(const nlohmann::json& doc);

/// Summary fields of each report; per-point data is not part of the JSON.
/// Throws ConfigError on a malformed document or an unsupported version.
std::vector<CheckReport> reports_from_json(const nlohmann::json& doc);

/// Concatenates reports of several documents. A later document replaces an
/// earlier report for the same (check, soliton) pair. Reports are ordered by
/// registry then catalog order. The seed is kept when all documents agree
/// and is null otherwise; config lists the source configs.
nlohmann::json merge_reports(const std::vector<nlohmann::json>& docs);

/// Copy of a report document with every millis field removed.
nlohmann::json strip_timing(nlohmann::json doc);

CheckStatus parse_status(const std::string& s);

/// One row per sample point: check_id, soliton, point_index, residual.
std::string to_csv(const std::vector<CheckReport>& reports);

/// Aligned table with each check's formula, followed by warnings and totals.
std::string to_text(const std::vector<CheckReport>& reports, const std::vector<std::string>& warnings = {});

} // namespace hl
