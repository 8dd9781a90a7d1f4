#pragma once

/**
 * @file checks.hpp
 * @brief Registry of identity checks and the sampling runner.
 *
 * A check evaluates one identity at seeded quasi-random points of a
 * soliton's sampling box. Every point yields one or more named relative
 * residuals; the point's residual is their maximum, and a check passes iff
 * the maximum over points is within its tolerance. Pairings that do not
 * apply to a soliton's class are reported as skipped.
 */

#include <harnacklab/harnack.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hl {

constexpr double kDefaultTolerance = 1e-8;
constexpr double kMaxTolerance = 1e-6;
constexpr int kDefaultOrder = 6;

enum class CheckStatus { pass, fail, skipped };
const char* to_string(CheckStatus s);

/// Sample set for the interpolation identities.
inline constexpr double kEpsilonSamples[] = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};

struct PointContext {
    const SolitonSpec& spec;
    SamplePoint point;
    std::uint64_t seed;
    std::uint64_t index;
    int order;
};

using CheckEvaluator = std::function<std::vector<NamedResidual>(const PointContext&)>;

struct CheckSpec {
    std::string id;
    std::string description;
    /// The formula the check verifies, as printed by `list`.
    std::string anchor;
    std::string fields;  ///< random or derived fields the check draws
    int min_order = 4;
    double tolerance = kDefaultTolerance;
    /// Returns an empty string when the soliton applies, else the skip reason.
    std::function<std::string(const SolitonSpec&)> applicability;
    CheckEvaluator evaluate;
};

const std::vector<CheckSpec>& check_registry();
/// Throws UnknownNameError for unregistered ids.
const CheckSpec& check_get(const std::string& id);

struct CheckConfig {
    std::uint64_t seed = 42;
    int points = 32;
    int order = kDefaultOrder;
    std::map<std::string, double> tolerance_overrides;
    int threads = 0;  ///< 0: hardware concurrency
    /// Keep per-point residuals and sub-identity maxima in the report.
    bool keep_points = true;
};

struct PointRecord {
    int index = 0;
    std::vector<double> x;
    double t = 0.0;
    double residual = 0.0;
    std::vector<NamedResidual> parts;
};

struct CheckReport {
    std::string check_id;
    std::string soliton;
    std::uint64_t seed = 0;
    int n_points = 0;
    int order = 0;
    std::vector<double> residuals;
    std::vector<PointRecord> points;
    /// Largest relative residual of each named sub-identity.
    std::map<std::string, double> part_max;
    double max_rel_residual = 0.0;
    double median_rel_residual = 0.0;
    double tolerance = kDefaultTolerance;
    CheckStatus status = CheckStatus::skipped;
    std::string note;
    double millis = 0.0;
};

/// Validates the configuration (order, tolerances) and throws ConfigError.
void validate(const CheckConfig& cfg);

/// Runs one (check, soliton) pairing. Inapplicable pairings give a skipped
/// report; an order below the check's minimum throws ConfigError.
CheckReport run_check(const std::string& id, const std::string& soliton, const CheckConfig& cfg);

struct SuiteResult {
    std::vector<CheckReport> reports;
    std::vector<std::string> warnings;
    /// True iff no report failed.
    bool passed() const;
    int count(CheckStatus s) const;
};

/// Comma-separated glob patterns ('*', '?'), or "all".
bool matches_filter(const std::string& filter, const std::string& name);
std::vector<std::string> select_checks(const std::string& filter);
std::vector<std::string> select_solitons(const std::string& filter);

/// Runs every matching pairing; reports are ordered by registry order, then
/// catalog order, independent of scheduling.
SuiteResult run_suite(const std::string& check_filter, const std::string& soliton_filter, const CheckConfig& cfg);

/// Term-by-term view of the Z evolution with h = Rc and X = -grad f on a
/// steady soliton: each term's value relative to its factor scale.
struct TermwiseZEvolution {
    double t[4] = {0, 0, 0, 0};
    double scale[4] = {0, 0, 0, 0};
    double relative(int k) const { return std::abs(t[k]) / (scale[k] + kResidualFloor); }
};
TermwiseZEvolution termwise_z_evolution(const SolitonSpec& spec, std::span<const double> p, double t, int order);

} // namespace hl
