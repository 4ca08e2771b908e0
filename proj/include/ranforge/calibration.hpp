#pragma once

// Empirical CDFs, reference percentile curves and the two-sample
// Kolmogorov-Smirnov distance between them.

#include "ranforge/common.hpp"
#include "ranforge/kpi.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ranforge {

/// A CDF is either a right-continuous step function over samples, or a
/// piecewise-linear curve through (value, probability) knots.
struct CdfCurve {
    enum class Kind { Step, Linear };

    Kind kind = Kind::Step;
    std::vector<double> values;         // ascending
    std::vector<double> probabilities;  // non-decreasing, last == 1

    double at(double x) const;
    /// Limit from the left at x.
    double left_limit(double x) const;

    friend bool operator==(const CdfCurve&, const CdfCurve&) = default;
};

CdfCurve empirical_cdf(std::span<const double> samples);

/// Linear CDF through a percentile table (percent in (0, 100), ascending).
/// The curve is extended to probability 0 and 1 with the slope of its first
/// and last segments.
CdfCurve percentile_curve(std::span<const double> percents, std::span<const double> values_db);

/// sup_x |F_a(x) - F_b(x)|, evaluated at every breakpoint of either curve
/// from both sides.
double ks_statistic(const CdfCurve& a, const CdfCurve& b);

/// Reads a `percentile,value_db` table.
CdfCurve load_reference_csv(const std::filesystem::path& path);

enum class CalibrationKpi { CouplingGain, WidebandSinr };

std::string_view to_string(CalibrationKpi kpi);

struct KsResult {
    CalibrationKpi kpi = CalibrationKpi::CouplingGain;
    std::string reference_name;
    double statistic = 0.0;
    std::optional<double> threshold;

    bool passed() const { return !threshold || statistic <= *threshold; }
};

struct Thresholds {
    double coupling_gain = 0.0;
    double sinr = 0.0;

    double for_kpi(CalibrationKpi kpi) const { return kpi == CalibrationKpi::CouplingGain ? coupling_gain : sinr; }
};

/// Twice the published simulator scores for each environment.
Thresholds default_thresholds(Environment env);

/// Reference curves keyed by KPI, then by reference name.
using ReferenceSet = std::map<CalibrationKpi, std::map<std::string, CdfCurve>>;

/// Loads every `<kpi>__<name>.csv` in `dir`, kpi one of coupling_gain / sinr.
/// Throws MissingReference when either KPI has no curve.
ReferenceSet load_reference_dir(const std::filesystem::path& dir);

struct CalibrationReport {
    Environment environment = Environment::UrbanEmbb;
    int drops = 0;
    std::uint64_t seed = 0;
    std::int64_t generated = 0;
    std::int64_t retained = 0;
    std::int64_t out_of_range_links = 0;
    CdfCurve coupling_gain;
    CdfCurve sinr;
    std::vector<KsResult> results;

    bool passed() const;
};

CalibrationReport calibration_report(Environment env, std::span<const KpiSample> samples,
                                     const ReferenceSet& references, std::optional<Thresholds> thresholds);

std::string report_json(const CalibrationReport& report);

/// Long-form overlay table: curve,kpi,value_db,probability. Sample curves are
/// downsampled to their 1..99 percentiles; references are written as stored.
std::string overlay_csv(const CalibrationReport& report, const ReferenceSet& references);

/// Value at percentile p (0..100) of an ascending sample vector, linear
/// interpolation between order statistics.
double percentile_of(std::span<const double> sorted, double p);

}  // namespace ranforge
