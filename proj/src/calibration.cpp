#include "ranforge/calibration.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ranforge {

namespace {

/// Interpolates knot i-1..i at x, with v[i-1] <= x <= v[i] and v[i] > v[i-1].
double lerp_knots(const CdfCurve& c, std::size_t i, double x) {
    const double v0 = c.values[i - 1];
    const double v1 = c.values[i];
    const double p0 = c.probabilities[i - 1];
    const double p1 = c.probabilities[i];
    return p0 + (p1 - p0) * (x - v0) / (v1 - v0);
}

double evaluate(const CdfCurve& c, std::size_t idx, double x) {
    if (idx == 0) {
        return 0.0;
    }
    if (c.kind == CdfCurve::Kind::Step || idx == c.values.size()) {
        return c.probabilities[idx - 1];
    }
    return lerp_knots(c, idx, x);
}

/// Smallest curve value whose cumulative probability reaches q.
double quantile(const CdfCurve& c, double q) {
    auto it = std::lower_bound(c.probabilities.begin(), c.probabilities.end(), q - 1e-12);
    if (it == c.probabilities.end()) {
        return c.values.back();
    }
    return c.values[static_cast<std::size_t>(it - c.probabilities.begin())];
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

double parse_number(const std::string& text, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) {
            throw std::invalid_argument(text);
        }
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError(where + ": not a number: '" + text + "'");
    }
}

}  // namespace

double CdfCurve::at(double x) const {
    const auto idx = static_cast<std::size_t>(std::upper_bound(values.begin(), values.end(), x) - values.begin());
    return evaluate(*this, idx, x);
}

double CdfCurve::left_limit(double x) const {
    const auto idx = static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), x) - values.begin());
    return evaluate(*this, idx, x);
}

CdfCurve empirical_cdf(std::span<const double> samples) {
    if (samples.empty()) {
        throw EmptyInput("empirical_cdf: no samples");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    CdfCurve c;
    c.kind = CdfCurve::Kind::Step;
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) {
            continue;
        }
        c.values.push_back(sorted[i]);
        c.probabilities.push_back(static_cast<double>(i + 1) / n);
    }
    c.probabilities.back() = 1.0;
    return c;
}

CdfCurve percentile_curve(std::span<const double> percents, std::span<const double> values_db) {
    if (percents.size() != values_db.size() || percents.size() < 2) {
        throw ConfigError("percentile curve needs at least two (percentile, value) rows");
    }
    CdfCurve c;
    c.kind = CdfCurve::Kind::Linear;
    for (std::size_t i = 0; i < percents.size(); ++i) {
        if (!(percents[i] > 0.0 && percents[i] < 100.0)) {
            throw ConfigError("percentile out of (0, 100): " + format_double(percents[i]));
        }
        if (i > 0 && !(percents[i] > percents[i - 1])) {
            throw ConfigError("percentiles must be strictly increasing");
        }
        if (i > 0 && values_db[i] < values_db[i - 1]) {
            throw ConfigError("percentile values must be non-decreasing");
        }
        c.values.push_back(values_db[i]);
        c.probabilities.push_back(percents[i] / 100.0);
    }

    const std::size_t n = c.values.size();
    const double low_rise = c.values[1] - c.values[0];
    const double low_value =
        low_rise > 0.0 ? c.values[0] - c.probabilities[0] * low_rise / (c.probabilities[1] - c.probabilities[0])
                       : c.values[0];
    const double high_rise = c.values[n - 1] - c.values[n - 2];
    const double high_value =
        high_rise > 0.0
            ? c.values[n - 1] + (1.0 - c.probabilities[n - 1]) * high_rise / (c.probabilities[n - 1] - c.probabilities[n - 2])
            : c.values[n - 1];
    c.values.insert(c.values.begin(), low_value);
    c.probabilities.insert(c.probabilities.begin(), 0.0);
    c.values.push_back(high_value);
    c.probabilities.push_back(1.0);
    return c;
}

double ks_statistic(const CdfCurve& a, const CdfCurve& b) {
    if (a.values.empty() || b.values.empty()) {
        throw EmptyInput("ks_statistic: empty curve");
    }
    double best = 0.0;
    const auto scan = [&](const std::vector<double>& points) {
        for (double x : points) {
            best = std::max(best, std::abs(a.at(x) - b.at(x)));
            best = std::max(best, std::abs(a.left_limit(x) - b.left_limit(x)));
        }
    };
    scan(a.values);
    scan(b.values);
    return std::min(best, 1.0);
}

CdfCurve load_reference_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read reference curve " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || trim(line) != "percentile,value_db") {
        throw ConfigError(path.string() + ": expected header 'percentile,value_db'");
    }
    std::vector<double> percents;
    std::vector<double> values;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected two columns");
        }
        const std::string where = path.string() + ":" + std::to_string(line_no);
        percents.push_back(parse_number(trim(line.substr(0, comma)), where));
        values.push_back(parse_number(trim(line.substr(comma + 1)), where));
    }
    try {
        return percentile_curve(percents, values);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string_view to_string(CalibrationKpi kpi) {
    return kpi == CalibrationKpi::CouplingGain ? "coupling_gain" : "sinr";
}

Thresholds default_thresholds(Environment env) {
    if (env == Environment::RuralEmbb) {
        return {0.18, 0.32};
    }
    return {0.13, 0.28};
}

ReferenceSet load_reference_dir(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw MissingReference("reference directory not found: " + dir.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    ReferenceSet refs;
    for (const auto& file : files) {
        const std::string stem = file.stem().string();
        const auto sep = stem.find("__");
        if (sep == std::string::npos || sep + 2 == stem.size()) {
            throw ConfigError(file.string() + ": reference files are named <kpi>__<name>.csv");
        }
        const std::string kpi = stem.substr(0, sep);
        const std::string name = stem.substr(sep + 2);
        if (kpi == "coupling_gain") {
            refs[CalibrationKpi::CouplingGain][name] = load_reference_csv(file);
        } else if (kpi == "sinr") {
            refs[CalibrationKpi::WidebandSinr][name] = load_reference_csv(file);
        } else {
            throw ConfigError(file.string() + ": unknown reference KPI '" + kpi + "'");
        }
    }
    for (auto kpi : {CalibrationKpi::CouplingGain, CalibrationKpi::WidebandSinr}) {
        if (refs[kpi].empty()) {
            throw MissingReference("no " + std::string(to_string(kpi)) + " reference curve in " + dir.string());
        }
    }
    return refs;
}

bool CalibrationReport::passed() const {
    return std::all_of(results.begin(), results.end(), [](const KsResult& r) { return r.passed(); });
}

CalibrationReport calibration_report(Environment env, std::span<const KpiSample> samples,
                                     const ReferenceSet& references, std::optional<Thresholds> thresholds) {
    std::vector<double> cg;
    std::vector<double> sinr;
    cg.reserve(samples.size());
    sinr.reserve(samples.size());
    for (const auto& s : samples) {
        cg.push_back(s.coupling_gain_db);
        sinr.push_back(s.sinr_db);
    }
    CalibrationReport report;
    report.environment = env;
    report.retained = static_cast<std::int64_t>(samples.size());
    report.coupling_gain = empirical_cdf(cg);
    report.sinr = empirical_cdf(sinr);
    for (const auto& [kpi, curves] : references) {
        const CdfCurve& sim = kpi == CalibrationKpi::CouplingGain ? report.coupling_gain : report.sinr;
        for (const auto& [name, ref] : curves) {
            KsResult r;
            r.kpi = kpi;
            r.reference_name = name;
            r.statistic = ks_statistic(sim, ref);
            if (thresholds) {
                r.threshold = thresholds->for_kpi(kpi);
            }
            report.results.push_back(r);
        }
    }
    return report;
}

std::string report_json(const CalibrationReport& report) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["environment"] = std::string(to_string(report.environment));
    j["drops"] = report.drops;
    j["seed"] = report.seed;
    j["samples_generated"] = report.generated;
    j["samples_retained"] = report.retained;
    j["out_of_range_links"] = report.out_of_range_links;
    const auto summary = [](const CdfCurve& c) {
        ordered_json s;
        s["p5"] = quantile(c, 0.05);
        s["p50"] = quantile(c, 0.50);
        s["p95"] = quantile(c, 0.95);
        s["min"] = c.values.front();
        s["max"] = c.values.back();
        return s;
    };
    j["coupling_gain_db"] = summary(report.coupling_gain);
    j["sinr_db"] = summary(report.sinr);
    ordered_json results = ordered_json::array();
    for (const auto& r : report.results) {
        ordered_json e;
        e["kpi"] = std::string(to_string(r.kpi));
        e["reference"] = r.reference_name;
        e["ks"] = r.statistic;
        e["threshold"] = r.threshold ? ordered_json(*r.threshold) : ordered_json(nullptr);
        e["passed"] = r.passed();
        results.push_back(e);
    }
    j["ks_results"] = results;
    j["passed"] = report.passed();
    return j.dump(2) + "\n";
}

std::string overlay_csv(const CalibrationReport& report, const ReferenceSet& references) {
    std::ostringstream out;
    out << "curve,kpi,value_db,probability\n";
    const auto sim = [&](CalibrationKpi kpi, const CdfCurve& c) {
        for (int p = 1; p <= 99; ++p) {
            out << "simulated," << to_string(kpi) << ',' << format_double(quantile(c, p / 100.0)) << ','
                << format_double(p / 100.0) << '\n';
        }
    };
    sim(CalibrationKpi::CouplingGain, report.coupling_gain);
    sim(CalibrationKpi::WidebandSinr, report.sinr);
    for (const auto& [kpi, curves] : references) {
        for (const auto& [name, ref] : curves) {
            for (std::size_t i = 0; i < ref.values.size(); ++i) {
                out << "reference:" << name << ',' << to_string(kpi) << ',' << format_double(ref.values[i]) << ','
                    << format_double(ref.probabilities[i]) << '\n';
            }
        }
    }
    return out.str();
}

double percentile_of(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw EmptyInput("percentile_of: no samples");
    }
    const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace ranforge
