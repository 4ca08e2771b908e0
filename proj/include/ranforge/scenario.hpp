#pragma once

// Scenario compiler: YAML scenario description -> validated ScenarioSpec,
// X2 link/port plan, and the long-form emitted configuration.

#include "ranforge/common.hpp"
#include "ranforge/environment.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ranforge {

struct Deployment;

struct SiteDecl {
    Vec2 position;
    int sector_count = 3;
    std::vector<double> sector_azimuths;  // degrees, one per sector

    friend bool operator==(const SiteDecl&, const SiteDecl&) = default;
};

struct BackgroundDecl {
    int cell_count = 0;
    int users_per_cell = 10;
    Box area;

    friend bool operator==(const BackgroundDecl&, const BackgroundDecl&) = default;
};

using SitePair = std::pair<int, int>;

struct X2Policy {
    bool all_to_all = true;
    std::vector<SitePair> pairs;  // used when !all_to_all

    friend bool operator==(const X2Policy&, const X2Policy&) = default;
};

struct FaultSpec {
    FaultKind kind = FaultKind::ExcessivePowerReduction;
    int cell = 0;
    double start_s = 0.0;
    double end_s = 0.0;
    double power_drop_db = 20.0;       // ExcessivePowerReduction
    double hysteresis_db = 9.0;        // TooLateHandover
    double ttt_s = 1.0;                // TooLateHandover
    double interference_dbm = -90.0;   // InterCellInterference

    /// Window membership with a small tolerance for tick-accumulated clocks.
    bool active_at(double t) const { return t >= start_s - 1e-9 && t < end_s - 1e-9; }
    friend bool operator==(const FaultSpec&, const FaultSpec&) = default;
};

struct ScenarioSpec {
    Environment environment = Environment::UrbanEmbb;
    double simulation_time_s = 0.0;
    std::vector<SiteDecl> sites;
    X2Policy x2;
    int users_per_sector = 10;
    double max_ue_distance_m = 50.0;
    BackgroundDecl background;
    std::vector<Kpi> kpis;  // sorted, unique
    std::vector<FaultSpec> faults;
    std::optional<std::uint64_t> seed;
    RadioProfile radio;

    int cell_count() const;
    int ue_count() const { return cell_count() * users_per_sector; }
    /// Site owning global cell index `cell` (cells are numbered site-major).
    int site_of_cell(int cell) const;
    bool has_kpi(Kpi kpi) const;

    friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

/// Ports are consecutive per site, starting at 0, ordered by ascending peer.
struct X2Port {
    int port = 0;
    int peer_site = 0;

    friend bool operator==(const X2Port&, const X2Port&) = default;
};

struct X2Plan {
    std::vector<SitePair> links;                // (lo, hi), ascending
    std::vector<std::vector<X2Port>> port_map;  // indexed by site

    bool linked(int site_a, int site_b) const;
    friend bool operator==(const X2Plan&, const X2Plan&) = default;
};

inline constexpr double kMaxAnomalyFraction = 0.02;

ScenarioSpec parse_scenario(std::string_view yaml_text);
ScenarioSpec load_scenario(const std::filesystem::path& path);

X2Plan expand_x2(const ScenarioSpec& spec);

/// Compact YAML rendering of a spec; parse_scenario() reads it back to an
/// equal spec.
std::string summarize_scenario(const ScenarioSpec& spec);

/// Long-form ini-style configuration with one stanza per site, sector, X2
/// port table, UE, background entity and fault.
std::string emit_config(const ScenarioSpec& spec, const X2Plan& plan, const Deployment& deployment);

/// Number of one-second bins covering the simulation.
int bin_count(double simulation_time_s);

/// Half-open range of one-second bins overlapped by a fault window.
std::pair<int, int> fault_bins(const FaultSpec& fault, double simulation_time_s);

/// Fraction of (site, bin) pairs labeled anomalous by the scenario's faults.
double anomaly_fraction(const ScenarioSpec& spec);

}  // namespace ranforge
