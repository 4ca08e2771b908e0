#pragma once

// Directory-level workflows behind the command-line tool: compile, calibrate,
// run and export. Each writes only inside its output directory and finishes
// by writing a manifest there.

#include "ranforge/calibration.hpp"
#include "ranforge/dataset.hpp"
#include "ranforge/engine.hpp"
#include "ranforge/scenario.hpp"
#include "ranforge/topology.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace ranforge {

/// The command-line seed wins over the scenario's; having neither is an error.
std::uint64_t resolve_seed(const ScenarioSpec& spec, std::optional<std::uint64_t> cli_seed);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

struct CompileOutput {
    ScenarioSpec spec;
    std::uint64_t seed = 0;
    X2Plan plan;
    Deployment deployment;
    std::string config;          // scenario.ini
    std::string deployment_csv;  // deployment.csv
    std::string normalized;      // scenario.normalized.yaml
};

CompileOutput compile_scenario(const ScenarioSpec& spec, std::uint64_t seed);

CompileOutput compile_to_dir(const std::filesystem::path& scenario, const std::filesystem::path& out_dir,
                             std::optional<std::uint64_t> seed);

struct CalibrateOptions {
    int drops = 50;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    std::optional<std::filesystem::path> reference_dir;
    std::optional<Thresholds> thresholds;  // environment defaults when unset
};

/// Writes report.json, cdf_overlay.csv and calibration_samples.csv.
CalibrationReport calibrate_to_dir(const std::filesystem::path& scenario, const std::filesystem::path& out_dir,
                                   const CalibrateOptions& options);

struct RunOptions {
    std::optional<std::uint64_t> seed;
    int jobs = 1;
};

struct RunSummary {
    int ticks = 0;
    std::int64_t samples = 0;
    std::size_t handovers = 0;
    std::size_t refused = 0;
    double anomaly_fraction = 0.0;
};

/// Timeline run. Writes run_meta.json, ue_kpis.csv (per-UE one-second bins),
/// handovers.csv, refused_handovers.csv and faults.csv.
RunSummary run_to_dir(const std::filesystem::path& scenario, const std::filesystem::path& out_dir,
                      const RunOptions& options);

/// Aggregates a run directory into bs_kpis.csv, adjacency.csv and ue_kpis.csv.
ExportSummary export_to_dir(const std::filesystem::path& run_dir, const std::filesystem::path& out_dir);

/// Path loss and LOS probability versus distance for one environment.
std::string channel_table(Environment env, double min_d2d, double max_d2d, double step);

}  // namespace ranforge
