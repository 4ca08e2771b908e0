// ranforge: scenario compiler, calibration runner and dataset generator.

#include "ranforge/manifest.hpp"
#include "ranforge/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <thread>

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kRuntime = 3 };

int fail(int code, std::string_view category, std::string_view message) {
    std::cerr << "ranforge: error[" << category << "]: " << message << '\n';
    return code;
}

int default_jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

}  // namespace

int main(int argc, char** argv) {
    using namespace ranforge;

    CLI::App app{"ranforge: 5G RAN system-level simulator and dataset generator"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    std::string scenario;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int jobs = default_jobs();

    auto* compile = app.add_subcommand("compile", "Validate a scenario and emit its long-form configuration");
    bool dump_deployment = false;
    compile->add_option("scenario", scenario, "Scenario YAML file")->required()->check(CLI::ExistingFile);
    compile->add_option("-o,--output", out_dir, "Output directory")->required();
    compile->add_option("--seed", seed, "Seed (overrides the scenario's)");
    compile->add_flag("--dump-deployment", dump_deployment, "Also print the deployment CSV to stdout");

    auto* calibrate = app.add_subcommand("calibrate", "Snapshot Monte Carlo calibration with KS scoring");
    int drops = 50;
    std::optional<std::string> reference;
    std::optional<double> threshold_cg;
    std::optional<double> threshold_sinr;
    calibrate->add_option("scenario", scenario, "Scenario YAML file")->required()->check(CLI::ExistingFile);
    calibrate->add_option("-o,--output", out_dir, "Output directory")->required();
    calibrate->add_option("--drops", drops, "Independent UE drops")->check(CLI::PositiveNumber);
    calibrate->add_option("--seed", seed, "Seed (overrides the scenario's)");
    calibrate->add_option("--reference", reference, "Directory of reference percentile curves")
        ->check(CLI::ExistingDirectory);
    calibrate->add_option("--threshold-cg", threshold_cg, "KS pass threshold for coupling gain");
    calibrate->add_option("--threshold-sinr", threshold_sinr, "KS pass threshold for SINR");
    calibrate->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    auto* run = app.add_subcommand("run", "Time-stepped run with mobility, handover and faults");
    run->add_option("scenario", scenario, "Scenario YAML file")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--output", out_dir, "Output directory")->required();
    run->add_option("--seed", seed, "Seed (overrides the scenario's)");
    run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    auto* export_cmd = app.add_subcommand("export", "Aggregate a run into per-base-station labeled series");
    std::string run_dir;
    export_cmd->add_option("run-dir", run_dir, "Directory written by `ranforge run`")
        ->required()
        ->check(CLI::ExistingDirectory);
    export_cmd->add_option("-o,--output", out_dir, "Dataset directory")->required();

    auto* table = app.add_subcommand("channel-table", "Path loss and LOS probability versus distance");
    std::string env_name = "urban_embb";
    double min_d = 10.0;
    double max_d = 5000.0;
    double step = 10.0;
    std::optional<std::string> table_out;
    table->add_option("--env", env_name, "urban_embb or rural_embb");
    table->add_option("--min", min_d, "First distance (m)");
    table->add_option("--max", max_d, "Last distance (m)");
    table->add_option("--step", step, "Distance step (m)");
    table->add_option("-o,--output", table_out, "CSV file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (compile->parsed()) {
            const auto out = compile_to_dir(scenario, out_dir, seed);
            if (dump_deployment) {
                std::cout << out.deployment_csv;
            }
            std::cerr << "compiled " << out.spec.sites.size() << " sites, " << out.deployment.cells.size()
                      << " cells, " << out.deployment.ues.size() << " UEs into " << out_dir << '\n';
        } else if (calibrate->parsed()) {
            CalibrateOptions options;
            options.drops = drops;
            options.seed = seed;
            options.jobs = jobs;
            if (reference) {
                options.reference_dir = *reference;
            }
            if (threshold_cg || threshold_sinr) {
                auto t = default_thresholds(parse_scenario(read_text_file(scenario)).environment);
                t.coupling_gain = threshold_cg.value_or(t.coupling_gain);
                t.sinr = threshold_sinr.value_or(t.sinr);
                options.thresholds = t;
            }
            const auto report = calibrate_to_dir(scenario, out_dir, options);
            std::cerr << "calibration: " << report.retained << " of " << report.generated << " samples retained\n";
            for (const auto& r : report.results) {
                std::cerr << "  KS " << to_string(r.kpi) << " vs " << r.reference_name << " = "
                          << format_fixed(r.statistic, 4) << (r.passed() ? " (pass)" : " (FAIL)") << '\n';
            }
            if (report.results.empty()) {
                std::cerr << "  no reference curves given; wrote the simulated CDFs only\n";
            }
        } else if (run->parsed()) {
            RunOptions options;
            options.seed = seed;
            options.jobs = jobs;
            const auto s = run_to_dir(scenario, out_dir, options);
            std::cerr << "run: " << s.ticks << " ticks, " << s.samples << " samples, " << s.handovers
                      << " handovers, " << s.refused << " refused\n";
        } else if (export_cmd->parsed()) {
            const auto s = export_to_dir(run_dir, out_dir);
            std::cerr << "export: " << s.sites << " base stations x " << s.bins << " bins, " << s.values
                      << " values, anomalous fraction " << format_fixed(s.anomalous_fraction, 4) << '\n';
        } else if (table->parsed()) {
            const auto env = parse_environment(env_name);
            if (!env) {
                return fail(kUsage, "usage", "unknown environment '" + env_name + "'");
            }
            const auto csv = channel_table(*env, min_d, max_d, step);
            if (table_out) {
                write_text_file(*table_out, csv);
            } else {
                std::cout << csv;
            }
        }
    } catch (const SchemaError& e) {
        return fail(kValidation, "schema", e.what());
    } catch (const ValidationError& e) {
        return fail(kValidation, "validation", e.what());
    } catch (const ConfigError& e) {
        return fail(kValidation, "config", e.what());
    } catch (const MissingReference& e) {
        return fail(kRuntime, "missing-reference", e.what());
    } catch (const IoError& e) {
        return fail(kRuntime, "io", e.what());
    } catch (const std::exception& e) {
        return fail(kRuntime, "runtime", e.what());
    }
    return kOk;
}
