#include "ranforge/pipeline.hpp"

#include "ranforge/manifest.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ranforge {

namespace fs = std::filesystem;

namespace {

void prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string());
    }
}

nlohmann::ordered_json fault_json(const FaultSpec& f) {
    nlohmann::ordered_json j;
    j["kind"] = std::string(to_string(f.kind));
    j["cell"] = f.cell;
    j["start_s"] = f.start_s;
    j["end_s"] = f.end_s;
    j["power_drop_db"] = f.power_drop_db;
    j["hysteresis_db"] = f.hysteresis_db;
    j["ttt_s"] = f.ttt_s;
    j["interference_dbm"] = f.interference_dbm;
    return j;
}

FaultSpec fault_from_json(const nlohmann::json& j) {
    FaultSpec f;
    const auto kind = parse_fault_kind(j.at("kind").get<std::string>());
    if (!kind) {
        throw IoError("run_meta.json: unknown fault kind");
    }
    f.kind = *kind;
    f.cell = j.at("cell").get<int>();
    f.start_s = j.at("start_s").get<double>();
    f.end_s = j.at("end_s").get<double>();
    f.power_drop_db = j.at("power_drop_db").get<double>();
    f.hysteresis_db = j.at("hysteresis_db").get<double>();
    f.ttt_s = j.at("ttt_s").get<double>();
    f.interference_dbm = j.at("interference_dbm").get<double>();
    return f;
}

template <typename Event>
std::string events_csv(const std::vector<Event>& events) {
    std::ostringstream out;
    out << "time_s,ue_id,from_cell,to_cell\n";
    for (const auto& e : events) {
        out << format_double(e.time_s) << ',' << e.ue_id << ',' << e.from_cell << ',' << e.to_cell << '\n';
    }
    return out.str();
}

}  // namespace

std::uint64_t resolve_seed(const ScenarioSpec& spec, std::optional<std::uint64_t> cli_seed) {
    if (cli_seed) {
        return *cli_seed;
    }
    if (spec.seed) {
        return *spec.seed;
    }
    throw ConfigError("no seed: set `seed` in the scenario or pass --seed");
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.flush()) {
        throw IoError("write failed: " + path.string());
    }
}

CompileOutput compile_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
    CompileOutput out;
    out.spec = spec;
    out.seed = seed;
    out.plan = expand_x2(spec);
    out.deployment = build_deployment(spec, seed);
    out.config = emit_config(spec, out.plan, out.deployment);
    std::ostringstream dump;
    write_deployment_csv(out.deployment, dump);
    out.deployment_csv = dump.str();
    out.normalized = summarize_scenario(spec);
    return out;
}

CompileOutput compile_to_dir(const fs::path& scenario, const fs::path& out_dir, std::optional<std::uint64_t> seed) {
    const std::string text = read_text_file(scenario);
    const auto spec = parse_scenario(text);
    const auto resolved = resolve_seed(spec, seed);
    auto out = compile_scenario(spec, resolved);
    prepare_dir(out_dir);
    write_text_file(out_dir / "scenario.ini", out.config);
    write_text_file(out_dir / "deployment.csv", out.deployment_csv);
    write_text_file(out_dir / "scenario.normalized.yaml", out.normalized);
    write_manifest(out_dir, "compile", sha256_hex(text), resolved);
    return out;
}

CalibrationReport calibrate_to_dir(const fs::path& scenario, const fs::path& out_dir, const CalibrateOptions& options) {
    const std::string text = read_text_file(scenario);
    const auto spec = parse_scenario(text);
    const auto seed = resolve_seed(spec, options.seed);

    ReferenceSet refs;
    if (options.reference_dir) {
        refs = load_reference_dir(*options.reference_dir);
    }
    const auto snap = run_snapshot(spec, options.drops, seed, options.jobs);
    const auto thresholds = options.thresholds ? *options.thresholds : default_thresholds(spec.environment);
    auto report = calibration_report(spec.environment, snap.samples, refs, thresholds);
    report.drops = options.drops;
    report.seed = seed;
    report.generated = snap.generated;
    report.out_of_range_links = snap.out_of_range_links;

    prepare_dir(out_dir);
    write_text_file(out_dir / "report.json", report_json(report));
    write_text_file(out_dir / "cdf_overlay.csv", overlay_csv(report, refs));
    std::ostringstream samples;
    samples << "drop,ue_id,serving_cell,coupling_gain_db,sinr_db\n";
    for (const auto& s : snap.samples) {
        samples << s.drop << ',' << s.ue_id << ',' << s.serving_cell << ',' << format_double(s.coupling_gain_db) << ','
                << format_double(s.sinr_db) << '\n';
    }
    write_text_file(out_dir / "calibration_samples.csv", samples.str());
    write_manifest(out_dir, "calibrate", sha256_hex(text), seed);
    return report;
}

RunSummary run_to_dir(const fs::path& scenario, const fs::path& out_dir, const RunOptions& options) {
    const std::string text = read_text_file(scenario);
    const auto spec = parse_scenario(text);
    const auto seed = resolve_seed(spec, options.seed);

    std::vector<std::vector<UeBin>> per_ue(static_cast<std::size_t>(spec.ue_count()));
    const auto result = run_timeline(
        spec, seed,
        [&](int ue_id, std::span<const KpiSample> samples) {
            UeBinner binner;
            for (const auto& s : samples) {
                binner.add(s);
            }
            per_ue[static_cast<std::size_t>(ue_id)] = binner.finish();
        },
        options.jobs);

    std::vector<UeBin> bins;
    for (auto& v : per_ue) {
        bins.insert(bins.end(), v.begin(), v.end());
    }
    std::sort(bins.begin(), bins.end(),
              [](const UeBin& a, const UeBin& b) { return a.bin < b.bin || (a.bin == b.bin && a.ue_id < b.ue_id); });

    prepare_dir(out_dir);

    nlohmann::ordered_json meta;
    meta["environment"] = std::string(to_string(spec.environment));
    meta["simulation_time_s"] = spec.simulation_time_s;
    meta["tick_s"] = spec.radio.tick_s;
    meta["seed"] = seed;
    auto kpis = nlohmann::ordered_json::array();
    for (auto k : spec.kpis) {
        kpis.push_back(std::string(to_string(k)));
    }
    meta["kpis"] = kpis;
    auto sites = nlohmann::ordered_json::array();
    for (const auto& s : spec.sites) {
        sites.push_back({s.position.x, s.position.y});
    }
    meta["sites"] = sites;
    auto cell_site = nlohmann::ordered_json::array();
    for (int c = 0; c < spec.cell_count(); ++c) {
        cell_site.push_back(spec.site_of_cell(c));
    }
    meta["cell_site"] = cell_site;
    auto faults = nlohmann::ordered_json::array();
    for (const auto& f : spec.faults) {
        faults.push_back(fault_json(f));
    }
    meta["faults"] = faults;
    write_text_file(out_dir / "run_meta.json", meta.dump(2) + "\n");

    std::ostringstream ue_csv;
    write_ue_csv(ue_csv, bins, spec.kpis);
    write_text_file(out_dir / "ue_kpis.csv", ue_csv.str());
    write_text_file(out_dir / "handovers.csv", events_csv(result.handovers));
    write_text_file(out_dir / "refused_handovers.csv", events_csv(result.refused));

    std::ostringstream faults_csv;
    faults_csv << "kind,cell,site,start_s,end_s\n";
    for (const auto& l : result.labels) {
        faults_csv << to_string(l.kind) << ',' << l.cell << ',' << l.site << ',' << format_double(l.start_s) << ','
                   << format_double(l.end_s) << '\n';
    }
    write_text_file(out_dir / "faults.csv", faults_csv.str());
    write_manifest(out_dir, "run", sha256_hex(text), seed);

    RunSummary summary;
    summary.ticks = result.ticks;
    summary.samples = result.samples;
    summary.handovers = result.handovers.size();
    summary.refused = result.refused.size();
    summary.anomaly_fraction = anomaly_fraction(spec);
    return summary;
}

ExportSummary export_to_dir(const fs::path& run_dir, const fs::path& out_dir) {
    const auto manifest = RunManifest::from_json(read_text_file(run_dir / kManifestName));
    const std::string ue_text = read_text_file(run_dir / "ue_kpis.csv");
    const auto listed = std::find_if(manifest.files.begin(), manifest.files.end(),
                                     [](const ManifestEntry& e) { return e.path == "ue_kpis.csv"; });
    if (listed == manifest.files.end() || listed->sha256 != sha256_hex(ue_text)) {
        throw IoError(run_dir.string() + ": ue_kpis.csv does not match the run manifest");
    }

    ExportInput input;
    try {
        const auto meta = nlohmann::json::parse(read_text_file(run_dir / "run_meta.json"));
        input.simulation_time_s = meta.at("simulation_time_s").get<double>();
        for (const auto& k : meta.at("kpis")) {
            const auto kpi = parse_kpi(k.get<std::string>());
            if (!kpi) {
                throw IoError("run_meta.json: unknown kpi");
            }
            input.kpis.push_back(*kpi);
        }
        input.cell_site = meta.at("cell_site").get<std::vector<int>>();
        input.site_count = static_cast<int>(meta.at("sites").size());
        for (const auto& f : meta.at("faults")) {
            input.faults.push_back(fault_from_json(f));
        }
        std::vector<Vec2> sites;
        for (const auto& s : meta.at("sites")) {
            sites.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
        }

        std::istringstream ue_in(ue_text);
        const auto bins = read_ue_csv(ue_in);

        prepare_dir(out_dir);
        std::ostringstream bs_csv;
        const auto summary = write_bs_dataset(bs_csv, bins, input);
        write_text_file(out_dir / "bs_kpis.csv", bs_csv.str());
        std::ostringstream adj;
        write_adjacency_csv(adj, site_adjacency(sites));
        write_text_file(out_dir / "adjacency.csv", adj.str());
        write_text_file(out_dir / "ue_kpis.csv", ue_text);
        write_manifest(out_dir, "export", manifest.scenario_sha256, manifest.seed);
        return summary;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("run_meta.json: ") + e.what());
    }
}

std::string channel_table(Environment env, double min_d2d, double max_d2d, double step) {
    if (!(step > 0.0) || !(max_d2d >= min_d2d) || !(min_d2d > 0.0)) {
        throw ConfigError("channel-table needs 0 < min <= max and step > 0");
    }
    const auto radio = default_profile(env);
    const auto params = PropagationParams::from(radio);
    const double ue_h = radio.outdoor_ue_height_m;
    std::ostringstream out;
    out << "d2d_m,los_probability,path_loss_los_db,path_loss_nlos_db,within_validity_los,within_validity_nlos\n";
    const auto n = static_cast<long>(std::floor((max_d2d - min_d2d) / step + 1e-9));
    for (long i = 0; i <= n; ++i) {
        const double d = min_d2d + static_cast<double>(i) * step;
        const auto geom = LinkGeometry::between({0.0, 0.0}, radio.bs_height_m, {d, 0.0}, ue_h, 0.0, radio.downtilt_deg);
        out << format_double(d) << ',' << format_double(los_probability(env, d, ue_h)) << ','
            << format_fixed(path_loss(env, true, geom, radio.carrier_ghz, params), 3) << ','
            << format_fixed(path_loss(env, false, geom, radio.carrier_ghz, params), 3) << ','
            << (within_validity(env, true, d) ? 1 : 0) << ',' << (within_validity(env, false, d) ? 1 : 0) << '\n';
    }
    return out.str();
}

}  // namespace ranforge
