#include "ranforge/manifest.hpp"
#include "ranforge/pipeline.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ranforge;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("ranforge_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const char* kSmallRun = R"(environment: urban_embb
simulation_time_s: 20
seed: 5
users: {per_sector: 2}
kpis: [rsrp, sinr, position]
sites:
  - {x: 0, y: 0}
  - {x: 200, y: 0}
  - {x: 100, y: 173.205}
  - {x: -100, y: 173.205}
  - {x: -200, y: 0}
  - {x: -100, y: -173.205}
  - {x: 100, y: -173.205}
faults:
  - {type: excessive_power_reduction, cell: 0, start_s: 4, end_s: 6, magnitude_db: 20}
)";

}  // namespace

TEST_CASE("sha256 known answers") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    const auto dir = scratch_dir("sha");
    std::string big(200000, 'x');
    std::ofstream(dir / "big.bin", std::ios::binary) << big;
    CHECK(sha256_file(dir / "big.bin") == sha256_hex(big));
    CHECK_THROWS_AS(sha256_file(dir / "missing"), IoError);
}

TEST_CASE("manifest inventory and round trip") {
    const auto dir = scratch_dir("manifest");
    fs::create_directories(dir / "sub");
    write_file_atomic(dir / "b.csv", "b\n");
    write_file_atomic(dir / "a.csv", "aa\n");
    write_file_atomic(dir / "sub" / "c.txt", "c");
    const auto m = write_manifest(dir, "run", sha256_hex("scenario"), 42);
    REQUIRE(m.files.size() == 3);
    CHECK(m.files[0].path == "a.csv");
    CHECK(m.files[0].bytes == 3);
    CHECK(m.files[0].sha256 == sha256_hex("aa\n"));
    CHECK(m.files[2].path == "sub/c.txt");
    CHECK(m.tool_version == kToolVersion);
    CHECK(m.created_utc.size() == 20);

    const auto back = RunManifest::from_json(read_text_file(dir / kManifestName));
    CHECK(back.seed == 42);
    CHECK(back.command == "run");
    CHECK(back.files.size() == 3);
    CHECK(back.files[1].sha256 == m.files[1].sha256);
    // Re-inventory skips the manifest itself.
    CHECK(inventory(dir).size() == 3);
    CHECK_THROWS_AS(RunManifest::from_json("{}"), IoError);
}

TEST_CASE("seed resolution") {
    ScenarioSpec spec;
    CHECK_THROWS_AS(resolve_seed(spec, std::nullopt), ConfigError);
    CHECK(resolve_seed(spec, 3) == 3);
    spec.seed = 9;
    CHECK(resolve_seed(spec, std::nullopt) == 9);
    CHECK(resolve_seed(spec, 3) == 3);
}

TEST_CASE("compile, run and export end to end") {
    const auto root = scratch_dir("pipeline");
    const auto scenario = root / "small.yaml";
    write_text_file(scenario, kSmallRun);

    const auto compiled = compile_to_dir(scenario, root / "compiled", std::nullopt);
    CHECK(compiled.seed == 5);
    for (const char* f : {"scenario.ini", "deployment.csv", "scenario.normalized.yaml", "manifest.json"}) {
        CHECK(fs::exists(root / "compiled" / f));
    }
    CHECK(parse_scenario(compiled.normalized) == compiled.spec);

    const auto run = run_to_dir(scenario, root / "run", RunOptions{std::nullopt, 2});
    CHECK(run.ticks == 200);
    CHECK(run.samples == 200 * 42);
    const auto meta = nlohmann::json::parse(read_text_file(root / "run" / "run_meta.json"));
    CHECK(meta["seed"] == 5);
    CHECK(meta["sites"].size() == 7);

    std::istringstream ue_csv(read_text_file(root / "run" / "ue_kpis.csv"));
    const auto bins = read_ue_csv(ue_csv);
    CHECK(bins.size() == 20u * 42u);
    for (const auto& b : bins) {
        CHECK(b.samples == 10);
    }

    const auto summary = export_to_dir(root / "run", root / "dataset");
    CHECK(summary.bins == 20);
    CHECK(summary.sites == 7);
    CHECK(summary.anomalous_fraction == doctest::Approx(2.0 / 140.0));
    for (const char* f : {"bs_kpis.csv", "adjacency.csv", "ue_kpis.csv", "manifest.json"}) {
        CHECK(fs::exists(root / "dataset" / f));
    }
    CHECK(read_text_file(root / "dataset" / "ue_kpis.csv") == read_text_file(root / "run" / "ue_kpis.csv"));

    // A run directory whose data no longer matches its manifest is rejected.
    write_text_file(root / "run" / "ue_kpis.csv", "tampered\n");
    CHECK_THROWS(export_to_dir(root / "run", root / "dataset2"));
}

TEST_CASE("channel table") {
    const auto csv = channel_table(Environment::UrbanEmbb, 10.0, 100.0, 10.0);
    CHECK(csv.rfind("d2d_m,los_probability,path_loss_los_db,path_loss_nlos_db,within_validity_los,"
                    "within_validity_nlos\n",
                    0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
}
