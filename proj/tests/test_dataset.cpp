#include "ranforge/dataset.hpp"
#include "ranforge/topology.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

using namespace ranforge;

namespace {

const std::vector<Kpi> kAll{Kpi::Rsrp, Kpi::Rsrq, Kpi::Sinr, Kpi::CouplingGain, Kpi::ServingDistance, Kpi::Position};

std::vector<KpiSample> random_trajectories(int ues, int ticks, int cells, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-100.0, 0.0);
    std::uniform_int_distribution<int> cell(0, cells - 1);
    std::vector<KpiSample> out;
    for (int i = 0; i < ues; ++i) {
        for (int k = 0; k < ticks; ++k) {
            KpiSample s;
            s.time_s = std::round(k * 0.1 * 1e9) / 1e9;
            s.ue_id = i;
            s.serving_cell = cell(rng);
            s.position = {u(rng), u(rng)};
            s.rsrp_dbm = u(rng);
            s.rsrq_db = u(rng) / 10.0;
            s.sinr_db = u(rng) / 4.0;
            s.coupling_gain_db = u(rng) - 50.0;
            s.serving_distance_m = -u(rng);
            out.push_back(s);
        }
    }
    return out;
}

int count_lines(const std::string& text) { return static_cast<int>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("time bins") {
    CHECK(time_bin(0.0) == 0);
    CHECK(time_bin(0.9) == 0);
    CHECK(time_bin(1.0) == 1);
    double t = 0.0;
    for (int i = 0; i < 10; ++i) {
        t += 0.1;
    }
    CHECK(t < 1.0);
    CHECK(time_bin(t) == 1);
    CHECK(time_bin(59.9) == 59);
}

TEST_CASE("per-UE binning against a direct average") {
    const auto samples = random_trajectories(4, 35, 6, 1);
    const auto bins = bin_and_average(samples);

    std::map<std::pair<int, int>, std::vector<const KpiSample*>> groups;
    for (const auto& s : samples) {
        groups[{static_cast<int>(std::floor(s.time_s + 1e-9)), s.ue_id}].push_back(&s);
    }
    REQUIRE(bins.size() == groups.size());
    std::size_t i = 0;
    for (const auto& [key, members] : groups) {
        const auto& b = bins[i++];
        CHECK(b.bin == key.first);
        CHECK(b.ue_id == key.second);
        CHECK(b.samples == static_cast<int>(members.size()));
        double rsrp = 0.0;
        double sinr = 0.0;
        double dist = 0.0;
        for (const auto* m : members) {
            rsrp += m->rsrp_dbm;
            sinr += m->sinr_db;
            dist += m->serving_distance_m;
        }
        CHECK(b.mean[kRsrp] == doctest::Approx(rsrp / members.size()).epsilon(1e-12));
        CHECK(b.mean[kSinr] == doctest::Approx(sinr / members.size()).epsilon(1e-12));
        CHECK(b.mean[kServingDistance] == doctest::Approx(dist / members.size()).epsilon(1e-12));
        CHECK(b.serving_cell == members.back()->serving_cell);
        CHECK(b.position == members.back()->position);
    }
    // 35 ticks of 0.1 s: three full bins of 10 and a trailing bin of 5.
    CHECK(bins.back().samples == 5);
    CHECK(bins.front().samples == 10);

    UeBinner streaming;
    for (const auto& s : samples) {
        if (s.ue_id == 2) {
            streaming.add(s);
        }
    }
    std::vector<UeBin> expected;
    std::copy_if(bins.begin(), bins.end(), std::back_inserter(expected), [](const UeBin& b) { return b.ue_id == 2; });
    CHECK(streaming.finish() == expected);
}

TEST_CASE("sector aggregation is invariant to input order") {
    const auto samples = random_trajectories(12, 30, 5, 2);
    auto bins = bin_and_average(samples);
    const auto reference = aggregate_sector(bins, 5, 3);
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(bins.begin(), bins.end(), rng);
        CHECK(aggregate_sector(bins, 5, 3) == reference);
    }
}

TEST_CASE("sector and site means") {
    std::vector<UeBin> bins;
    auto make = [](int bin, int ue, int cell, double rsrp) {
        UeBin b;
        b.bin = bin;
        b.ue_id = ue;
        b.serving_cell = cell;
        b.mean[kRsrp] = rsrp;
        b.samples = 10;
        return b;
    };
    bins.push_back(make(0, 0, 0, -80.0));
    bins.push_back(make(0, 1, 0, -90.0));
    bins.push_back(make(0, 2, 1, -100.0));
    bins.push_back(make(1, 0, 3, -70.0));
    const auto sectors = aggregate_sector(bins, 4, 2);
    CHECK(sectors[0][0].values[kRsrp] == -85.0);
    CHECK_FALSE(sectors[0][0].missing);
    CHECK(sectors[1][0].values[kRsrp] == -100.0);
    CHECK(sectors[2][0].missing);
    CHECK(sectors[0][1].missing);

    const std::vector<int> cell_site{0, 0, 0, 1};
    const auto sites = aggregate_bs(sectors, cell_site, 2);
    // Mean over non-missing sectors, not over UEs.
    CHECK(sites[0][0].values[kRsrp] == -92.5);
    CHECK(sites[1][0].missing);
    CHECK(sites[1][1].values[kRsrp] == -70.0);
    CHECK(sites[0][1].missing);

    // One sector per site: the site series is the sector series.
    const std::vector<int> identity{0, 1, 2, 3};
    CHECK(aggregate_bs(sectors, identity, 4) == sectors);

    CHECK_THROWS_AS(aggregate_sector(bins, 4, 1), ConfigError);
    CHECK_THROWS_AS(aggregate_bs(sectors, std::vector<int>{0, 0}, 1), ConfigError);
}

TEST_CASE("bin labels") {
    const std::vector<int> cell_site{0, 0, 0, 1, 1, 1};
    std::vector<FaultSpec> faults;
    faults.push_back({FaultKind::ExcessivePowerReduction, 4, 10.0, 16.0});
    faults.push_back({FaultKind::InterCellInterference, 5, 10.5, 12.2});
    faults.push_back({FaultKind::TooLateHandover, 0, 58.0, 70.0});
    const auto labels = label_bins(faults, cell_site, 2, 60.0);
    REQUIRE(labels.size() == 2);
    REQUIRE(labels[0].size() == 60);
    for (int b = 0; b < 60; ++b) {
        CHECK(labels[1][static_cast<std::size_t>(b)].anomalous == (b >= 10 && b < 16));
        CHECK(labels[0][static_cast<std::size_t>(b)].anomalous == (b >= 58));
    }
    CHECK(labels[1][10].kinds == std::vector<FaultKind>{FaultKind::ExcessivePowerReduction,
                                                        FaultKind::InterCellInterference});
    CHECK(labels[1][12].kinds.size() == 2);
    CHECK(labels[1][13].kinds == std::vector<FaultKind>{FaultKind::ExcessivePowerReduction});
    CHECK(labeled_fraction(labels) == doctest::Approx(8.0 / 120.0));

    faults.push_back({FaultKind::TooLateHandover, 9, 0.0, 1.0});
    CHECK_THROWS_AS(label_bins(faults, cell_site, 2, 60.0), ConfigError);
}

TEST_CASE("site adjacency") {
    auto positions = [](int rings) {
        std::vector<Vec2> p;
        for (const auto& s : hex_layout(rings, 200.0)) {
            p.push_back(s.position);
        }
        return p;
    };
    CHECK(site_adjacency(positions(1)).size() == 12);
    CHECK(site_adjacency(positions(2)).size() == 42);
    for (const auto& [a, b] : site_adjacency(positions(2))) {
        CHECK(a < b);
    }
    CHECK(site_adjacency(positions(0)).empty());

    std::ostringstream out;
    write_adjacency_csv(out, site_adjacency(positions(1)));
    CHECK(out.str().rfind("bs_a,bs_b\n0,1\n", 0) == 0);
}

TEST_CASE("ue_kpis CSV round trip") {
    const auto bins = bin_and_average(random_trajectories(3, 25, 4, 3));
    std::stringstream all;
    write_ue_csv(all, bins, kAll);
    CHECK(read_ue_csv(all) == bins);

    const std::vector<Kpi> some{Kpi::Sinr};
    std::stringstream partial;
    write_ue_csv(partial, bins, some);
    const auto back = read_ue_csv(partial);
    REQUIRE(back.size() == bins.size());
    CHECK(back[0].mean[kSinr] == bins[0].mean[kSinr]);
    CHECK(std::isnan(back[0].mean[kRsrp]));
    CHECK(std::isnan(back[0].position.x));

    std::stringstream bad("time_s,ue\n");
    CHECK_THROWS_AS(read_ue_csv(bad), IoError);
}

TEST_CASE("bs_kpis dataset") {
    // 2 sites x 2 cells, 4 UEs over 3 s; UE 3 is only seen in the first second.
    std::vector<KpiSample> samples = random_trajectories(3, 30, 4, 4);
    auto extra = random_trajectories(4, 10, 4, 5);
    for (auto& s : extra) {
        if (s.ue_id == 3) {
            samples.push_back(s);
        }
    }
    const auto bins = bin_and_average(samples);

    ExportInput input;
    input.simulation_time_s = 3.0;
    input.kpis = {Kpi::Rsrp, Kpi::Sinr};
    input.cell_site = {0, 0, 1, 1};
    input.site_count = 2;

    std::ostringstream out;
    const auto summary = write_bs_dataset(out, bins, input);
    const auto text = out.str();
    CHECK(text.rfind("time_s,bs_id,rsrp_dbm,rsrq_db,sinr_db,coupling_gain_db,serving_distance_m,is_anomalous,"
                     "fault_kind,missing\n",
                     0) == 0);
    CHECK(count_lines(text) == 1 + 3 * 2);
    CHECK(summary.bins == 3);
    CHECK(summary.sites == 2);
    CHECK(summary.values == 2 * (6 - summary.missing_rows));
    CHECK(text.find("\n0,0,") != std::string::npos);
    CHECK(text.find("\n2,1,") != std::string::npos);

    input.faults.push_back({FaultKind::ExcessivePowerReduction, 2, 0.0, 1.0});
    std::ostringstream over;
    CHECK_THROWS_AS(write_bs_dataset(over, bins, input), ConfigError);

    input.simulation_time_s = 60.0;
    std::ostringstream ok;
    const auto s2 = write_bs_dataset(ok, bins, input);
    CHECK(s2.anomalous_fraction == doctest::Approx(1.0 / 120.0));
    CHECK(ok.str().find("\n0,1,") != std::string::npos);
    CHECK(ok.str().find(",1,excessive_power_reduction,") != std::string::npos);
}
