#include "ranforge/topology.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

using namespace ranforge;

namespace {

double min_pairwise(const std::vector<Site>& sites) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sites.size(); ++i) {
        for (std::size_t j = i + 1; j < sites.size(); ++j) {
            best = std::min(best, distance(sites[i].position, sites[j].position));
        }
    }
    return best;
}

}  // namespace

TEST_CASE("hex layout site counts and spacing") {
    CHECK(hex_layout(0, 200.0).size() == 1);
    CHECK(hex_layout(0, 200.0)[0].position == Vec2{0.0, 0.0});
    for (int rings = 1; rings <= 4; ++rings) {
        const auto sites = hex_layout(rings, 200.0);
        CHECK(sites.size() == static_cast<std::size_t>(1 + 3 * rings * (rings + 1)));
        CHECK(min_pairwise(sites) == doctest::Approx(200.0).epsilon(1e-9));
    }
}

TEST_CASE("hex layout against a brute-force lattice scan") {
    // Oracle: every point of the triangular lattice i*a + j*b within ring
    // distance of the origin, where hex ring distance is max(|i|, |j|, |i + j|).
    const double isd = 1732.0;
    const Vec2 a{isd, 0.0};
    const Vec2 b{isd / 2.0, isd * std::sqrt(3.0) / 2.0};
    for (int rings = 0; rings <= 3; ++rings) {
        std::set<std::pair<long long, long long>> expected;
        for (int i = -rings; i <= rings; ++i) {
            for (int j = -rings; j <= rings; ++j) {
                if (std::max({std::abs(i), std::abs(j), std::abs(i + j)}) <= rings) {
                    const double x = i * a.x + j * b.x;
                    const double y = i * a.y + j * b.y;
                    expected.insert({std::llround(x * 1000.0), std::llround(y * 1000.0)});
                }
            }
        }
        std::set<std::pair<long long, long long>> actual;
        for (const auto& s : hex_layout(rings, isd)) {
            actual.insert({std::llround(s.position.x * 1000.0), std::llround(s.position.y * 1000.0)});
        }
        CHECK(actual == expected);
    }
    const auto seven = hex_layout(1, isd);
    for (std::size_t i = 1; i < seven.size(); ++i) {
        CHECK(distance(seven[i].position, seven[0].position) == doctest::Approx(isd).epsilon(1e-12));
    }
}

TEST_CASE("sectorize") {
    const auto radio = default_profile(Environment::UrbanEmbb);
    const std::vector<double> az{30.0, 150.0, 270.0};
    CHECK(sectorize(hex_layout(2, 200.0), az, radio).size() == 57);
    CHECK(sectorize(hex_layout(1, 200.0), az, radio).size() == 21);
    const auto one = hex_layout(0, 200.0);
    const std::vector<double> single{30.0};
    const auto cells = sectorize(one, single, radio);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].tx_power_dbm == 41.0);
    CHECK(cells[0].carrier_ghz == 4.0);
    CHECK(cells[0].bandwidth_mhz == 10.0);
    CHECK(cells[0].azimuth_deg == 30.0);
}

TEST_CASE("ue height support and mean") {
    // Exact expectation by enumerating the two-stage draw.
    double expected = 0.0;
    for (int floors = 4; floors <= 8; ++floors) {
        for (int f = 1; f <= floors; ++f) {
            expected += (3.0 * (f - 1) + 1.5) / 5.0 / floors;
        }
    }
    CHECK(expected == doctest::Approx(9.0));

    auto rng = make_stream(3, Stream::UeDrop);
    std::set<double> support;
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double h = ue_height(rng);
        support.insert(h);
        sum += h;
    }
    CHECK(support == std::set<double>{1.5, 4.5, 7.5, 10.5, 13.5, 16.5, 19.5, 22.5});
    CHECK(std::abs(sum / n - expected) < 0.1);
}

TEST_CASE("ue drops") {
    const auto radio = default_profile(Environment::UrbanEmbb);
    const Site site{0, {100.0, -50.0}, 25.0};
    auto rng = make_stream(9, Stream::UeDrop);
    CHECK(drop_ues(site, 0, 10.0, 50.0, 0.8, radio, rng).empty());
    CHECK(drop_ues(site, 10, 10.0, 50.0, 0.8, radio, rng).size() == 10);

    const auto ues = drop_ues(site, 10000, 10.0, 50.0, radio.indoor_fraction, radio, rng);
    int indoor = 0;
    int high = 0;
    for (const auto& ue : ues) {
        const double d = distance(ue.position, site.position);
        CHECK(d >= 10.0 - 1e-9);
        CHECK(d <= 50.0 + 1e-9);
        if (ue.indoor) {
            ++indoor;
            high += ue.penetration_class == PenetrationClass::High ? 1 : 0;
            CHECK(ue.speed_kmh == 3.0);
            CHECK(ue.indoor_distance_m >= 0.0);
            CHECK(ue.indoor_distance_m <= std::min(25.0, d));
            const double k = (ue.height_m - 1.5) / 3.0;
            CHECK(k == std::round(k));
            CHECK(ue.height_m >= 1.5);
            CHECK(ue.height_m <= 22.5);
        } else {
            CHECK(ue.height_m == 1.5);
            CHECK(ue.speed_kmh == 30.0);
            CHECK(ue.indoor_distance_m == 0.0);
        }
    }
    CHECK(std::abs(indoor / 10000.0 - 0.8) < 0.02);
    CHECK(std::abs(static_cast<double>(high) / indoor - 0.2) < 0.02);
}

TEST_CASE("rural drops are all low loss at pedestrian height") {
    const auto radio = default_profile(Environment::RuralEmbb);
    const Site site{0, {0.0, 0.0}, 35.0};
    auto rng = make_stream(4, Stream::UeDrop);
    int indoor = 0;
    for (const auto& ue : drop_ues(site, 5000, 10.0, 200.0, radio.indoor_fraction, radio, rng)) {
        CHECK(ue.penetration_class == PenetrationClass::Low);
        CHECK(ue.height_m == 1.5);
        CHECK(ue.speed_kmh == (ue.indoor ? 3.0 : 120.0));
        indoor += ue.indoor ? 1 : 0;
    }
    CHECK(std::abs(indoor / 5000.0 - 0.5) < 0.03);
}

TEST_CASE("background placement") {
    auto rng = make_stream(1, Stream::Background);
    CHECK(place_background({0, 10, {{0, 0}, {100, 100}}}, rng).empty());
    const auto two = place_background({2, 10, {{0, 0}, {100, 100}}}, rng);
    REQUIRE(two.size() == 2);
    CHECK(two[0].users.size() + two[1].users.size() == 20);

    const Box area{{0, 0}, {100, 100}};
    const auto many = place_background({1, 1000, area}, rng);
    CHECK(area.contains(many[0].position, 0.0));
    for (const auto& u : many[0].users) {
        CHECK(area.contains(u, 0.0));
    }
}

TEST_CASE("inner sites are the seven nearest the centroid") {
    const auto sites = hex_layout(2, 200.0);
    CHECK(inner_sites(sites, 7) == std::vector<int>{0, 1, 2, 3, 4, 5, 6});
    CHECK(inner_sites(sites, 1) == std::vector<int>{0});
    CHECK(min_site_distance(sites) == doctest::Approx(200.0));
}

TEST_CASE("deployment is a pure function of the seed") {
    ScenarioSpec spec;
    spec.simulation_time_s = 1.0;
    spec.radio = default_profile(Environment::UrbanEmbb);
    for (const auto& s : hex_layout(1, 200.0)) {
        spec.sites.push_back({s.position, 3, {30.0, 150.0, 270.0}});
    }
    spec.background = {2, 10, {{-300, -300}, {300, 300}}};

    const auto a = build_deployment(spec, 42);
    const auto b = build_deployment(spec, 42);
    const auto c = build_deployment(spec, 43);
    CHECK(a == b);
    CHECK_FALSE(a == c);
    CHECK(a.ues.size() == 210);
    CHECK(a.cells.size() == 21);
    for (const auto& ue : a.ues) {
        const auto& home = a.sites[static_cast<std::size_t>(ue.home_site)];
        const double d = distance(ue.position, home.position);
        CHECK(d >= 10.0 - 1e-9);
        CHECK(d <= spec.max_ue_distance_m + 1e-9);
        CHECK(a.bounds.contains(ue.position));
    }

    // Drop d of UE i never depends on other drops.
    const auto d1 = build_deployment(spec, 42, 1);
    CHECK_FALSE(d1.ues[0].position == a.ues[0].position);
    CHECK(d1 == build_deployment(spec, 42, 1));

    std::ostringstream csv;
    write_deployment_csv(a, csv);
    const auto text = csv.str();
    CHECK(text.rfind("entity_type,id,x,y,height,attrs\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 7 + 21 + 210 + 2 + 20);
}
