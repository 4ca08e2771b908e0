#include "ranforge/kpi.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace ranforge;

TEST_CASE("coupling gain") {
    LinkBudget b;
    b.tx_power_dbm = 41.0;
    b.path_loss_db = 101.0;
    CHECK(b.rx_power_dbm() == -60.0);
    CHECK(coupling_gain(b) == -101.0);
    CHECK(coupling_gain(-60.0, 41.0) == -101.0);
    CHECK(coupling_gain(LinkBudget{}) == 0.0);

    b.penetration_db = 12.0;
    b.shadow_db = -3.0;
    b.tx_antenna_gain_dbi = 8.0;
    b.rx_antenna_gain_dbi = 0.0;
    CHECK(b.rx_power_dbm() == 41.0 - 101.0 - 12.0 + 3.0 + 8.0);

    // Independent of transmit power, and shifts one-for-one with path loss.
    const double cg = coupling_gain(b);
    b.tx_power_dbm = 46.0;
    CHECK(coupling_gain(b) == doctest::Approx(cg));
    b.path_loss_db += 7.5;
    CHECK(coupling_gain(b) == doctest::Approx(cg - 7.5));
}

TEST_CASE("wideband SINR") {
    const NoiseModel noise{-81.0, 7.0, 5.0};
    CHECK(noise.effective_dbm() == -81.0);
    CHECK(wideband_sinr(-80.0, {}, noise) == doctest::Approx(1.0));

    const NoiseModel quiet{-400.0, 0.0, 0.0};
    const std::vector<double> same{-80.0};
    CHECK(wideband_sinr(-80.0, same, quiet) == doctest::Approx(0.0));

    const std::vector<double> two{-90.0, -93.0};
    const NoiseModel n100{-100.0, 0.0, 0.0};
    const double expected = 10.0 * std::log10(1e-8 / (1e-9 + std::pow(10.0, -9.3) + 1e-10));
    CHECK(wideband_sinr(-80.0, two, n100) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(wideband_sinr(-80.0, two, n100) == doctest::Approx(7.96).epsilon(1e-3));
}

TEST_CASE("SINR linear/dB consistency and interferer monotonicity") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> p(-120.0, -50.0);
    const NoiseModel noise{-95.0, 7.0, 5.0};
    for (int trial = 0; trial < 200; ++trial) {
        const double s = p(rng);
        std::vector<double> interferers;
        double prev = wideband_sinr(s, interferers, noise);
        for (int k = 0; k < 5; ++k) {
            interferers.push_back(p(rng));
            const double sinr = wideband_sinr(s, interferers, noise);
            CHECK(sinr < prev);
            prev = sinr;
        }
        double sum_mw = 0.0;
        for (double i : interferers) {
            sum_mw += std::pow(10.0, i / 10.0);
        }
        const double linear = std::pow(10.0, s / 10.0) / (sum_mw + std::pow(10.0, -95.0 / 10.0));
        CHECK(std::abs(10.0 * std::log10(linear) - prev) < 1e-9);
    }
}

TEST_CASE("RSRP") {
    CHECK(rsrp(-70.0, 1) == -70.0);
    CHECK(rsrp(-70.0, 600) == doctest::Approx(-97.78).epsilon(1e-4));
    CHECK(rsrp(-70.0, 600) - rsrp(-70.0, 1200) == doctest::Approx(10.0 * std::log10(2.0)));
    CHECK_THROWS_AS(rsrp(-70.0, 0), std::invalid_argument);
}

TEST_CASE("RSRQ") {
    CHECK(rsrq(-90.0, -90.0, 1) == 0.0);
    CHECK(rsrq(-97.0, -70.0, 50) == doctest::Approx(10.0 * std::log10(50.0) - 27.0));
    CHECK(rsrq(-97.0, -70.0, 50) == doctest::Approx(-10.01).epsilon(1e-3));
    CHECK(rsrq(-97.0, -73.0, 50) - rsrq(-97.0, -70.0, 50) == doctest::Approx(3.0));
    CHECK_THROWS_AS(rsrq(-90.0, -90.0, 0), std::invalid_argument);
}
