#pragma once

// Per-link and per-UE radio KPIs. All power quantities are dB/dBm unless the
// name says otherwise.

#include "ranforge/common.hpp"

#include <span>

namespace ranforge {

struct LinkBudget {
    double tx_power_dbm = 0.0;
    double path_loss_db = 0.0;
    double penetration_db = 0.0;
    double shadow_db = 0.0;
    double tx_antenna_gain_dbi = 0.0;
    double rx_antenna_gain_dbi = 0.0;

    double rx_power_dbm() const {
        return tx_power_dbm - path_loss_db - penetration_db - shadow_db + tx_antenna_gain_dbi + rx_antenna_gain_dbi;
    }
};

/// Thermal noise is the calibrated effective floor; the noise figures are
/// carried for reporting only and are not added on top of it.
struct NoiseModel {
    double thermal_noise_dbm = -81.0;
    double ue_noise_figure_db = 7.0;
    double bs_noise_figure_db = 5.0;

    double effective_dbm() const { return thermal_noise_dbm; }
};

/// Received minus transmitted power (dB); non-positive for passive links.
double coupling_gain(const LinkBudget& budget);
double coupling_gain(double rx_power_dbm, double tx_power_dbm);

double wideband_sinr(double serving_rx_dbm, std::span<const double> interferer_rx_dbm, const NoiseModel& noise);

/// Same as wideband_sinr() with interference already summed in milliwatts.
double wideband_sinr_mw(double serving_mw, double interference_mw, double noise_mw);

/// Per-subcarrier average of the wideband received power.
double rsrp(double rx_power_dbm, int subcarriers);

/// N * RSRP / RSSI in dB.
double rsrq(double rsrp_dbm, double rssi_dbm, int allocated_blocks);

struct KpiSample {
    double time_s = 0.0;
    int drop = 0;
    int ue_id = 0;
    int serving_cell = -1;
    Vec2 position;
    double serving_distance_m = 0.0;
    double rsrp_dbm = 0.0;
    double rsrq_db = 0.0;
    double sinr_db = 0.0;
    double coupling_gain_db = 0.0;

    friend bool operator==(const KpiSample&, const KpiSample&) = default;
};

}  // namespace ranforge
