#pragma once

#include "ranforge/common.hpp"

#include <optional>

namespace ranforge {

/// Frequency-linear material loss `a + b * f_GHz` in dB.
struct LinearLoss {
    double intercept_db = 0.0;
    double slope_db_per_ghz = 0.0;

    double at(double fc_ghz) const { return intercept_db + slope_db_per_ghz * fc_ghz; }
    friend bool operator==(const LinearLoss&, const LinearLoss&) = default;
};

/// Building material coefficients feeding the outdoor-to-indoor penetration
/// formulas (standard glass, infrared-reflective glass, concrete).
struct MaterialLoss {
    LinearLoss glass{2.0, 0.2};
    LinearLoss iir_glass{23.0, 0.3};
    LinearLoss concrete{5.0, 4.0};

    friend bool operator==(const MaterialLoss&, const MaterialLoss&) = default;
};

/// Sector antenna element pattern parameters.
struct AntennaPattern {
    double max_gain_dbi = 8.0;
    double horizontal_beamwidth_deg = 65.0;
    double vertical_beamwidth_deg = 65.0;
    double max_attenuation_db = 30.0;
    double side_lobe_level_db = 30.0;

    friend bool operator==(const AntennaPattern&, const AntennaPattern&) = default;
};

/// Every radio and deployment parameter that depends on the environment.
/// default_profile() fills in the calibrated urban/rural eMBB values.
struct RadioProfile {
    Environment environment = Environment::UrbanEmbb;

    double carrier_ghz = 4.0;
    double bandwidth_mhz = 10.0;
    int resource_blocks = 50;
    int subcarriers = 600;

    double isd_m = 200.0;
    double bs_height_m = 25.0;
    double bs_tx_power_dbm = 41.0;
    double ue_tx_power_dbm = 23.0;
    AntennaPattern bs_antenna;
    double ue_antenna_gain_dbi = 0.0;
    double downtilt_deg = 12.0;

    double thermal_noise_dbm = -81.0;
    double bs_noise_figure_db = 5.0;
    double ue_noise_figure_db = 7.0;

    double indoor_fraction = 0.8;
    double high_loss_fraction = 0.2;
    bool indoor_floor_heights = true;  // indoor UE heights follow the floor-number draw
    double outdoor_ue_height_m = 1.5;
    double max_indoor_distance_m = 25.0;
    MaterialLoss materials;

    double indoor_speed_kmh = 3.0;
    double outdoor_speed_kmh = 30.0;
    double min_ue_distance_m = 10.0;
    double max_ue_distance_m = 50.0;

    double building_height_m = 22.5;
    double street_width_m = 20.0;
    int collect_sites = 7;

    double hysteresis_db = 3.0;
    double time_to_trigger_s = 0.1;
    double tick_s = 0.1;

    double background_tx_power_dbm = 41.0;
    double background_antenna_gain_dbi = 0.0;

    bool shadowing = true;
    std::optional<bool> force_los;  // test hook: pin every link to LOS or NLOS

    friend bool operator==(const RadioProfile&, const RadioProfile&) = default;
};

RadioProfile default_profile(Environment env);

}  // namespace ranforge
