#include "ranforge/environment.hpp"

namespace ranforge {

RadioProfile default_profile(Environment env) {
    RadioProfile p;
    p.environment = env;
    switch (env) {
    case Environment::UrbanEmbb:
        // struct defaults are the dense-urban values
        break;
    case Environment::RuralEmbb:
        p.isd_m = 1732.0;
        p.bs_height_m = 35.0;
        p.bs_tx_power_dbm = 46.0;
        p.thermal_noise_dbm = -82.0;
        p.indoor_fraction = 0.5;
        p.high_loss_fraction = 0.0;
        p.indoor_floor_heights = false;
        p.outdoor_speed_kmh = 120.0;
        p.max_ue_distance_m = 200.0;
        p.building_height_m = 10.0;
        p.downtilt_deg = 10.0;
        p.background_tx_power_dbm = 46.0;
        break;
    }
    return p;
}

}  // namespace ranforge
