#include "ranforge/kpi.hpp"

#include <cmath>
#include <stdexcept>

namespace ranforge {

double coupling_gain(const LinkBudget& budget) { return budget.rx_power_dbm() - budget.tx_power_dbm; }

double coupling_gain(double rx_power_dbm, double tx_power_dbm) { return rx_power_dbm - tx_power_dbm; }

double wideband_sinr(double serving_rx_dbm, std::span<const double> interferer_rx_dbm, const NoiseModel& noise) {
    double interference_mw = 0.0;
    for (double p : interferer_rx_dbm) {
        interference_mw += dbm_to_mw(p);
    }
    return wideband_sinr_mw(dbm_to_mw(serving_rx_dbm), interference_mw, dbm_to_mw(noise.effective_dbm()));
}

double wideband_sinr_mw(double serving_mw, double interference_mw, double noise_mw) {
    return 10.0 * std::log10(serving_mw / (interference_mw + noise_mw));
}

double rsrp(double rx_power_dbm, int subcarriers) {
    if (subcarriers < 1) {
        throw std::invalid_argument("rsrp: subcarrier count must be >= 1");
    }
    return rx_power_dbm - 10.0 * std::log10(static_cast<double>(subcarriers));
}

double rsrq(double rsrp_dbm, double rssi_dbm, int allocated_blocks) {
    if (allocated_blocks < 1) {
        throw std::invalid_argument("rsrq: allocated block count must be >= 1");
    }
    return 10.0 * std::log10(static_cast<double>(allocated_blocks)) + rsrp_dbm - rssi_dbm;
}

}  // namespace ranforge
