#pragma once

// Small hand-built worlds shared by the engine tests and the acceptance run.

#include "ranforge/engine.hpp"

#include <vector>

namespace fixtures {

using namespace ranforge;

/// Hexagonal urban layout built in code, bypassing YAML.
inline ScenarioSpec hex_spec(int rings, int per_sector, double sim_time_s) {
    ScenarioSpec spec;
    spec.environment = Environment::UrbanEmbb;
    spec.radio = default_profile(Environment::UrbanEmbb);
    spec.simulation_time_s = sim_time_s;
    spec.users_per_sector = per_sector;
    for (const auto& s : hex_layout(rings, spec.radio.isd_m)) {
        spec.sites.push_back({s.position, 3, {30.0, 150.0, 270.0}});
    }
    spec.kpis = {Kpi::Rsrp, Kpi::Rsrq, Kpi::Sinr, Kpi::CouplingGain, Kpi::ServingDistance};
    return spec;
}

/// Two single-sector sites 200 m apart with their boresights facing each
/// other, pure LOS and no shadowing. One UE per cell.
inline ScenarioSpec corridor_spec() {
    ScenarioSpec spec;
    spec.environment = Environment::UrbanEmbb;
    spec.radio = default_profile(Environment::UrbanEmbb);
    spec.radio.shadowing = false;
    spec.radio.force_los = true;
    spec.simulation_time_s = 30.0;
    spec.users_per_sector = 1;
    spec.sites.push_back({{0.0, 0.0}, 1, {0.0}});
    spec.sites.push_back({{200.0, 0.0}, 1, {180.0}});
    spec.kpis = {Kpi::Rsrp, Kpi::Sinr};
    return spec;
}

/// Puts UE 0 outdoors on the line between the sites at `start_x`, walking
/// toward the far site at `speed_kmh`; UE 1 is parked next to site 1.
inline void script_corridor(SimState& state, double start_x, double speed_kmh) {
    for (auto& s : state.ues) {
        s.ue.indoor = false;
        s.ue.indoor_distance_m = 0.0;
        s.ue.height_m = 1.5;
        for (auto& link : s.site_links) {
            link = ChannelRealization{true, 0.0, 0.0, 0.0};
        }
        s.a3_timer_s = 0.0;
        s.a3_candidate = -1;
    }
    auto& walker = state.ues[0].ue;
    walker.position = {start_x, 0.0};
    walker.waypoint = {195.0, 0.0};
    walker.speed_kmh = speed_kmh;
    walker.serving_cell = 0;
    auto& parked = state.ues[1].ue;
    parked.position = {190.0, 0.0};
    parked.waypoint = parked.position;
    parked.speed_kmh = 0.0;
    parked.serving_cell = 1;
}

/// Time of UE 0's first handover away from cell 0, or -1.
inline double first_handover_time(SimState& state, double dt_s, int max_ticks) {
    for (int k = 0; k < max_ticks; ++k) {
        step(state, dt_s);
        for (const auto& h : state.handovers) {
            if (h.ue_id == 0 && h.from_cell == 0) {
                return h.time_s;
            }
        }
    }
    return -1.0;
}

}  // namespace fixtures
