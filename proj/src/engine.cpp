#include "ranforge/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <thread>

namespace ranforge {

namespace {

// Timers are sums of tick lengths; ten 0.1 s ticks must satisfy a 1.0 s TTT.
constexpr double kTimerTolerance = 1e-9;

/// Clock of tick k, snapped to a nanosecond grid to drop product rounding residue.
double tick_time(std::int64_t k, double dt_s) { return std::round(static_cast<double>(k) * dt_s * 1e9) / 1e9; }

inline double fast_dbm_to_mw(double dbm) { return std::exp(dbm * (std::numbers::ln10 / 10.0)); }

void move_ue(UeState& s, const World& world, double dt_s) {
    const double step = s.ue.speed_kmh / 3.6 * dt_s;
    if (step <= 0.0) {
        return;
    }
    const double remaining = distance(s.ue.position, s.ue.waypoint);
    if (remaining <= step) {
        s.ue.position = s.ue.waypoint;
        const auto& home = world.deployment.sites[static_cast<std::size_t>(s.ue.home_site)];
        s.ue.waypoint = sample_annulus(home.position, world.deployment.radio.min_ue_distance_m,
                                       world.spec.max_ue_distance_m, s.mobility);
        return;
    }
    const double f = step / remaining;
    s.ue.position.x += (s.ue.waypoint.x - s.ue.position.x) * f;
    s.ue.position.y += (s.ue.waypoint.y - s.ue.position.y) * f;
}

struct TickOutcome {
    KpiSample sample;
    bool handover = false;
    bool refused = false;
    int from_cell = -1;
    int to_cell = -1;
};

TickOutcome tick_ue(const World& world, std::span<const CellRuntime> cells, UeState& s, Measurement& m, double time_s,
                    double dt_s, bool evaluate_handover) {
    measure(world, cells, s, m);
    TickOutcome out;
    if (evaluate_handover) {
        const int serving = s.ue.serving_cell;
        const int neighbor = strongest_cell(m, serving);
        if (neighbor >= 0) {
            if (neighbor != s.a3_candidate) {
                s.a3_candidate = neighbor;
                s.a3_timer_s = 0.0;
            }
            const int subcarriers = world.deployment.radio.subcarriers;
            const auto& sc = cells[static_cast<std::size_t>(serving)];
            auto a3 = evaluate_a3(rsrp(m.rx_dbm[static_cast<std::size_t>(serving)], subcarriers),
                                  rsrp(m.rx_dbm[static_cast<std::size_t>(neighbor)], subcarriers), sc.hysteresis_db,
                                  s.a3_timer_s, sc.ttt_s, dt_s);
            s.a3_timer_s = a3.timer_s;
            if (a3.trigger) {
                out.from_cell = serving;
                out.to_cell = neighbor;
                if (world.handover_allowed(serving, neighbor)) {
                    s.ue.serving_cell = neighbor;
                    out.handover = true;
                } else {
                    out.refused = true;
                }
                s.a3_timer_s = 0.0;
                s.a3_candidate = -1;
            }
        }
    }
    out.sample = make_sample(world, cells, s, m, s.ue.serving_cell, time_s);
    return out;
}

}  // namespace

A3Result evaluate_a3(double serving_rsrp_dbm, double neighbor_rsrp_dbm, double hysteresis_db, double timer_s,
                     double ttt_s, double dt_s) {
    A3Result r;
    if (neighbor_rsrp_dbm - serving_rsrp_dbm > hysteresis_db) {
        r.timer_s = timer_s + dt_s;
        r.trigger = r.timer_s >= ttt_s - kTimerTolerance;
    }
    return r;
}

bool World::handover_allowed(int from_cell, int to_cell) const {
    const int a = deployment.cells[static_cast<std::size_t>(from_cell)].site_id;
    const int b = deployment.cells[static_cast<std::size_t>(to_cell)].site_id;
    return a == b || x2.linked(a, b);
}

std::shared_ptr<const World> make_world(const ScenarioSpec& spec, std::uint64_t seed, std::uint64_t drop) {
    auto world = std::make_shared<World>();
    world->spec = spec;
    world->deployment = build_deployment(spec, seed, drop);
    world->x2 = expand_x2(spec);
    world->noise = {spec.radio.thermal_noise_dbm, spec.radio.ue_noise_figure_db, spec.radio.bs_noise_figure_db};
    for (const auto& c : world->deployment.cells) {
        world->base_cells.push_back({c.tx_power_dbm, c.hysteresis_db, c.time_to_trigger_s, 0.0});
    }
    return world;
}

std::vector<UeState> init_ues(const World& world, std::uint64_t seed, std::uint64_t drop) {
    const auto& d = world.deployment;
    const auto& radio = d.radio;
    const auto initial_cells = cells_at(world, 0.0);
    std::vector<UeState> states;
    states.reserve(d.ues.size());
    Measurement m;
    for (const auto& ue : d.ues) {
        UeState s;
        s.ue = ue;
        auto rng = make_stream(seed, Stream::Channel, drop, static_cast<std::uint64_t>(ue.id));
        for (const auto& site : d.sites) {
            auto geom = LinkGeometry::between(site.position, site.antenna_height_m, ue.position, ue.height_m, 0.0,
                                              radio.downtilt_deg);
            s.site_links.push_back(realize_link(radio, geom, ue.indoor, ue.penetration_class, rng));
        }
        for (const auto& bg : d.background) {
            auto geom = LinkGeometry::between(bg.position, radio.bs_height_m, ue.position, ue.height_m, 0.0,
                                              radio.downtilt_deg);
            s.background_links.push_back(realize_link(radio, geom, ue.indoor, ue.penetration_class, rng));
        }
        s.mobility = make_stream(seed, Stream::Mobility, drop, static_cast<std::uint64_t>(ue.id));
        const auto& home = d.sites[static_cast<std::size_t>(ue.home_site)];
        s.ue.waypoint = sample_annulus(home.position, radio.min_ue_distance_m, world.spec.max_ue_distance_m, s.mobility);
        measure(world, initial_cells, s, m);
        s.ue.serving_cell = strongest_cell(m);
        states.push_back(std::move(s));
    }
    return states;
}

void measure(const World& world, std::span<const CellRuntime> cells, const UeState& s, Measurement& out) {
    const auto& d = world.deployment;
    const auto& radio = d.radio;
    const auto params = PropagationParams::from(radio);
    const double indoor_loss = s.ue.indoor ? 0.5 * s.ue.indoor_distance_m : 0.0;

    out.rx_dbm.resize(d.cells.size());
    out.rx_mw.resize(d.cells.size());
    out.cells_total_mw = 0.0;
    out.background_mw = 0.0;

    // Cells are numbered site-major, so walk sites and their sectors together.
    std::size_t cell = 0;
    for (std::size_t site_idx = 0; site_idx < d.sites.size(); ++site_idx) {
        const auto& site = d.sites[site_idx];
        const auto& link = s.site_links[site_idx];
        auto geom = LinkGeometry::between(site.position, site.antenna_height_m, s.ue.position, s.ue.height_m, 0.0,
                                          radio.downtilt_deg);
        const double loss = path_loss(radio.environment, link.los, geom, radio.carrier_ghz, params) + indoor_loss +
                            link.penetration_db + link.shadow_db;
        for (; cell < d.cells.size() && d.cells[cell].site_id == site.id; ++cell) {
            const double gain = element_gain(geom.azimuth_offset_deg - d.cells[cell].azimuth_deg, geom.zenith_offset_deg,
                                             radio.bs_antenna);
            const double rx = cells[cell].tx_power_dbm - loss + gain + radio.ue_antenna_gain_dbi;
            out.rx_dbm[cell] = rx;
            out.rx_mw[cell] = fast_dbm_to_mw(rx);
            out.cells_total_mw += out.rx_mw[cell];
        }
    }

    for (std::size_t b = 0; b < d.background.size(); ++b) {
        const auto& link = s.background_links[b];
        auto geom = LinkGeometry::between(d.background[b].position, radio.bs_height_m, s.ue.position, s.ue.height_m, 0.0,
                                          radio.downtilt_deg);
        const double rx = radio.background_tx_power_dbm -
                          path_loss(radio.environment, link.los, geom, radio.carrier_ghz, params) - indoor_loss -
                          link.penetration_db - link.shadow_db + radio.background_antenna_gain_dbi +
                          radio.ue_antenna_gain_dbi;
        out.background_mw += fast_dbm_to_mw(rx);
    }
}

int strongest_cell(const Measurement& m, int exclude) {
    int best = -1;
    for (std::size_t c = 0; c < m.rx_dbm.size(); ++c) {
        if (static_cast<int>(c) == exclude) {
            continue;
        }
        if (best < 0 || m.rx_dbm[c] > m.rx_dbm[static_cast<std::size_t>(best)]) {
            best = static_cast<int>(c);
        }
    }
    return best;
}

KpiSample make_sample(const World& world, std::span<const CellRuntime> cells, const UeState& s, const Measurement& m,
                      int serving_cell, double time_s) {
    const auto& d = world.deployment;
    const auto& radio = d.radio;
    const auto serving = static_cast<std::size_t>(serving_cell);

    double extra_mw = cells[serving].extra_interference_mw;
    const int neighbor = strongest_cell(m, serving_cell);
    if (neighbor >= 0) {
        extra_mw += cells[static_cast<std::size_t>(neighbor)].extra_interference_mw;
    }
    const double noise_mw = dbm_to_mw(world.noise.effective_dbm());
    const double interference_mw = (m.cells_total_mw - m.rx_mw[serving]) + m.background_mw + extra_mw;

    KpiSample k;
    k.time_s = time_s;
    k.ue_id = s.ue.id;
    k.serving_cell = serving_cell;
    k.position = s.ue.position;
    k.serving_distance_m = distance(s.ue.position, d.sites[static_cast<std::size_t>(d.cells[serving].site_id)].position);
    k.rsrp_dbm = rsrp(m.rx_dbm[serving], radio.subcarriers);
    k.sinr_db = wideband_sinr_mw(m.rx_mw[serving], interference_mw, noise_mw);
    const double rssi_dbm = mw_to_dbm(m.cells_total_mw + m.background_mw + extra_mw + noise_mw);
    k.rsrq_db = rsrq(k.rsrp_dbm, rssi_dbm, radio.resource_blocks);
    k.coupling_gain_db = coupling_gain(m.rx_dbm[serving], cells[serving].tx_power_dbm);
    return k;
}

// ---------------------------------------------------------------------------

void apply_fault(SimState& state, const FaultSpec& fault) {
    auto& cell = state.cells.at(static_cast<std::size_t>(fault.cell));
    switch (fault.kind) {
    case FaultKind::ExcessivePowerReduction:
        cell.tx_power_dbm -= fault.power_drop_db;
        break;
    case FaultKind::TooLateHandover:
        cell.hysteresis_db = fault.hysteresis_db;
        cell.ttt_s = fault.ttt_s;
        break;
    case FaultKind::InterCellInterference:
        cell.extra_interference_mw += dbm_to_mw(fault.interference_dbm);
        break;
    }
}

std::vector<CellRuntime> cells_at(const World& world, double time_s, std::vector<int>* active) {
    SimState scratch;
    scratch.cells = world.base_cells;
    if (active) {
        active->clear();
    }
    for (std::size_t i = 0; i < world.spec.faults.size(); ++i) {
        if (world.spec.faults[i].active_at(time_s)) {
            apply_fault(scratch, world.spec.faults[i]);
            if (active) {
                active->push_back(static_cast<int>(i));
            }
        }
    }
    return scratch.cells;
}

SimState make_state(const ScenarioSpec& spec, std::uint64_t seed) {
    SimState state;
    state.world = make_world(spec, seed);
    state.cells = cells_at(*state.world, 0.0, &state.active_faults);
    state.ues = init_ues(*state.world, seed);
    return state;
}

std::vector<KpiSample> observe(SimState& state) {
    std::vector<KpiSample> samples;
    samples.reserve(state.ues.size());
    Measurement m;
    for (auto& s : state.ues) {
        measure(*state.world, state.cells, s, m);
        samples.push_back(make_sample(*state.world, state.cells, s, m, s.ue.serving_cell, state.clock_s));
    }
    return samples;
}

std::vector<KpiSample> step(SimState& state, double dt_s) {
    const auto& world = *state.world;
    ++state.tick;
    state.clock_s = tick_time(state.tick, dt_s);
    state.cells = cells_at(world, state.clock_s, &state.active_faults);

    std::vector<KpiSample> samples;
    samples.reserve(state.ues.size());
    Measurement m;
    for (auto& s : state.ues) {
        move_ue(s, world, dt_s);
        auto out = tick_ue(world, state.cells, s, m, state.clock_s, dt_s, true);
        if (out.handover) {
            state.handovers.push_back({state.clock_s, s.ue.id, out.from_cell, out.to_cell});
        } else if (out.refused) {
            state.refused.push_back({state.clock_s, s.ue.id, out.from_cell, out.to_cell});
        }
        samples.push_back(out.sample);
    }
    return samples;
}

// ---------------------------------------------------------------------------

void parallel_for(int n, int jobs, const std::function<void(int, int)>& fn) {
    jobs = std::clamp(jobs, 1, std::max(n, 1));
    if (jobs == 1) {
        fn(0, n);
        return;
    }
    std::vector<std::jthread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) {
        const int begin = static_cast<int>(static_cast<std::int64_t>(n) * j / jobs);
        const int end = static_cast<int>(static_cast<std::int64_t>(n) * (j + 1) / jobs);
        workers.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
}

SnapshotResult run_snapshot(const ScenarioSpec& spec, int drops, std::uint64_t seed, int jobs) {
    if (drops < 1) {
        throw ConfigError("snapshot mode needs at least one drop");
    }
    if (!spec.faults.empty()) {
        throw ConfigError("snapshot mode is static; remove the scenario's faults or use the timeline mode");
    }
    std::vector<SnapshotResult> per_drop(static_cast<std::size_t>(drops));
    parallel_for(drops, jobs, [&](int begin, int end) {
        for (int drop = begin; drop < end; ++drop) {
            auto world = make_world(spec, seed, static_cast<std::uint64_t>(drop));
            auto ues = init_ues(*world, seed, static_cast<std::uint64_t>(drop));
            const auto& collect = world->deployment.collect_sites;
            auto& out = per_drop[static_cast<std::size_t>(drop)];
            Measurement m;
            for (auto& s : ues) {
                measure(*world, world->base_cells, s, m);
                ++out.generated;
                for (const auto& site : world->deployment.sites) {
                    const auto& link = s.site_links[static_cast<std::size_t>(site.id)];
                    if (!within_validity(spec.environment, link.los, distance(site.position, s.ue.position))) {
                        ++out.out_of_range_links;
                    }
                }
                const int serving_site = world->deployment.cells[static_cast<std::size_t>(s.ue.serving_cell)].site_id;
                if (!std::binary_search(collect.begin(), collect.end(), serving_site)) {
                    continue;
                }
                auto k = make_sample(*world, world->base_cells, s, m, s.ue.serving_cell, 0.0);
                k.drop = drop;
                out.samples.push_back(k);
            }
        }
    });
    SnapshotResult result;
    for (auto& r : per_drop) {
        result.generated += r.generated;
        result.out_of_range_links += r.out_of_range_links;
        result.samples.insert(result.samples.end(), r.samples.begin(), r.samples.end());
    }
    return result;
}

TimelineResult run_timeline(const ScenarioSpec& spec, std::uint64_t seed, const UeTrajectorySink& sink, int jobs) {
    auto world = make_world(spec, seed);
    auto ues = init_ues(*world, seed);
    const double dt = spec.radio.tick_s;
    const int ticks = static_cast<int>(std::llround(spec.simulation_time_s / dt));

    // Cell parameters only change at fault-window edges; precompute one set
    // per distinct active-fault combination.
    std::vector<std::vector<CellRuntime>> epochs;
    std::vector<int> tick_epoch(static_cast<std::size_t>(ticks));
    std::map<std::vector<int>, int> epoch_index;
    for (int k = 0; k < ticks; ++k) {
        std::vector<int> active;
        auto cells = cells_at(*world, tick_time(k, dt), &active);
        auto [it, inserted] = epoch_index.try_emplace(active, static_cast<int>(epochs.size()));
        if (inserted) {
            epochs.push_back(std::move(cells));
        }
        tick_epoch[static_cast<std::size_t>(k)] = it->second;
    }

    const int n = static_cast<int>(ues.size());
    std::vector<std::vector<HandoverEvent>> handovers(static_cast<std::size_t>(n));
    std::vector<std::vector<RefusedHandover>> refused(static_cast<std::size_t>(n));

    parallel_for(n, jobs, [&](int begin, int end) {
        Measurement m;
        std::vector<KpiSample> samples;
        for (int i = begin; i < end; ++i) {
            auto& s = ues[static_cast<std::size_t>(i)];
            samples.clear();
            samples.reserve(static_cast<std::size_t>(ticks));
            for (int k = 0; k < ticks; ++k) {
                const double t = tick_time(k, dt);
                const auto& cells = epochs[static_cast<std::size_t>(tick_epoch[static_cast<std::size_t>(k)])];
                if (k > 0) {
                    move_ue(s, *world, dt);
                }
                auto out = tick_ue(*world, cells, s, m, t, dt, k > 0);
                if (out.handover) {
                    handovers[static_cast<std::size_t>(i)].push_back({t, s.ue.id, out.from_cell, out.to_cell});
                } else if (out.refused) {
                    refused[static_cast<std::size_t>(i)].push_back({t, s.ue.id, out.from_cell, out.to_cell});
                }
                samples.push_back(out.sample);
            }
            sink(s.ue.id, samples);
        }
    });

    TimelineResult result;
    result.ticks = ticks;
    result.samples = static_cast<std::int64_t>(ticks) * n;
    for (int i = 0; i < n; ++i) {
        const auto& h = handovers[static_cast<std::size_t>(i)];
        result.handovers.insert(result.handovers.end(), h.begin(), h.end());
        const auto& r = refused[static_cast<std::size_t>(i)];
        result.refused.insert(result.refused.end(), r.begin(), r.end());
    }
    auto by_time = [](const auto& a, const auto& b) {
        return a.time_s < b.time_s || (a.time_s == b.time_s && a.ue_id < b.ue_id);
    };
    std::stable_sort(result.handovers.begin(), result.handovers.end(), by_time);
    std::stable_sort(result.refused.begin(), result.refused.end(), by_time);
    for (const auto& f : spec.faults) {
        result.labels.push_back({f.kind, f.cell, spec.site_of_cell(f.cell), f.start_s, f.end_s});
    }
    return result;
}

}  // namespace ranforge
