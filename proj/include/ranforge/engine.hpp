#pragma once

// Simulation engine: snapshot Monte Carlo drops for calibration, and a
// time-stepped mode with random-waypoint mobility, A3 handover and fault
// injection.
//
// Every cell transmits at full power on the whole band at all times (full
// buffer), so a UE's measurements depend only on its own position and the
// cell configuration at that instant. UEs therefore evolve independently and
// the engine parallelizes across them without affecting any output.

#include "ranforge/channel.hpp"
#include "ranforge/kpi.hpp"
#include "ranforge/scenario.hpp"
#include "ranforge/topology.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace ranforge {

struct A3Result {
    double timer_s = 0.0;
    bool trigger = false;
};

/// One A3 evaluation: the entry condition is neighbor - serving > hysteresis.
/// The timer accumulates dt while the condition holds and resets otherwise;
/// the event triggers once the timer reaches the time-to-trigger.
A3Result evaluate_a3(double serving_rsrp_dbm, double neighbor_rsrp_dbm, double hysteresis_db, double timer_s,
                     double ttt_s, double dt_s);

struct HandoverEvent {
    double time_s = 0.0;
    int ue_id = 0;
    int from_cell = 0;
    int to_cell = 0;

    friend bool operator==(const HandoverEvent&, const HandoverEvent&) = default;
};

/// Inter-site handover attempted without an X2 link between the sites.
struct RefusedHandover {
    double time_s = 0.0;
    int ue_id = 0;
    int from_cell = 0;
    int to_cell = 0;

    friend bool operator==(const RefusedHandover&, const RefusedHandover&) = default;
};

struct FaultLabel {
    FaultKind kind = FaultKind::ExcessivePowerReduction;
    int cell = 0;
    int site = 0;
    double start_s = 0.0;
    double end_s = 0.0;

    friend bool operator==(const FaultLabel&, const FaultLabel&) = default;
};

/// Cell parameters in effect at one instant (base values with faults applied).
struct CellRuntime {
    double tx_power_dbm = 0.0;
    double hysteresis_db = 0.0;
    double ttt_s = 0.0;
    double extra_interference_mw = 0.0;
};

/// Immutable world shared by all UEs of a run.
struct World {
    ScenarioSpec spec;
    Deployment deployment;
    X2Plan x2;
    NoiseModel noise;
    std::vector<CellRuntime> base_cells;

    bool handover_allowed(int from_cell, int to_cell) const;
};

std::shared_ptr<const World> make_world(const ScenarioSpec& spec, std::uint64_t seed, std::uint64_t drop = 0);

struct UeState {
    Ue ue;
    std::vector<ChannelRealization> site_links;        // per site
    std::vector<ChannelRealization> background_links;  // per background cell
    double a3_timer_s = 0.0;
    int a3_candidate = -1;
    Rng mobility;
};

/// Draws the per-link channel state of every UE in the world and attaches each
/// UE to its strongest cell.
std::vector<UeState> init_ues(const World& world, std::uint64_t seed, std::uint64_t drop = 0);

/// Received power from every cell plus lumped background power at the UE's
/// current position.
struct Measurement {
    std::vector<double> rx_dbm;  // per cell
    std::vector<double> rx_mw;
    double cells_total_mw = 0.0;
    double background_mw = 0.0;
};

void measure(const World& world, std::span<const CellRuntime> cells, const UeState& ue, Measurement& out);

int strongest_cell(const Measurement& m, int exclude = -1);

KpiSample make_sample(const World& world, std::span<const CellRuntime> cells, const UeState& ue, const Measurement& m,
                      int serving_cell, double time_s);

struct SimState {
    std::int64_t tick = 0;
    double clock_s = 0.0;
    std::shared_ptr<const World> world;
    std::vector<CellRuntime> cells;
    std::vector<int> active_faults;  // indices into spec.faults
    std::vector<UeState> ues;
    std::vector<HandoverEvent> handovers;
    std::vector<RefusedHandover> refused;
};

SimState make_state(const ScenarioSpec& spec, std::uint64_t seed);

/// Applies one fault on top of the state's current cell parameters.
void apply_fault(SimState& state, const FaultSpec& fault);

/// Cell parameters at time t: base values with every fault active at t applied.
std::vector<CellRuntime> cells_at(const World& world, double time_s, std::vector<int>* active = nullptr);

/// Advances the clock by dt, moves every UE, refreshes faults, measures, runs
/// A3 and executes handovers. Returns the samples observed at the new time.
std::vector<KpiSample> step(SimState& state, double dt_s);

/// Samples at the current clock without advancing (used for t = 0).
std::vector<KpiSample> observe(SimState& state);

// ---------------------------------------------------------------------------

struct SnapshotResult {
    std::vector<KpiSample> samples;  // retained: served by a collecting site
    std::int64_t generated = 0;
    std::int64_t out_of_range_links = 0;
};

/// Independent drops; each drop re-places every UE, attaches by strongest
/// RSRP and emits one sample per UE served by a collecting site.
SnapshotResult run_snapshot(const ScenarioSpec& spec, int drops, std::uint64_t seed, int jobs = 1);

/// Receives the complete sample trajectory of one UE. May be called from
/// worker threads, never twice for the same UE.
using UeTrajectorySink = std::function<void(int ue_id, std::span<const KpiSample> samples)>;

struct TimelineResult {
    std::vector<HandoverEvent> handovers;
    std::vector<RefusedHandover> refused;
    std::vector<FaultLabel> labels;
    std::int64_t samples = 0;
    int ticks = 0;
};

TimelineResult run_timeline(const ScenarioSpec& spec, std::uint64_t seed, const UeTrajectorySink& sink, int jobs = 1);

/// Static partition of [0, n) over `jobs` threads; fn(begin, end) per chunk.
void parallel_for(int n, int jobs, const std::function<void(int, int)>& fn);

}  // namespace ranforge
