#pragma once

// Site layout, sectorization, UE drops and background entities.

#include "ranforge/common.hpp"
#include "ranforge/environment.hpp"
#include "ranforge/scenario.hpp"

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

namespace ranforge {

struct Site {
    int id = 0;
    Vec2 position;
    double antenna_height_m = 0.0;

    friend bool operator==(const Site&, const Site&) = default;
};

struct Cell {
    int id = 0;
    int site_id = 0;
    double azimuth_deg = 0.0;
    double tx_power_dbm = 0.0;
    double carrier_ghz = 0.0;
    double bandwidth_mhz = 0.0;
    double hysteresis_db = 0.0;
    double time_to_trigger_s = 0.0;

    friend bool operator==(const Cell&, const Cell&) = default;
};

struct Ue {
    int id = 0;
    int home_site = 0;
    Vec2 position;
    double height_m = 1.5;
    bool indoor = false;
    PenetrationClass penetration_class = PenetrationClass::Low;
    double indoor_distance_m = 0.0;
    double speed_kmh = 0.0;
    int serving_cell = -1;
    Vec2 waypoint;

    friend bool operator==(const Ue&, const Ue&) = default;
};

struct BackgroundCell {
    int id = 0;
    Vec2 position;
    std::vector<Vec2> users;

    friend bool operator==(const BackgroundCell&, const BackgroundCell&) = default;
};

struct Deployment {
    RadioProfile radio;
    std::vector<Site> sites;
    std::vector<Cell> cells;
    std::vector<Ue> ues;
    std::vector<BackgroundCell> background;
    std::vector<int> collect_sites;  // sites whose UEs contribute calibration samples
    Box bounds;                      // UE mobility stays inside

    friend bool operator==(const Deployment&, const Deployment&) = default;
};

/// Hexagonal multi-site lattice: the center site followed by rings 1..ring_count,
/// 1 + 3 * ring_count * (ring_count + 1) sites in total.
std::vector<Site> hex_layout(int ring_count, double isd_m, double antenna_height_m = 0.0);

std::vector<Cell> sectorize(std::span<const Site> sites, std::span<const double> azimuths_deg,
                            const RadioProfile& radio);

/// Indoor UE height from a two-stage floor draw: building floors uniform in
/// {4..8}, UE floor uniform in {1..floors}, height = 3 (floor - 1) + 1.5.
double ue_height(Rng& rng);

/// One UE dropped uniformly (by area) in the annulus [min_d, max_d] around `site`.
Ue drop_ue(int id, const Site& site, double min_d, double max_d, double indoor_fraction,
           const RadioProfile& radio, Rng& rng);

std::vector<Ue> drop_ues(const Site& site, int count, double min_d, double max_d,
                         double indoor_fraction, const RadioProfile& radio, Rng& rng);

std::vector<BackgroundCell> place_background(const BackgroundDecl& decl, Rng& rng);

/// Uniform point in the annulus around `center`.
Vec2 sample_annulus(Vec2 center, double min_d, double max_d, Rng& rng);

/// Indices of the `count` sites closest to the layout centroid (ties by id).
std::vector<int> inner_sites(std::span<const Site> sites, int count);

/// Smallest pairwise site distance; 0 for a single site.
double min_site_distance(std::span<const Site> sites);

/// Concrete world for a scenario. `drop` selects an independent UE drop; UE i
/// of drop d always draws from the same stream, whatever the drop count.
Deployment build_deployment(const ScenarioSpec& spec, std::uint64_t seed, std::uint64_t drop = 0);

/// CSV dump: entity_type,id,x,y,height,attrs
void write_deployment_csv(const Deployment& deployment, std::ostream& out);

}  // namespace ranforge
