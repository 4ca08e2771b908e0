#include "ranforge/topology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace ranforge {

std::vector<Site> hex_layout(int ring_count, double isd_m, double antenna_height_m) {
    // Axial coordinates (q, r); ring k is walked starting from k steps in
    // direction 4 and turning through the six directions.
    static constexpr std::array<std::array<int, 2>, 6> kDirections{{{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}}};
    const double half_sqrt3 = std::sqrt(3.0) / 2.0;
    auto to_position = [&](int q, int r) {
        return Vec2{isd_m * (q + 0.5 * r), isd_m * (half_sqrt3 * r)};
    };

    std::vector<Site> sites;
    sites.push_back({0, {0.0, 0.0}, antenna_height_m});
    for (int ring = 1; ring <= ring_count; ++ring) {
        int q = kDirections[4][0] * ring;
        int r = kDirections[4][1] * ring;
        for (const auto& dir : kDirections) {
            for (int step = 0; step < ring; ++step) {
                sites.push_back({static_cast<int>(sites.size()), to_position(q, r), antenna_height_m});
                q += dir[0];
                r += dir[1];
            }
        }
    }
    return sites;
}

std::vector<Cell> sectorize(std::span<const Site> sites, std::span<const double> azimuths_deg,
                            const RadioProfile& radio) {
    std::vector<Cell> cells;
    cells.reserve(sites.size() * azimuths_deg.size());
    for (const auto& site : sites) {
        for (double az : azimuths_deg) {
            Cell c;
            c.id = static_cast<int>(cells.size());
            c.site_id = site.id;
            c.azimuth_deg = az;
            c.tx_power_dbm = radio.bs_tx_power_dbm;
            c.carrier_ghz = radio.carrier_ghz;
            c.bandwidth_mhz = radio.bandwidth_mhz;
            c.hysteresis_db = radio.hysteresis_db;
            c.time_to_trigger_s = radio.time_to_trigger_s;
            cells.push_back(c);
        }
    }
    return cells;
}

double ue_height(Rng& rng) {
    std::uniform_int_distribution<int> building_floors(4, 8);
    const int floors = building_floors(rng);
    std::uniform_int_distribution<int> ue_floor(1, floors);
    return 3.0 * (ue_floor(rng) - 1) + 1.5;
}

Vec2 sample_annulus(Vec2 center, double min_d, double max_d, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = std::sqrt(min_d * min_d + u(rng) * (max_d * max_d - min_d * min_d));
    const double theta = 2.0 * std::numbers::pi * u(rng);
    return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

Ue drop_ue(int id, const Site& site, double min_d, double max_d, double indoor_fraction,
           const RadioProfile& radio, Rng& rng) {
    Ue ue;
    ue.id = id;
    ue.home_site = site.id;
    ue.position = sample_annulus(site.position, min_d, max_d, rng);
    ue.waypoint = ue.position;
    std::bernoulli_distribution is_indoor(indoor_fraction);
    ue.indoor = is_indoor(rng);
    ue.height_m = radio.outdoor_ue_height_m;
    if (ue.indoor) {
        if (radio.indoor_floor_heights) {
            ue.height_m = ue_height(rng);
        }
        std::bernoulli_distribution high_loss(radio.high_loss_fraction);
        ue.penetration_class = high_loss(rng) ? PenetrationClass::High : PenetrationClass::Low;
        const double d2d = distance(ue.position, site.position);
        std::uniform_real_distribution<double> d_in(0.0, std::min(radio.max_indoor_distance_m, d2d));
        ue.indoor_distance_m = d_in(rng);
        ue.speed_kmh = radio.indoor_speed_kmh;
    } else {
        ue.speed_kmh = radio.outdoor_speed_kmh;
    }
    return ue;
}

std::vector<Ue> drop_ues(const Site& site, int count, double min_d, double max_d, double indoor_fraction,
                         const RadioProfile& radio, Rng& rng) {
    std::vector<Ue> ues;
    ues.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) {
        ues.push_back(drop_ue(i, site, min_d, max_d, indoor_fraction, radio, rng));
    }
    return ues;
}

std::vector<BackgroundCell> place_background(const BackgroundDecl& decl, Rng& rng) {
    std::uniform_real_distribution<double> ux(decl.area.min.x, decl.area.max.x);
    std::uniform_real_distribution<double> uy(decl.area.min.y, decl.area.max.y);
    std::vector<BackgroundCell> cells;
    cells.reserve(static_cast<std::size_t>(decl.cell_count));
    for (int i = 0; i < decl.cell_count; ++i) {
        BackgroundCell bg;
        bg.id = i;
        bg.position = {ux(rng), uy(rng)};
        for (int u = 0; u < decl.users_per_cell; ++u) {
            bg.users.push_back({ux(rng), uy(rng)});
        }
        cells.push_back(std::move(bg));
    }
    return cells;
}

std::vector<int> inner_sites(std::span<const Site> sites, int count) {
    Vec2 centroid;
    for (const auto& s : sites) {
        centroid.x += s.position.x;
        centroid.y += s.position.y;
    }
    if (!sites.empty()) {
        centroid.x /= static_cast<double>(sites.size());
        centroid.y /= static_cast<double>(sites.size());
    }
    std::vector<int> order(sites.size());
    std::iota(order.begin(), order.end(), 0);
    // round the distances so lattice symmetry ties are broken by id, not by ulp noise
    auto key = [&](int i) { return std::round(distance(sites[static_cast<std::size_t>(i)].position, centroid) * 1e6); };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });
    order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(std::max(count, 0))));
    std::sort(order.begin(), order.end());
    return order;
}

double min_site_distance(std::span<const Site> sites) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sites.size(); ++i) {
        for (std::size_t j = i + 1; j < sites.size(); ++j) {
            best = std::min(best, distance(sites[i].position, sites[j].position));
        }
    }
    return std::isfinite(best) ? best : 0.0;
}

Deployment build_deployment(const ScenarioSpec& spec, std::uint64_t seed, std::uint64_t drop) {
    Deployment d;
    d.radio = spec.radio;
    const auto& radio = spec.radio;

    for (std::size_t i = 0; i < spec.sites.size(); ++i) {
        d.sites.push_back({static_cast<int>(i), spec.sites[i].position, radio.bs_height_m});
    }
    for (std::size_t i = 0; i < spec.sites.size(); ++i) {
        auto cells = sectorize(std::span<const Site>(&d.sites[i], 1), spec.sites[i].sector_azimuths, radio);
        for (auto& c : cells) {
            c.id = static_cast<int>(d.cells.size());
            d.cells.push_back(c);
        }
    }

    for (const auto& cell : d.cells) {
        const auto& site = d.sites[static_cast<std::size_t>(cell.site_id)];
        for (int k = 0; k < spec.users_per_sector; ++k) {
            const int id = cell.id * spec.users_per_sector + k;
            auto rng = make_stream(seed, Stream::UeDrop, drop, static_cast<std::uint64_t>(id));
            d.ues.push_back(drop_ue(id, site, radio.min_ue_distance_m, spec.max_ue_distance_m, radio.indoor_fraction,
                                    radio, rng));
        }
    }

    if (spec.background.cell_count > 0) {
        auto rng = make_stream(seed, Stream::Background, drop);
        d.background = place_background(spec.background, rng);
    }

    d.collect_sites = inner_sites(d.sites, radio.collect_sites);

    Box b{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
          {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
    for (const auto& s : d.sites) {
        b.min.x = std::min(b.min.x, s.position.x - spec.max_ue_distance_m);
        b.min.y = std::min(b.min.y, s.position.y - spec.max_ue_distance_m);
        b.max.x = std::max(b.max.x, s.position.x + spec.max_ue_distance_m);
        b.max.y = std::max(b.max.y, s.position.y + spec.max_ue_distance_m);
    }
    d.bounds = b;
    return d;
}

void write_deployment_csv(const Deployment& deployment, std::ostream& out) {
    out << "entity_type,id,x,y,height,attrs\n";
    for (const auto& s : deployment.sites) {
        out << "site," << s.id << ',' << format_double(s.position.x) << ',' << format_double(s.position.y) << ','
            << format_double(s.antenna_height_m) << ",\n";
    }
    for (const auto& c : deployment.cells) {
        const auto& s = deployment.sites[static_cast<std::size_t>(c.site_id)];
        out << "cell," << c.id << ',' << format_double(s.position.x) << ',' << format_double(s.position.y) << ','
            << format_double(s.antenna_height_m) << ",site=" << c.site_id << ";azimuth_deg=" << format_double(c.azimuth_deg)
            << ";tx_power_dbm=" << format_double(c.tx_power_dbm) << '\n';
    }
    for (const auto& u : deployment.ues) {
        out << "ue," << u.id << ',' << format_double(u.position.x) << ',' << format_double(u.position.y) << ','
            << format_double(u.height_m) << ",home_site=" << u.home_site << ";indoor=" << (u.indoor ? 1 : 0)
            << ";penetration=" << (u.penetration_class == PenetrationClass::High ? "high" : "low")
            << ";indoor_distance_m=" << format_double(u.indoor_distance_m) << ";speed_kmh=" << format_double(u.speed_kmh)
            << ";serving_cell=" << u.serving_cell << '\n';
    }
    for (const auto& bg : deployment.background) {
        out << "background_cell," << bg.id << ',' << format_double(bg.position.x) << ',' << format_double(bg.position.y)
            << ',' << format_double(deployment.radio.bs_height_m) << ",users=" << bg.users.size() << '\n';
        for (std::size_t u = 0; u < bg.users.size(); ++u) {
            out << "background_ue," << bg.id << '.' << u << ',' << format_double(bg.users[u].x) << ','
                << format_double(bg.users[u].y) << ',' << format_double(deployment.radio.outdoor_ue_height_m)
                << ",cell=" << bg.id << '\n';
        }
    }
}

}  // namespace ranforge
