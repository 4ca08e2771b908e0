#include "ranforge/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ranforge {

LinkGeometry LinkGeometry::between(Vec2 bs, double bs_height, Vec2 ue, double ue_height, double boresight_deg,
                                   double downtilt_deg) {
    LinkGeometry g;
    g.d2d = distance(bs, ue);
    const double dh = bs_height - ue_height;
    g.d3d = std::sqrt(g.d2d * g.d2d + dh * dh);
    g.bs_height = bs_height;
    g.ue_height = ue_height;
    g.azimuth_offset_deg = wrap_angle_deg(bearing_deg(bs, ue) - boresight_deg);
    const double depression_deg = std::atan2(dh, g.d2d) * 180.0 / std::numbers::pi;
    g.zenith_offset_deg = depression_deg - downtilt_deg;
    return g;
}

double los_probability(Environment env, double d2d, double ue_height) {
    switch (env) {
    case Environment::UrbanEmbb: {
        if (d2d <= 18.0) {
            return 1.0;
        }
        double c_prime = 0.0;
        if (ue_height > 13.0) {
            c_prime = std::pow((ue_height - 13.0) / 10.0, 1.5);
        }
        const double base = 18.0 / d2d + std::exp(-d2d / 63.0) * (1.0 - 18.0 / d2d);
        const double height_term = 1.0 + c_prime * 1.25 * std::pow(d2d / 100.0, 3.0) * std::exp(-d2d / 150.0);
        return std::clamp(base * height_term, 0.0, 1.0);
    }
    case Environment::RuralEmbb:
        if (d2d <= 10.0) {
            return 1.0;
        }
        return std::exp(-(d2d - 10.0) / 1000.0);
    }
    return 1.0;
}

double breakpoint_distance(Environment env, double bs_height, double ue_height, double fc_ghz) {
    const double fc_hz = fc_ghz * 1e9;
    switch (env) {
    case Environment::UrbanEmbb:
        return 4.0 * (bs_height - 1.0) * (ue_height - 1.0) * fc_hz / kSpeedOfLight;
    case Environment::RuralEmbb:
        return 2.0 * std::numbers::pi * bs_height * ue_height * fc_hz / kSpeedOfLight;
    }
    return 0.0;
}

bool within_validity(Environment env, bool los, double d2d) {
    if (d2d < 10.0) {
        return false;
    }
    if (env == Environment::RuralEmbb && los) {
        return d2d <= 10'000.0;
    }
    return d2d <= 5'000.0;
}

namespace {

double uma_los(const LinkGeometry& g, double fc_ghz) {
    const double bp = breakpoint_distance(Environment::UrbanEmbb, g.bs_height, g.ue_height, fc_ghz);
    if (g.d2d <= bp) {
        return 28.0 + 22.0 * std::log10(g.d3d) + 20.0 * std::log10(fc_ghz);
    }
    const double dh = g.bs_height - g.ue_height;
    return 28.0 + 40.0 * std::log10(g.d3d) + 20.0 * std::log10(fc_ghz) - 9.0 * std::log10(bp * bp + dh * dh);
}

double uma_nlos(const LinkGeometry& g, double fc_ghz) {
    const double nlos = 13.54 + 39.08 * std::log10(g.d3d) + 20.0 * std::log10(fc_ghz) - 0.6 * (g.ue_height - 1.5);
    return std::max(uma_los(g, fc_ghz), nlos);
}

double rma_pl1(double d, double fc_ghz, double h) {
    return 20.0 * std::log10(40.0 * std::numbers::pi * d * fc_ghz / 3.0) + std::min(0.03 * std::pow(h, 1.72), 10.0) * std::log10(d) -
           std::min(0.044 * std::pow(h, 1.72), 14.77) + 0.002 * std::log10(h) * d;
}

double rma_los(const LinkGeometry& g, double fc_ghz, const PropagationParams& p) {
    const double bp = breakpoint_distance(Environment::RuralEmbb, g.bs_height, g.ue_height, fc_ghz);
    const double h = p.building_height_m;
    if (g.d2d <= bp) {
        return rma_pl1(g.d3d, fc_ghz, h);
    }
    return rma_pl1(bp, fc_ghz, h) + 40.0 * std::log10(g.d3d / bp);
}

double rma_nlos(const LinkGeometry& g, double fc_ghz, const PropagationParams& p) {
    const double h = p.building_height_m;
    const double w = p.street_width_m;
    const double hbs = g.bs_height;
    const double nlos = 161.04 - 7.1 * std::log10(w) + 7.5 * std::log10(h) -
                        (24.37 - 3.7 * (h / hbs) * (h / hbs)) * std::log10(hbs) +
                        (43.42 - 3.1 * std::log10(hbs)) * (std::log10(g.d3d) - 3.0) + 20.0 * std::log10(fc_ghz) -
                        (3.2 * std::pow(std::log10(11.75 * g.ue_height), 2.0) - 4.97);
    return std::max(rma_los(g, fc_ghz, p), nlos);
}

}  // namespace

double path_loss(Environment env, bool los, const LinkGeometry& geom, double fc_ghz, const PropagationParams& params,
                 ValidityMode mode) {
    if (!(geom.d3d > 0.0) || !(fc_ghz > 0.0)) {
        throw DomainError("path_loss requires d3d > 0 and fc > 0");
    }
    if (mode == ValidityMode::Strict && !within_validity(env, los, geom.d2d)) {
        throw DomainError("d2d = " + format_double(geom.d2d) + " m is outside the validity range of the " +
                          std::string(env == Environment::UrbanEmbb ? "UMa" : "RMa") + (los ? " LOS" : " NLOS") +
                          " formula");
    }
    switch (env) {
    case Environment::UrbanEmbb:
        return los ? uma_los(geom, fc_ghz) : uma_nlos(geom, fc_ghz);
    case Environment::RuralEmbb:
        return los ? rma_los(geom, fc_ghz, params) : rma_nlos(geom, fc_ghz, params);
    }
    return 0.0;
}

double penetration_loss(PenetrationClass cls, double fc_ghz, const MaterialLoss& materials) {
    const double concrete = std::pow(10.0, -materials.concrete.at(fc_ghz) / 10.0);
    if (cls == PenetrationClass::Low) {
        const double glass = std::pow(10.0, -materials.glass.at(fc_ghz) / 10.0);
        return 5.0 - 10.0 * std::log10(0.3 * glass + 0.7 * concrete);
    }
    const double iir_glass = std::pow(10.0, -materials.iir_glass.at(fc_ghz) / 10.0);
    return 5.0 - 10.0 * std::log10(0.7 * iir_glass + 0.3 * concrete);
}

double element_gain(double azimuth_offset_deg, double zenith_offset_deg, const AntennaPattern& pattern) {
    const double phi = wrap_angle_deg(azimuth_offset_deg);
    const double a_h = -std::min(12.0 * std::pow(phi / pattern.horizontal_beamwidth_deg, 2.0), pattern.max_attenuation_db);
    const double a_v =
        -std::min(12.0 * std::pow(zenith_offset_deg / pattern.vertical_beamwidth_deg, 2.0), pattern.side_lobe_level_db);
    return pattern.max_gain_dbi - std::min(-(a_h + a_v), pattern.max_attenuation_db);
}

double shadow_sigma(Environment env, bool los, double d2d, double breakpoint) {
    switch (env) {
    case Environment::UrbanEmbb:
        return los ? 4.0 : 6.0;
    case Environment::RuralEmbb:
        if (!los) {
            return 8.0;
        }
        return d2d <= breakpoint ? 4.0 : 6.0;
    }
    return 0.0;
}

double shadow_fading(Rng& rng, double sigma_db) {
    if (sigma_db <= 0.0) {
        return 0.0;
    }
    std::normal_distribution<double> n(0.0, sigma_db);
    return n(rng);
}

ChannelRealization realize_link(const RadioProfile& radio, const LinkGeometry& geom, bool indoor, PenetrationClass cls,
                                Rng& rng) {
    ChannelRealization r;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double los_draw = u(rng);
    const double shadow_unit = std::normal_distribution<double>(0.0, 1.0)(rng);
    if (radio.force_los) {
        r.los = *radio.force_los;
    } else {
        r.los = los_draw < los_probability(radio.environment, geom.d2d, geom.ue_height);
    }
    if (radio.shadowing) {
        const double bp = breakpoint_distance(radio.environment, geom.bs_height, geom.ue_height, radio.carrier_ghz);
        r.shadow_db = shadow_sigma(radio.environment, r.los, geom.d2d, bp) * shadow_unit;
    }
    r.penetration_db = indoor ? penetration_loss(cls, radio.carrier_ghz, radio.materials) : 0.0;
    r.path_loss_db = path_loss(radio.environment, r.los, geom, radio.carrier_ghz, PropagationParams::from(radio));
    return r;
}

}  // namespace ranforge
