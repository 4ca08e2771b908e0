#pragma once

// Large-scale propagation for the urban macro (UMa) and rural macro (RMa)
// scenarios: LOS probability, path loss, shadowing, building penetration and
// the sector antenna element pattern.

#include "ranforge/common.hpp"
#include "ranforge/environment.hpp"

namespace ranforge {

inline constexpr double kSpeedOfLight = 3.0e8;

struct LinkGeometry {
    double d2d = 0.0;
    double d3d = 0.0;
    double bs_height = 0.0;
    double ue_height = 0.0;
    double azimuth_offset_deg = 0.0;  // from sector boresight, (-180, 180]
    double zenith_offset_deg = 0.0;   // from the electrically tilted boresight

    static LinkGeometry between(Vec2 bs, double bs_height, Vec2 ue, double ue_height, double boresight_deg,
                                double downtilt_deg);
};

struct PropagationParams {
    double building_height_m = 5.0;  // RMa average building height
    double street_width_m = 20.0;    // RMa average street width

    static PropagationParams from(const RadioProfile& radio) {
        return {radio.building_height_m, radio.street_width_m};
    }
};

enum class ValidityMode { Strict, Permissive };

double los_probability(Environment env, double d2d, double ue_height);

/// LOS breakpoint distance. UMa uses the effective-height form with an
/// environment height of 1 m.
double breakpoint_distance(Environment env, double bs_height, double ue_height, double fc_ghz);

/// Whether d2d lies inside the published validity range of the formula.
bool within_validity(Environment env, bool los, double d2d);

/// Basic path loss in dB. Throws DomainError outside the validity range in
/// Strict mode; Permissive evaluates the formula as-is.
double path_loss(Environment env, bool los, const LinkGeometry& geom, double fc_ghz,
                 const PropagationParams& params = {}, ValidityMode mode = ValidityMode::Permissive);

/// Outdoor-to-indoor wall penetration: low-loss mix of standard glass and
/// concrete (30/70) or high-loss mix of IIR glass and concrete (70/30).
double penetration_loss(PenetrationClass cls, double fc_ghz, const MaterialLoss& materials = {});

/// Sector element gain in dBi at the given offsets from boresight.
double element_gain(double azimuth_offset_deg, double zenith_offset_deg, const AntennaPattern& pattern = {});

double shadow_sigma(Environment env, bool los, double d2d, double breakpoint);

/// Zero-mean log-normal shadowing draw in dB.
double shadow_fading(Rng& rng, double sigma_db);

/// Per-link large-scale state; drawn once per (UE, transmitter) and kept.
struct ChannelRealization {
    bool los = true;
    double shadow_db = 0.0;
    double penetration_db = 0.0;
    double path_loss_db = 0.0;

    friend bool operator==(const ChannelRealization&, const ChannelRealization&) = default;
};

/// Draws LOS state and shadowing for a link; path loss and penetration are
/// filled from the geometry and the UE's building class.
ChannelRealization realize_link(const RadioProfile& radio, const LinkGeometry& geom, bool indoor,
                                PenetrationClass cls, Rng& rng);

}  // namespace ranforge
