#include "ranforge/common.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <system_error>

namespace ranforge {

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double bearing_deg(Vec2 from, Vec2 to) {
    double deg = std::atan2(to.y - from.y, to.x - from.x) * 180.0 / std::numbers::pi;
    if (deg < 0.0) {
        deg += 360.0;
    }
    if (deg >= 360.0) {
        deg -= 360.0;
    }
    return deg;
}

double wrap_angle_deg(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w <= -180.0) {
        w += 360.0;
    } else if (w > 180.0) {
        w -= 360.0;
    }
    return w;
}

std::string_view to_string(Environment env) {
    switch (env) {
    case Environment::UrbanEmbb:
        return "urban_embb";
    case Environment::RuralEmbb:
        return "rural_embb";
    }
    return "unknown";
}

std::optional<Environment> parse_environment(std::string_view name) {
    if (name == "urban_embb") {
        return Environment::UrbanEmbb;
    }
    if (name == "rural_embb") {
        return Environment::RuralEmbb;
    }
    return std::nullopt;
}

namespace {
constexpr std::array<std::pair<Kpi, std::string_view>, 6> kKpiNames{{
    {Kpi::Rsrp, "rsrp"},
    {Kpi::Rsrq, "rsrq"},
    {Kpi::Sinr, "sinr"},
    {Kpi::CouplingGain, "coupling_gain"},
    {Kpi::ServingDistance, "serving_distance"},
    {Kpi::Position, "position"},
}};

constexpr std::array<std::pair<FaultKind, std::string_view>, 3> kFaultNames{{
    {FaultKind::TooLateHandover, "too_late_handover"},
    {FaultKind::ExcessivePowerReduction, "excessive_power_reduction"},
    {FaultKind::InterCellInterference, "inter_cell_interference"},
}};
}  // namespace

std::string_view to_string(Kpi kpi) {
    for (const auto& [k, name] : kKpiNames) {
        if (k == kpi) {
            return name;
        }
    }
    return "unknown";
}

std::optional<Kpi> parse_kpi(std::string_view name) {
    for (const auto& [k, n] : kKpiNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

std::string_view to_string(FaultKind kind) {
    for (const auto& [k, name] : kFaultNames) {
        if (k == kind) {
            return name;
        }
    }
    return "unknown";
}

std::optional<FaultKind> parse_fault_kind(std::string_view name) {
    for (const auto& [k, n] : kFaultNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

Rng make_stream(std::uint64_t seed, Stream stream, std::uint64_t a, std::uint64_t b) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed & 0xffffffffu),
        static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream),
        static_cast<std::uint32_t>(a & 0xffffffffu),
        static_cast<std::uint32_t>(a >> 32),
        static_cast<std::uint32_t>(b & 0xffffffffu),
        static_cast<std::uint32_t>(b >> 32),
    };
    return Rng(seq);
}

std::string format_double(double v) {
    if (v == 0.0) {
        return "0";  // folds -0
    }
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) {
        throw Error("format_double: conversion failed");
    }
    return std::string(buf.data(), end);
}

std::string format_fixed(double v, int decimals) {
    std::array<char, 64> buf{};
    auto [end, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, decimals);
    if (ec != std::errc{}) {
        throw Error("format_fixed: conversion failed");
    }
    std::string out(buf.data(), end);
    if (out.starts_with('-') && out.find_first_not_of("-0.") == std::string::npos) {
        out.erase(0, 1);
    }
    return out;
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

}  // namespace ranforge
