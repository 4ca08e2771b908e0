#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ranforge {

/// Planar position in meters.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

double distance(Vec2 a, Vec2 b);

/// Bearing from `from` to `to`, degrees counter-clockwise from +x, in [0, 360).
double bearing_deg(Vec2 from, Vec2 to);

/// Wraps an angle to (-180, 180].
double wrap_angle_deg(double deg);

struct Box {
    Vec2 min;
    Vec2 max;

    bool contains(Vec2 p, double tol = 1e-9) const {
        return p.x >= min.x - tol && p.x <= max.x + tol && p.y >= min.y - tol && p.y <= max.y + tol;
    }
    friend bool operator==(const Box&, const Box&) = default;
};

enum class Environment { UrbanEmbb, RuralEmbb };

std::string_view to_string(Environment env);
std::optional<Environment> parse_environment(std::string_view name);

enum class Kpi { Rsrp, Rsrq, Sinr, CouplingGain, ServingDistance, Position };

std::string_view to_string(Kpi kpi);
std::optional<Kpi> parse_kpi(std::string_view name);

enum class FaultKind { TooLateHandover, ExcessivePowerReduction, InterCellInterference };

std::string_view to_string(FaultKind kind);
std::optional<FaultKind> parse_fault_kind(std::string_view name);

enum class PenetrationClass { Low, High };

// ---------------------------------------------------------------------------
// Errors. Every failure the tool reports maps onto one of these; the CLI turns
// them into exit codes.

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed scenario input: unknown key or wrong type.
class SchemaError : public Error {
public:
    SchemaError(std::string key_path, const std::string& what)
        : Error(key_path + ": " + what), key_path_(std::move(key_path)) {}
    const std::string& key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

/// Well-formed scenario input that violates an invariant.
class ValidationError : public Error {
public:
    ValidationError(std::string key_path, const std::string& what)
        : Error(key_path + ": " + what), key_path_(std::move(key_path)) {}
    const std::string& key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Propagation formula evaluated outside its validity range.
class DomainError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class MissingReference : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Random streams. Each consumer draws from its own stream derived from the run
// seed, so results never depend on evaluation order or thread count.

using Rng = std::mt19937_64;

enum class Stream : std::uint32_t {
    UeDrop = 1,
    Channel = 2,
    Mobility = 3,
    Background = 4,
};

Rng make_stream(std::uint64_t seed, Stream stream, std::uint64_t a = 0, std::uint64_t b = 0);

// ---------------------------------------------------------------------------
// Text formatting used by every emitted file. Shortest round-trip form keeps
// CSV outputs both byte-deterministic and lossless.

std::string format_double(double v);
std::string format_fixed(double v, int decimals);

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

}  // namespace ranforge
