#pragma once

// Run manifest: what produced an output directory and the digest of every
// file in it.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ranforge {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kManifestName = "manifest.json";

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

struct ManifestEntry {
    std::string path;  // relative to the output directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    std::string command;
    std::string scenario_sha256;
    std::uint64_t seed = 0;
    std::string tool_version{kToolVersion};
    std::string created_utc;
    std::vector<ManifestEntry> files;  // sorted by path

    std::string to_json() const;
    static RunManifest from_json(std::string_view text);
};

/// Inventories every regular file under `dir` except the manifest itself.
std::vector<ManifestEntry> inventory(const std::filesystem::path& dir);

std::string utc_timestamp();

/// Writes via a temporary sibling and rename, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Inventories `dir` and writes its manifest atomically.
RunManifest write_manifest(const std::filesystem::path& dir, std::string command, std::string scenario_sha256,
                           std::uint64_t seed);

}  // namespace ranforge
