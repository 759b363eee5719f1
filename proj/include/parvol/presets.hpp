#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "parvol/numeric.hpp"

namespace parvol {

inline constexpr const char* kVersion = "0.1.0";

struct Expectation {
    std::string name;
    bool met = false;
    std::string detail;
};

/// A profile computed by a preset, tagged with whether its body is convex.
struct NamedProfile {
    std::string label;
    VolumeProfile profile;
    bool convex_body = true;
};

struct PresetResult {
    std::string name;
    std::string description;
    nlohmann::json report;  // preset-specific measurements
    std::vector<Expectation> expectations;
    std::vector<NamedProfile> profiles;

    bool ok() const;
    /// Full report: version, seed, grid, scene hashes, measurements and expectations.
    nlohmann::json to_json() const;
};

struct PresetOptions {
    std::uint64_t seed = 1;
};

std::vector<std::string> preset_names();

/// Throws ContractViolation for an unknown name.
PresetResult run_preset(const std::string& name, const PresetOptions& options = {});

/// Convex polygon with k vertices on a jittered ellipse, counter-clockwise.
std::vector<Vec2> random_convex_polygon(std::uint64_t seed, int k);

}  // namespace parvol
