#pragma once

#include "kstab/numeric.hpp"
#include "kstab/spectra.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace kstab {

/// A test configuration with the optional numeric inputs that accompany it.
struct LoadedConfiguration {
    TestConfiguration config;
    /// Parametrization of the generic fiber X (single chart).
    Cycle fiber;
    /// Components and multiplicities of the central fiber cycle.
    Cycle cycle;
    /// Evaluation points in homogeneous coordinates, explicit points first.
    std::vector<CVector> points;
};

/// Reads and validates a JSON configuration. Throws ValidationError with a
/// message naming the offending field or generator.
LoadedConfiguration parse_configuration(const nlohmann::json& doc);
LoadedConfiguration load_configuration(const std::string& path);

}  // namespace kstab
