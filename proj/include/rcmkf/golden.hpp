#pragma once

#include "rcmkf/conversion.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rcmkf {

struct OperatingPoint {
    Dim dim = Dim::Spatial;
    SphericalMeasurement measurement;
    NoiseSpec noise;
};

/// Twenty spatial operating points crossing r in {1, 10, 100} km, bearing
/// sigma in {1, 5, 15, 30} deg and correlation in {0, 0.3, 0.9}, with
/// bearings and elevations spread over all quadrants.
std::vector<OperatingPoint> oracle_grid();

struct GoldenRow {
    OperatingPoint point;
    OracleMoments oracle;
};

/// mc_moment_oracle at every point; point i draws from derive_seed(seed, i).
std::vector<GoldenRow> golden_table(std::span<const OperatingPoint> points, std::size_t samples, std::uint64_t seed);

}  // namespace rcmkf
