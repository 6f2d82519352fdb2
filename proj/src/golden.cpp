#include "rcmkf/golden.hpp"

namespace rcmkf {

std::vector<OperatingPoint> oracle_grid() {
    const double ranges[] = {1e3, 10e3, 100e3};
    const double sigma_bearing_deg[] = {1.0, 5.0, 15.0, 30.0};
    const double correlations[] = {0.0, 0.3, 0.9};
    const double elevations_deg[] = {-30.0, -10.0, 5.0, 20.0, 40.0};
    const double range_rates[] = {100.0, -250.0, 30.0, 0.0};
    const double sigma_ranges[] = {50.0, 100.0, 200.0};

    std::vector<OperatingPoint> grid;
    for (int i = 0; i < 20; ++i) {
        OperatingPoint p;
        p.dim = Dim::Spatial;
        p.measurement.range = ranges[i % 3];
        p.measurement.bearing = deg_to_rad(-170.0 + 37.0 * i);
        p.measurement.elevation = deg_to_rad(elevations_deg[i % 5]);
        p.measurement.range_rate = range_rates[i % 4];
        p.noise.sigma_range = sigma_ranges[(i / 4) % 3];
        p.noise.sigma_bearing = deg_to_rad(sigma_bearing_deg[i % 4]);
        p.noise.sigma_elevation = deg_to_rad(sigma_bearing_deg[(i + 1) % 4] * 0.5);
        p.noise.sigma_range_rate = 5.0;
        p.noise.correlation = correlations[(i / 3) % 3];
        grid.push_back(p);
    }
    return grid;
}

std::vector<GoldenRow> golden_table(std::span<const OperatingPoint> points, std::size_t samples, std::uint64_t seed) {
    std::vector<GoldenRow> rows;
    rows.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        Rng rng(derive_seed(seed, i));
        rows.push_back({points[i], mc_moment_oracle(points[i].measurement, points[i].noise, points[i].dim, samples, rng)});
    }
    return rows;
}

}  // namespace rcmkf
