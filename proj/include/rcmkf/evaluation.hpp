#pragma once

#include "rcmkf/conversion.hpp"
#include "rcmkf/simulation.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rcmkf {

/// (e - bias)^T P^-1 (e - bias). Throws DegenerateCovariance if P is singular.
double normalized_error_squared(const Eigen::VectorXd& error, const Eigen::VectorXd& bias,
                                const Eigen::MatrixXd& covariance);

/// Sample average of the normalized error squared with one hypothesized
/// bias and covariance for all samples.
double nes(std::span<const Eigen::VectorXd> errors, const Eigen::VectorXd& bias, const Eigen::MatrixXd& covariance);

struct ChiSquareBounds {
    double lower = 0.0;
    double upper = 0.0;

    bool contains(double v) const { return v >= lower && v <= upper; }
};

/// Two-sided acceptance region for the average of `samples` chi-square
/// variables with `dof` degrees of freedom each:
/// [chi2_{dN}(tail), chi2_{dN}(1 - tail)] / N.
ChiSquareBounds chi_square_bounds(int dof, int samples, double tail);

/// Fixed target seen by a planar radar and the non-bearing noise levels.
struct SweepSetup {
    double range = 10e3;      // m
    double bearing = deg_to_rad(45.0);
    double range_rate = 100.0;  // m/s
    double sigma_range = 100.0;
    double sigma_range_rate = 5.0;
    double correlation = 0.0;
    std::vector<double> sigma_bearing_deg;
    int samples = 1000;
    double tail = 0.001;
    std::uint64_t seed = 42;
};

/// 0.5 deg, then 1, 2, ... up to `max_deg` inclusive.
std::vector<double> default_sweep_grid(double max_deg = 30.0);

struct NesReport {
    std::vector<double> sigma_bearing_deg;
    std::vector<double> average_nes;
    ChiSquareBounds bounds;
    std::vector<bool> inside;

    std::size_t excursions() const;
};

/// Error moments hypothesized for one noisy planar measurement.
using MomentsProvider = std::function<ErrorMoments(const SphericalMeasurement&, const NoiseSpec&)>;

/// For every grid value: draws `samples` noisy measurements of the fixed
/// target, converts them, and averages the normalized error squared of the
/// (x, y, eta) errors against the provider's moments. Grid point i draws
/// from derive_seed(seed, i), so every provider sees the same measurements.
/// Throws InvalidArgument on an empty grid.
NesReport consistency_sweep(const SweepSetup& setup, const MomentsProvider& provider);
NesReport consistency_sweep(const SweepSetup& setup, ConversionMethod method);

struct RmseReport {
    std::vector<int> steps;
    std::vector<double> rmse;  // m
    std::size_t runs = 0;

    /// Mean of rmse over steps in [first_step, last_step].
    double time_average(int first_step, int last_step) const;
};

/// Per-step sqrt(mean over runs of |position estimate - true position|^2).
/// Throws InvalidArgument when runs disagree in length or step indices.
RmseReport rmse(std::span<const RunRecord> runs);

/// Average state NEES per step. Not part of the benchmark figures; a
/// diagnostic of filter self-consistency.
struct NeesReport {
    std::vector<int> steps;
    std::vector<double> average_nees;
    ChiSquareBounds bounds;
};

NeesReport nees(std::span<const RunRecord> runs, double tail = 0.001);

}  // namespace rcmkf
