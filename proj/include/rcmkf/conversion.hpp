#pragma once

#include "rcmkf/random.hpp"
#include "rcmkf/types.hpp"

#include <cstddef>
#include <string_view>

namespace rcmkf {

/// Expected cosines of Gaussian angle errors: E[cos e] = exp(-s^2/2) and
/// E[cos 2e] = exp(-2 s^2).
struct LambdaFactors {
    double bearing = 1.0;
    double bearing_double = 1.0;
    double elevation = 1.0;
    double elevation_double = 1.0;
};

LambdaFactors lambda_factors(const NoiseSpec& noise);

/// Mean and covariance of the converted-measurement error vector
/// (x, y[, z], eta). Sizes follow converted_size(dim).
struct ErrorMoments {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
};

enum class ConversionMethod { MeasurementConditioned, NestedConditioning };

std::string_view to_string(ConversionMethod method);

/// Cartesian position and range-times-range-rate pseudo-measurement with
/// the error moments attached by one of the conversion methods.
struct ConvertedMeasurement {
    Dim dim = Dim::Planar;
    Eigen::VectorXd position;  // 2 or 3 entries, m
    double pseudo = 0.0;       // m^2/s
    ErrorMoments moments;
    int step = 0;
    /// Set when the error statistics could not be formed; the filter treats
    /// such a step as predict-only.
    bool degenerate = false;

    /// (position, pseudo) stacked.
    Eigen::VectorXd stacked() const;
};

/// (r cos(el) cos(az), r cos(el) sin(az), r sin(el)).
Eigen::Vector3d convert_position(const SphericalMeasurement& m);

/// r * rdot.
double convert_pseudo(const SphericalMeasurement& m);

/// Error moments conditioned directly on the noisy measurement. In the
/// planar case the elevation terms are dropped (lambda_el = 1, el = 0).
/// Throws DegenerateCovariance if the assembled covariance is not PSD.
ErrorMoments unbiased_stats(const SphericalMeasurement& m, const NoiseSpec& noise, Dim dim);

/// Nested-conditioning moments: truth-conditioned moments averaged over the
/// truth distribution implied by the noisy measurement. Closed form.
ErrorMoments nested_stats(const SphericalMeasurement& m, const NoiseSpec& noise, Dim dim);

/// Reference evaluation of nested_stats by averaging the truth-conditioned
/// moments over `samples` hypothetical truths Z_m - n.
ErrorMoments nested_stats_sampled(const SphericalMeasurement& m, const NoiseSpec& noise, Dim dim,
                                  std::size_t samples, Rng& rng);

/// Moments of the error given the true spherical point (noise-free
/// measurement). Shared building block of the nested method.
ErrorMoments truth_conditioned_stats(const SphericalMeasurement& truth, const NoiseSpec& noise, Dim dim);

ErrorMoments conversion_stats(ConversionMethod method, const SphericalMeasurement& m,
                              const NoiseSpec& noise, Dim dim);

ConvertedMeasurement convert(const SphericalMeasurement& m, const NoiseSpec& noise, Dim dim,
                             ConversionMethod method);

/// Symmetrizes `cov` and clamps eigenvalues in (-1e-9 trace, 0) to zero.
/// Throws DegenerateCovariance on anything more negative or non-finite.
Eigen::MatrixXd repair_psd(const Eigen::MatrixXd& cov);

/// Brute-force measurement-conditioned moments: draws noise n, forms the
/// hypothetical truth Z = Z_m - n, and accumulates the sample mean and
/// covariance of converted(Z_m) - exact(Z). Standard errors are the delta
/// method estimates sqrt(Var/N) for each mean and covariance entry.
struct OracleMoments {
    ErrorMoments moments;
    Eigen::VectorXd mean_stderr;
    Eigen::MatrixXd covariance_stderr;
    std::size_t samples = 0;
};

/// Throws InvalidArgument when samples < 10^4.
OracleMoments mc_moment_oracle(const SphericalMeasurement& m, const NoiseSpec& noise, Dim dim,
                               std::size_t samples, Rng& rng);

}  // namespace rcmkf
