#pragma once

#include "rcmkf/conversion.hpp"
#include "rcmkf/scenario.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace rcmkf {

struct GaussianBelief {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;

    Dim dim() const { return dim_from_state_size(mean.size()); }
};

/// Converted measurement after removing the correlation between the
/// position errors and the pseudo-measurement error:
///   eps = L p + eta with L = -R_ep R_pp^-1,
/// so that the position part and eps have uncorrelated errors.
struct DecorrelatedMeasurement {
    Eigen::VectorXd position;
    Eigen::VectorXd position_bias;
    Eigen::MatrixXd position_covariance;

    double pseudo = 0.0;
    double pseudo_bias = 0.0;
    double pseudo_variance = 0.0;

    Eigen::RowVectorXd decorrelation;  // L

    Dim dim() const { return static_cast<Dim>(position.size()); }
};

/// Throws DegenerateCovariance when the position block is singular.
DecorrelatedMeasurement decorrelate(const ConvertedMeasurement& z);

/// Time update with zero control input.
GaussianBelief kf_predict(const GaussianBelief& belief, const DynamicModel& model);

/// Linear update on the bias-compensated converted position (Joseph form).
/// Throws DegenerateCovariance if the innovation covariance is singular.
GaussianBelief kf_update_position(const GaussianBelief& belief, const DecorrelatedMeasurement& d);

/// L p + p . v for state X = (p, v).
double pseudo_function(const Eigen::VectorXd& state, const Eigen::RowVectorXd& decorrelation);

/// Second-order expansion of pseudo_function about a Gaussian belief. For a
/// quadratic h these terms are exact:
///   E[h(X)]   = h(mean) + correction / 2        (correction = delta^2)
///   Var[h(X)] = J P J^T + variance_inflation    (variance_inflation = A)
struct PseudoLinearization {
    Eigen::RowVectorXd jacobian;
    double correction = 0.0;
    double variance_inflation = 0.0;
};

PseudoLinearization linearize_pseudo(const GaussianBelief& belief, const Eigen::RowVectorXd& decorrelation);

/// Second-order EKF update on the decorrelated pseudo-measurement. `belief`
/// must be the position-updated estimate. Throws DegenerateCovariance if
/// the scalar innovation variance is not positive.
GaussianBelief ekf_update_pseudo(const GaussianBelief& belief, const DecorrelatedMeasurement& d);

enum class FilterVariant { RCMKF_U, RCMKF_D };

std::string_view to_string(FilterVariant v);
/// Accepts "RCMKF-U"/"rcmkfu"/"u" style spellings.
FilterVariant parse_variant(std::string_view name);
ConversionMethod conversion_method(FilterVariant v);

/// Two-point differencing from consecutive converted positions. Position is
/// the bias-compensated second measurement, velocity the difference over
/// `period`. Throws InvalidArgument if period <= 0.
GaussianBelief initialize_belief(const ConvertedMeasurement& first, const ConvertedMeasurement& second,
                                 double period);

struct FilterStep {
    int step = 0;
    GaussianBelief belief;
    bool update_skipped = false;
};

/// Sequential filter over already-converted measurements: predict, then
/// decorrelate, position update, pseudo update. A step whose update raises
/// DegenerateCovariance is reported as predict-only.
std::vector<FilterStep> run_filter(std::span<const ConvertedMeasurement> measurements, const DynamicModel& model,
                                   const GaussianBelief& init);

/// Convenience pipeline: converts each spherical measurement with the
/// variant's statistics and runs the sequential filter.
std::vector<FilterStep> run_filter(FilterVariant variant, std::span<const SphericalMeasurement> measurements,
                                   const NoiseSpec& noise, const DynamicModel& model, const GaussianBelief& init);

/// Number of leading measurements consumed by initialize_belief.
inline constexpr int kInitializationSteps = 2;

/// Initializes from the first two measurements and filters the rest.
/// Throws InvalidArgument for fewer than three measurements.
std::vector<FilterStep> track(FilterVariant variant, std::span<const SphericalMeasurement> measurements,
                              const NoiseSpec& noise, const DynamicModel& model);

}  // namespace rcmkf
