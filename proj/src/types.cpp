#include "rcmkf/types.hpp"

#include "rcmkf/errors.hpp"

#include <cmath>
#include <string>

namespace rcmkf {

Dim dim_from_state_size(Eigen::Index n) {
    if (n == 4) return Dim::Planar;
    if (n == 6) return Dim::Spatial;
    throw InvalidArgument("state vector must have 4 or 6 elements, got " + std::to_string(n));
}

StateVector::StateVector(Eigen::VectorXd values)
    : values_(std::move(values)), dim_(dim_from_state_size(values_.size())) {}

StateVector StateVector::planar(double x, double y, double vx, double vy) {
    return StateVector(Eigen::Vector4d(x, y, vx, vy));
}

StateVector StateVector::spatial(double x, double y, double z, double vx, double vy, double vz) {
    Eigen::VectorXd v(6);
    v << x, y, z, vx, vy, vz;
    return StateVector(std::move(v));
}

Eigen::Vector3d StateVector::position3() const {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    p.head(axes(dim_)) = values_.head(axes(dim_));
    return p;
}

Eigen::Vector3d StateVector::velocity3() const {
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    v.head(axes(dim_)) = values_.tail(axes(dim_));
    return v;
}

void NoiseSpec::validate() const {
    const auto finite_nonneg = [](double s) { return std::isfinite(s) && s >= 0.0; };
    if (!finite_nonneg(sigma_range) || !finite_nonneg(sigma_bearing) ||
        !finite_nonneg(sigma_elevation) || !finite_nonneg(sigma_range_rate)) {
        throw InvalidArgument("noise standard deviations must be finite and non-negative");
    }
    if (!std::isfinite(correlation) || std::abs(correlation) > 1.0) {
        throw InvalidArgument("range/range-rate correlation must lie in [-1, 1]");
    }
}

Eigen::Matrix2d NoiseSpec::range_covariance() const {
    Eigen::Matrix2d c;
    c << sigma_range * sigma_range, range_cross(), range_cross(),
        sigma_range_rate * sigma_range_rate;
    return c;
}

}  // namespace rcmkf
