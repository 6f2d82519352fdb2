#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace rcmkf {

/// Spatial dimensionality of a tracking problem. Planar problems have no
/// elevation and a 4-element state (x, y, vx, vy); spatial problems have a
/// 6-element state (x, y, z, vx, vy, vz).
enum class Dim : int { Planar = 2, Spatial = 3 };

constexpr int axes(Dim d) { return static_cast<int>(d); }
constexpr int state_size(Dim d) { return 2 * axes(d); }
/// Length of the converted measurement vector: position axes plus the
/// range/range-rate pseudo-measurement.
constexpr int converted_size(Dim d) { return axes(d) + 1; }

Dim dim_from_state_size(Eigen::Index n);

/// Cartesian kinematic state, position block first then velocity block.
class StateVector {
public:
    explicit StateVector(Eigen::VectorXd values);

    static StateVector planar(double x, double y, double vx, double vy);
    static StateVector spatial(double x, double y, double z, double vx, double vy, double vz);

    Dim dim() const { return dim_; }
    Eigen::Index size() const { return values_.size(); }

    const Eigen::VectorXd& values() const { return values_; }
    Eigen::VectorXd position() const { return values_.head(axes(dim_)); }
    Eigen::VectorXd velocity() const { return values_.tail(axes(dim_)); }

    /// Position padded with z = 0 for planar states.
    Eigen::Vector3d position3() const;
    Eigen::Vector3d velocity3() const;

    double operator[](Eigen::Index i) const { return values_(i); }

private:
    Eigen::VectorXd values_;
    Dim dim_;
};

/// Radar noise standard deviations. Angles in radians.
struct NoiseSpec {
    double sigma_range = 0.0;       // m
    double sigma_bearing = 0.0;     // rad
    double sigma_elevation = 0.0;   // rad, 0 for planar radars
    double sigma_range_rate = 0.0;  // m/s
    double correlation = 0.0;       // range / range-rate error correlation

    /// Throws InvalidArgument on negative sigmas or |correlation| > 1.
    void validate() const;

    /// Joint covariance of the (range, range-rate) errors.
    Eigen::Matrix2d range_covariance() const;

    double range_cross() const { return correlation * sigma_range * sigma_range_rate; }
};

struct SphericalMeasurement {
    double range = 0.0;       // m
    double bearing = 0.0;     // rad
    double elevation = 0.0;   // rad, 0 for planar radars
    double range_rate = 0.0;  // m/s
    int step = 0;
};

/// Additive noise realization for one spherical measurement.
struct MeasurementNoiseDraw {
    double range = 0.0;
    double bearing = 0.0;
    double elevation = 0.0;
    double range_rate = 0.0;
};

constexpr double deg_to_rad(double deg) { return deg * 0.017453292519943295; }
constexpr double rad_to_deg(double rad) { return rad * 57.29577951308232; }

}  // namespace rcmkf
