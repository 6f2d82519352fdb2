#pragma once

#include "rcmkf/random.hpp"
#include "rcmkf/types.hpp"

#include <cstdint>
#include <vector>

namespace rcmkf {

/// Linear target dynamics X+ = F X + G u + Gamma w with w ~ N(0, Q).
struct DynamicModel {
    Dim dim = Dim::Planar;
    double period = 1.0;           // s
    Eigen::MatrixXd transition;    // n x n
    Eigen::MatrixXd noise_input;   // n x axes
    Eigen::MatrixXd process_noise; // axes x axes
    Eigen::MatrixXd control_input; // n x axes
    double white_accel_std = 0.0;  // m/s^2, as given to constant_velocity

    /// Constant-velocity model with white-acceleration noise of standard
    /// deviation `accel_std` (m/s^2) on every axis. Control and noise enter
    /// through the same [T^2/2; T] blocks.
    static DynamicModel constant_velocity(Dim dim, double period, double accel_std);

    /// Gamma Q Gamma^T.
    Eigen::MatrixXd process_covariance() const;

    double accel_std() const;
};

struct ManeuverEntry {
    int start_step = 0;
    Eigen::VectorXd acceleration;  // m/s^2 per axis
};

/// Piecewise-constant acceleration profile, applied to truth only.
/// An entry's acceleration holds from its start step until the next entry.
class ManeuverSchedule {
public:
    ManeuverSchedule() = default;
    /// Throws InvalidArgument if entries are unsorted or non-finite.
    explicit ManeuverSchedule(std::vector<ManeuverEntry> entries);

    /// Acceleration acting during the transition from `step` to `step + 1`.
    Eigen::VectorXd acceleration_at(int step, Dim dim) const;

    const std::vector<ManeuverEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<ManeuverEntry> entries_;
};

struct Scenario {
    int case_id = 0;  // 0 for user-defined scenarios
    DynamicModel model = DynamicModel::constant_velocity(Dim::Planar, 1.0, 0.0);
    StateVector initial = StateVector::planar(0, 0, 0, 0);
    ManeuverSchedule maneuvers;
    NoiseSpec noise;
    int steps = 1;
    int runs = 1;
    std::uint64_t seed = 0;

    Dim dim() const { return model.dim; }
    /// Throws InvalidArgument on inconsistent dimensions, steps < 1 or runs < 1.
    void validate() const;
};

/// F X + G accel + Gamma noise. Deterministic given its inputs.
StateVector propagate_truth(const DynamicModel& model, const StateVector& state,
                            const Eigen::VectorXd& accel, const Eigen::VectorXd& process_noise_draw);

/// Noisy range, bearing, elevation and range rate of `state` seen from the
/// origin. Planar states produce elevation 0 and ignore the elevation draw.
/// Throws UndefinedGeometry when the position is the zero vector.
SphericalMeasurement measure(const StateVector& state, const MeasurementNoiseDraw& noise_draw,
                             int step = 0);

/// Correlated (range, range-rate) pair plus independent angle errors.
/// The elevation draw is zero for planar problems.
MeasurementNoiseDraw draw_measurement_noise(const NoiseSpec& noise, Dim dim, Rng& rng);

/// The two benchmark engagements: 1 is a constant-velocity crossing target,
/// 2 is a target with seven acceleration segments. Throws InvalidArgument
/// for any other id.
Scenario generate_case(int case_id);

/// Truth states X_0 .. X_{steps-1} with process noise drawn from `rng`.
std::vector<StateVector> generate_truth(const Scenario& scenario, Rng& rng);

std::vector<SphericalMeasurement> generate_measurements(const std::vector<StateVector>& truth,
                                                        const NoiseSpec& noise, Rng& rng);

}  // namespace rcmkf
