#include "rcmkf/scenario.hpp"

#include "rcmkf/errors.hpp"

#include <cmath>
#include <string>

namespace rcmkf {

DynamicModel DynamicModel::constant_velocity(Dim dim, double period, double accel_std) {
    if (!(period > 0.0)) throw InvalidArgument("sampling period must be positive");
    if (!(accel_std >= 0.0)) throw InvalidArgument("process noise std must be non-negative");
    const int a = axes(dim);
    const int n = state_size(dim);

    DynamicModel m;
    m.dim = dim;
    m.period = period;
    m.transition = Eigen::MatrixXd::Identity(n, n);
    m.transition.topRightCorner(a, a) = period * Eigen::MatrixXd::Identity(a, a);

    m.noise_input = Eigen::MatrixXd::Zero(n, a);
    m.noise_input.topRows(a) = 0.5 * period * period * Eigen::MatrixXd::Identity(a, a);
    m.noise_input.bottomRows(a) = period * Eigen::MatrixXd::Identity(a, a);
    m.control_input = m.noise_input;
    m.process_noise = accel_std * accel_std * Eigen::MatrixXd::Identity(a, a);
    m.white_accel_std = accel_std;
    return m;
}

Eigen::MatrixXd DynamicModel::process_covariance() const {
    return noise_input * process_noise * noise_input.transpose();
}

double DynamicModel::accel_std() const { return white_accel_std; }

ManeuverSchedule::ManeuverSchedule(std::vector<ManeuverEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i > 0 && entries_[i].start_step <= entries_[i - 1].start_step) {
            throw InvalidArgument("maneuver entries must be sorted by strictly increasing start step");
        }
        if (!entries_[i].acceleration.allFinite()) {
            throw InvalidArgument("maneuver acceleration must be finite");
        }
    }
}

Eigen::VectorXd ManeuverSchedule::acceleration_at(int step, Dim dim) const {
    Eigen::VectorXd accel = Eigen::VectorXd::Zero(axes(dim));
    for (const auto& e : entries_) {
        if (e.start_step > step) break;
        if (e.acceleration.size() != axes(dim)) {
            throw InvalidArgument("maneuver acceleration has wrong number of axes");
        }
        accel = e.acceleration;
    }
    return accel;
}

void Scenario::validate() const {
    if (steps < 1) throw InvalidArgument("scenario needs at least one step");
    if (runs < 1) throw InvalidArgument("scenario needs at least one run");
    if (initial.dim() != model.dim) throw InvalidArgument("initial state dimension does not match model");
    for (const auto& e : maneuvers.entries()) {
        if (e.acceleration.size() != axes(model.dim)) {
            throw InvalidArgument("maneuver acceleration has wrong number of axes");
        }
    }
    noise.validate();
}

StateVector propagate_truth(const DynamicModel& model, const StateVector& state,
                            const Eigen::VectorXd& accel, const Eigen::VectorXd& process_noise_draw) {
    const int n = state_size(model.dim);
    const int a = axes(model.dim);
    if (state.size() != n || model.transition.rows() != n) {
        throw InvalidArgument("state dimension does not match dynamic model");
    }
    if (accel.size() != a || process_noise_draw.size() != a) {
        throw InvalidArgument("acceleration and process noise must have one entry per axis");
    }
    return StateVector(model.transition * state.values() + model.control_input * accel +
                       model.noise_input * process_noise_draw);
}

SphericalMeasurement measure(const StateVector& state, const MeasurementNoiseDraw& noise_draw, int step) {
    const Eigen::Vector3d p = state.position3();
    const Eigen::Vector3d v = state.velocity3();
    const double range = p.norm();
    if (!(range > 0.0)) throw UndefinedGeometry("target position coincides with the sensor");

    SphericalMeasurement m;
    m.step = step;
    m.range = range + noise_draw.range;
    m.bearing = std::atan2(p.y(), p.x()) + noise_draw.bearing;
    if (state.dim() == Dim::Spatial) {
        m.elevation = std::atan2(p.z(), std::hypot(p.x(), p.y())) + noise_draw.elevation;
    }
    m.range_rate = p.dot(v) / range + noise_draw.range_rate;
    return m;
}

MeasurementNoiseDraw draw_measurement_noise(const NoiseSpec& noise, Dim dim, Rng& rng) {
    noise.validate();
    // (range, range-rate) through the 2x2 Cholesky factor of their covariance.
    const double u = rng.gaussian();
    const double w = rng.gaussian();
    const double rho = noise.correlation;

    MeasurementNoiseDraw d;
    d.range = noise.sigma_range * u;
    d.range_rate = noise.sigma_range_rate * (rho * u + std::sqrt(1.0 - rho * rho) * w);
    d.bearing = rng.gaussian(noise.sigma_bearing);
    if (dim == Dim::Spatial) d.elevation = rng.gaussian(noise.sigma_elevation);
    return d;
}

Scenario generate_case(int case_id) {
    if (case_id != 1 && case_id != 2) {
        throw InvalidArgument("unknown case " + std::to_string(case_id) + " (expected 1 or 2)");
    }
    Scenario s;
    s.case_id = case_id;
    s.model = DynamicModel::constant_velocity(Dim::Planar, 1.0, 0.01);
    s.noise.sigma_range = 200.0;
    s.noise.sigma_bearing = deg_to_rad(2.5);
    s.noise.sigma_elevation = 0.0;
    s.noise.sigma_range_rate = 1.0;
    s.noise.correlation = 0.3;
    s.steps = 100;
    s.runs = 500;
    s.seed = 42;

    if (case_id == 1) {
        s.initial = StateVector::planar(80e3, 80e3, 200.0, 200.0);
    } else {
        s.initial = StateVector::planar(80e3, 80e3, 0.0, 200.0);
        const int starts[] = {31, 38, 49, 61, 65, 66, 81};
        const double accels[] = {5.0, -8.0, 10.0, 0.0, -10.0, -5.0, 0.0};
        std::vector<ManeuverEntry> entries;
        for (int i = 0; i < 7; ++i) {
            entries.push_back({starts[i], Eigen::Vector2d::Constant(accels[i])});
        }
        s.maneuvers = ManeuverSchedule(std::move(entries));
    }
    return s;
}

std::vector<StateVector> generate_truth(const Scenario& scenario, Rng& rng) {
    scenario.validate();
    const Dim dim = scenario.dim();
    const double q = scenario.model.accel_std();

    std::vector<StateVector> truth;
    truth.reserve(static_cast<std::size_t>(scenario.steps));
    truth.push_back(scenario.initial);
    for (int k = 0; k + 1 < scenario.steps; ++k) {
        Eigen::VectorXd w(axes(dim));
        for (int i = 0; i < axes(dim); ++i) w(i) = rng.gaussian(q);
        truth.push_back(propagate_truth(scenario.model, truth.back(),
                                        scenario.maneuvers.acceleration_at(k, dim), w));
    }
    return truth;
}

std::vector<SphericalMeasurement> generate_measurements(const std::vector<StateVector>& truth,
                                                        const NoiseSpec& noise, Rng& rng) {
    std::vector<SphericalMeasurement> out;
    out.reserve(truth.size());
    for (std::size_t k = 0; k < truth.size(); ++k) {
        out.push_back(measure(truth[k], draw_measurement_noise(noise, truth[k].dim(), rng),
                              static_cast<int>(k)));
    }
    return out;
}

}  // namespace rcmkf
