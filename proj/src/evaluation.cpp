#include "rcmkf/evaluation.hpp"

#include "rcmkf/errors.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace rcmkf {
namespace {

Eigen::LDLT<Eigen::MatrixXd> factor(const Eigen::MatrixXd& covariance) {
    if (covariance.rows() != covariance.cols() || covariance.rows() == 0) {
        throw InvalidArgument("hypothesized covariance must be square and non-empty");
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(covariance);
    const Eigen::VectorXd d = ldlt.vectorD();
    if (ldlt.info() != Eigen::Success || !d.allFinite() || !(d.minCoeff() > 1e-15 * d.cwiseAbs().maxCoeff())) {
        throw DegenerateCovariance("hypothesized covariance is singular");
    }
    return ldlt;
}

void check_same_steps(std::span<const RunRecord> runs) {
    if (runs.empty()) throw InvalidArgument("ensemble is empty");
    const auto& ref = runs.front().estimates;
    for (const auto& r : runs) {
        if (r.estimates.size() != ref.size()) throw InvalidArgument("runs have different lengths");
        for (std::size_t k = 0; k < ref.size(); ++k) {
            if (r.estimates[k].step != ref[k].step) throw InvalidArgument("runs have different step indices");
            if (static_cast<std::size_t>(r.estimates[k].step) >= r.truth.size()) {
                throw InvalidArgument("estimate step has no matching truth state");
            }
        }
    }
}

}  // namespace

double normalized_error_squared(const Eigen::VectorXd& error, const Eigen::VectorXd& bias,
                                const Eigen::MatrixXd& covariance) {
    if (error.size() != bias.size() || error.size() != covariance.rows()) {
        throw InvalidArgument("error, bias and covariance dimensions differ");
    }
    const Eigen::VectorXd e = error - bias;
    return e.dot(factor(covariance).solve(e));
}

double nes(std::span<const Eigen::VectorXd> errors, const Eigen::VectorXd& bias, const Eigen::MatrixXd& covariance) {
    if (errors.empty()) throw InvalidArgument("nes needs at least one sample");
    const auto ldlt = factor(covariance);
    double sum = 0.0;
    for (const auto& z : errors) {
        if (z.size() != bias.size()) throw InvalidArgument("error and bias dimensions differ");
        const Eigen::VectorXd e = z - bias;
        sum += e.dot(ldlt.solve(e));
    }
    return sum / static_cast<double>(errors.size());
}

ChiSquareBounds chi_square_bounds(int dof, int samples, double tail) {
    if (dof < 1 || samples < 1) throw InvalidArgument("chi-square bounds need dof >= 1 and samples >= 1");
    if (!(tail > 0.0 && tail < 0.5)) throw InvalidArgument("tail probability must lie in (0, 0.5)");
    const double total = static_cast<double>(dof) * samples;
    const boost::math::chi_squared dist(total);
    return {boost::math::quantile(dist, tail) / samples, boost::math::quantile(dist, 1.0 - tail) / samples};
}

std::vector<double> default_sweep_grid(double max_deg) {
    if (!(max_deg >= 0.5)) throw InvalidArgument("sweep maximum must be at least 0.5 degrees");
    std::vector<double> grid{0.5};
    for (int d = 1; d <= static_cast<int>(std::floor(max_deg + 1e-9)); ++d) grid.push_back(d);
    return grid;
}

std::size_t NesReport::excursions() const {
    return static_cast<std::size_t>(std::count(inside.begin(), inside.end(), false));
}

NesReport consistency_sweep(const SweepSetup& setup, const MomentsProvider& provider) {
    if (setup.sigma_bearing_deg.empty()) throw InvalidArgument("consistency sweep grid is empty");
    if (setup.samples < 1) throw InvalidArgument("consistency sweep needs at least one sample per point");

    NesReport report;
    report.sigma_bearing_deg = setup.sigma_bearing_deg;
    report.bounds = chi_square_bounds(3, setup.samples, setup.tail);

    const Eigen::Vector3d truth(setup.range * std::cos(setup.bearing), setup.range * std::sin(setup.bearing),
                                setup.range * setup.range_rate);

    for (std::size_t i = 0; i < setup.sigma_bearing_deg.size(); ++i) {
        NoiseSpec noise;
        noise.sigma_range = setup.sigma_range;
        noise.sigma_range_rate = setup.sigma_range_rate;
        noise.correlation = setup.correlation;
        noise.sigma_bearing = deg_to_rad(setup.sigma_bearing_deg[i]);
        noise.validate();

        Rng rng(derive_seed(setup.seed, i));
        double sum = 0.0;
        for (int s = 0; s < setup.samples; ++s) {
            const MeasurementNoiseDraw n = draw_measurement_noise(noise, Dim::Planar, rng);
            SphericalMeasurement m;
            m.range = setup.range + n.range;
            m.bearing = setup.bearing + n.bearing;
            m.range_rate = setup.range_rate + n.range_rate;

            const Eigen::Vector3d error(m.range * std::cos(m.bearing) - truth(0),
                                        m.range * std::sin(m.bearing) - truth(1),
                                        convert_pseudo(m) - truth(2));
            const ErrorMoments mom = provider(m, noise);
            sum += normalized_error_squared(error, mom.mean, mom.covariance);
        }
        const double avg = sum / setup.samples;
        report.average_nes.push_back(avg);
        report.inside.push_back(report.bounds.contains(avg));
    }
    return report;
}

NesReport consistency_sweep(const SweepSetup& setup, ConversionMethod method) {
    return consistency_sweep(setup, [method](const SphericalMeasurement& m, const NoiseSpec& noise) {
        return conversion_stats(method, m, noise, Dim::Planar);
    });
}

double RmseReport::time_average(int first_step, int last_step) const {
    double sum = 0.0;
    int count = 0;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        if (steps[k] >= first_step && steps[k] <= last_step) {
            sum += rmse[k];
            ++count;
        }
    }
    if (count == 0) throw InvalidArgument("no RMSE samples in the requested step window");
    return sum / count;
}

RmseReport rmse(std::span<const RunRecord> runs) {
    check_same_steps(runs);
    const auto& ref = runs.front().estimates;
    RmseReport report;
    report.runs = runs.size();
    for (std::size_t k = 0; k < ref.size(); ++k) {
        double sum = 0.0;
        for (const auto& r : runs) {
            const int step = r.estimates[k].step;
            const Eigen::VectorXd est = r.estimates[k].belief.mean;
            const int p = axes(r.truth[step].dim());
            sum += (est.head(p) - r.truth[step].position()).squaredNorm();
        }
        report.steps.push_back(ref[k].step);
        report.rmse.push_back(std::sqrt(sum / static_cast<double>(runs.size())));
    }
    return report;
}

NeesReport nees(std::span<const RunRecord> runs, double tail) {
    check_same_steps(runs);
    const auto& ref = runs.front().estimates;
    NeesReport report;
    const int n = static_cast<int>(runs.front().truth.front().size());
    report.bounds = chi_square_bounds(n, static_cast<int>(runs.size()), tail);
    for (std::size_t k = 0; k < ref.size(); ++k) {
        double sum = 0.0;
        for (const auto& r : runs) {
            const auto& b = r.estimates[k].belief;
            sum += normalized_error_squared(b.mean, r.truth[r.estimates[k].step].values(), b.covariance);
        }
        report.steps.push_back(ref[k].step);
        report.average_nees.push_back(sum / static_cast<double>(runs.size()));
    }
    return report;
}

}  // namespace rcmkf
