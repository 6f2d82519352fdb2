#include "rcmkf/conversion.hpp"
#include "rcmkf/errors.hpp"

#include <cmath>

namespace rcmkf {
namespace {

// Error vector converted(Z_m) - exact(Z) for one hypothetical truth Z.
void sample_error(const SphericalMeasurement& m, const Eigen::VectorXd& converted, const NoiseSpec& noise,
                  Dim dim, Rng& rng, Eigen::VectorXd& out) {
    const double u = rng.gaussian();
    const double w = rng.gaussian();
    const double rho = noise.correlation;
    const double r = m.range - noise.sigma_range * u;
    const double rd = m.range_rate - noise.sigma_range_rate * (rho * u + std::sqrt(1.0 - rho * rho) * w);
    const double az = m.bearing - rng.gaussian(noise.sigma_bearing);

    if (dim == Dim::Spatial) {
        const double el = m.elevation - rng.gaussian(noise.sigma_elevation);
        const double ce = std::cos(el);
        out(0) = converted(0) - r * ce * std::cos(az);
        out(1) = converted(1) - r * ce * std::sin(az);
        out(2) = converted(2) - r * std::sin(el);
        out(3) = converted(3) - r * rd;
    } else {
        out(0) = converted(0) - r * std::cos(az);
        out(1) = converted(1) - r * std::sin(az);
        out(2) = converted(2) - r * rd;
    }
}

}  // namespace

OracleMoments mc_moment_oracle(const SphericalMeasurement& m, const NoiseSpec& noise, Dim dim,
                               std::size_t samples, Rng& rng) {
    noise.validate();
    if (samples < 10000) throw InvalidArgument("moment oracle needs at least 10^4 samples");

    const int q = converted_size(dim);
    SphericalMeasurement meas = m;
    if (dim == Dim::Planar) meas.elevation = 0.0;
    Eigen::VectorXd converted(q);
    converted.head(axes(dim)) = convert_position(meas).head(axes(dim));
    converted(axes(dim)) = convert_pseudo(meas);

    const double n = static_cast<double>(samples);
    Eigen::VectorXd v(q);

    // Pass 1: mean. Pass 2 replays the same stream for centered moments.
    const Rng replay = rng;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(q);
    for (std::size_t i = 0; i < samples; ++i) {
        sample_error(meas, converted, noise, dim, rng, v);
        sum += v;
    }
    const Eigen::VectorXd mean = sum / n;

    Rng again = replay;
    Eigen::MatrixXd prod = Eigen::MatrixXd::Zero(q, q);
    Eigen::MatrixXd prod_sq = Eigen::MatrixXd::Zero(q, q);
    for (std::size_t i = 0; i < samples; ++i) {
        sample_error(meas, converted, noise, dim, again, v);
        v -= mean;
        for (int a = 0; a < q; ++a) {
            for (int b = a; b < q; ++b) {
                const double p = v(a) * v(b);
                prod(a, b) += p;
                prod_sq(a, b) += p * p;
            }
        }
    }

    OracleMoments out;
    out.samples = samples;
    out.moments.mean = mean;
    out.moments.covariance = Eigen::MatrixXd::Zero(q, q);
    out.covariance_stderr = Eigen::MatrixXd::Zero(q, q);
    for (int a = 0; a < q; ++a) {
        for (int b = a; b < q; ++b) {
            const double c = prod(a, b) / n;
            const double fourth = prod_sq(a, b) / n;
            out.moments.covariance(a, b) = out.moments.covariance(b, a) = c;
            out.covariance_stderr(a, b) = out.covariance_stderr(b, a) = std::sqrt(std::max(fourth - c * c, 0.0) / n);
        }
    }
    out.mean_stderr = (out.moments.covariance.diagonal() / n).cwiseSqrt();
    return out;
}

}  // namespace rcmkf
