#include "rcmkf/conversion.hpp"

#include "rcmkf/errors.hpp"

#include <cmath>

namespace rcmkf {
namespace {

struct Angles {
    double cb, sb, c2b, s2b;  // bearing
    double ce, se, c2e, s2e;  // elevation
};

Angles angles_of(const SphericalMeasurement& m, Dim dim) {
    const double el = dim == Dim::Spatial ? m.elevation : 0.0;
    return {std::cos(m.bearing), std::sin(m.bearing), std::cos(2 * m.bearing), std::sin(2 * m.bearing),
            std::cos(el),        std::sin(el),        std::cos(2 * el),        std::sin(2 * el)};
}

// Lambda factors with the elevation terms pinned to 1 for planar radars.
LambdaFactors lambdas_for(const NoiseSpec& noise, Dim dim) {
    LambdaFactors l = lambda_factors(noise);
    if (dim == Dim::Planar) l.elevation = l.elevation_double = 1.0;
    return l;
}

void check_inputs(const NoiseSpec& noise) { noise.validate(); }

// Covariance of the error given a spherical point under independent
// Gaussian angle errors and correlated range/range-rate errors. The same
// algebra serves both conditioning directions: conditioned on the
// measurement (evaluated at Z_m) and conditioned on the truth (evaluated at Z).
//
// The position block is a difference of two O(r^2) products. Expanding the
// squared trig factors in double angles and grouping each difference as
// sr2 X + r^2 (X - lambda^2), with X - lambda^2 taken through expm1, keeps
// the small result accurate and makes it exactly zero without noise.
Eigen::MatrixXd conditioned_covariance(const SphericalMeasurement& z, const NoiseSpec& noise, Dim dim) {
    const LambdaFactors l = lambdas_for(noise, dim);
    const Angles t = angles_of(z, dim);
    const double r = z.range;
    const double r2 = r * r;
    const double rd = z.range_rate;
    const double sr2 = noise.sigma_range * noise.sigma_range;
    const double srd2 = noise.sigma_range_rate * noise.sigma_range_rate;
    const double cross = noise.range_cross();
    const double k = sr2 * rd + r * cross;
    const double ll = l.bearing * l.elevation;

    const double vb = noise.sigma_bearing * noise.sigma_bearing;
    const double ve = dim == Dim::Spatial ? noise.sigma_elevation * noise.sigma_elevation : 0.0;
    const double ll2 = ll * ll;
    // sr2 X + r^2 (X - ll^2) for X = exp(-x).
    const auto term = [&](double x, double X) { return sr2 * X + r2 * ll2 * std::expm1(vb + ve - x); };
    const double c0 = term(0.0, 1.0);
    const double c1 = term(2.0 * vb, l.bearing_double);
    const double c2 = term(2.0 * ve, l.elevation_double);
    const double c3 = term(2.0 * (vb + ve), l.bearing_double * l.elevation_double);

    const int p = axes(dim);
    Eigen::MatrixXd R(p + 1, p + 1);

    const double cc = t.c2b * t.c2e;
    R(0, 0) = 0.25 * (c0 + c1 * t.c2b + c2 * t.c2e + c3 * cc);
    R(1, 1) = 0.25 * (c0 - c1 * t.c2b + c2 * t.c2e - c3 * cc);
    R(0, 1) = 0.25 * t.s2b * (c1 + c3 * t.c2e);
    R(0, p) = ll * k * t.ce * t.cb;
    R(1, p) = ll * k * t.ce * t.sb;
    if (dim == Dim::Spatial) {
        const double le = l.elevation;
        const double le2 = le * le;
        const double d0 = sr2 - r2 * std::expm1(-ve);
        const double d1 = sr2 * l.elevation_double + r2 * le2 * std::expm1(-ve);
        R(2, 2) = 0.5 * (d0 - d1 * t.c2e);
        R(0, 2) = 0.5 * l.bearing * t.cb * t.s2e * d1;
        R(1, 2) = 0.5 * l.bearing * t.sb * t.s2e * d1;
        R(2, p) = le * k * t.se;
    }
    R(p, p) = r * r * srd2 + sr2 * rd * rd + (1.0 + noise.correlation * noise.correlation) * sr2 * srd2 +
              2.0 * r * rd * cross;
    return R.selfadjointView<Eigen::Upper>();
}

}  // namespace

LambdaFactors lambda_factors(const NoiseSpec& noise) {
    const double sb2 = noise.sigma_bearing * noise.sigma_bearing;
    const double se2 = noise.sigma_elevation * noise.sigma_elevation;
    return {std::exp(-0.5 * sb2), std::exp(-2.0 * sb2), std::exp(-0.5 * se2), std::exp(-2.0 * se2)};
}

std::string_view to_string(ConversionMethod method) {
    return method == ConversionMethod::MeasurementConditioned ? "measurement_conditioned" : "nested";
}

Eigen::VectorXd ConvertedMeasurement::stacked() const {
    Eigen::VectorXd v(position.size() + 1);
    v << position, pseudo;
    return v;
}

Eigen::Vector3d convert_position(const SphericalMeasurement& m) {
    const double ce = std::cos(m.elevation);
    return {m.range * ce * std::cos(m.bearing), m.range * ce * std::sin(m.bearing),
            m.range * std::sin(m.elevation)};
}

double convert_pseudo(const SphericalMeasurement& m) { return m.range * m.range_rate; }

Eigen::MatrixXd repair_psd(const Eigen::MatrixXd& cov) {
    if (!cov.allFinite()) throw DegenerateCovariance("covariance has non-finite entries");
    Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    const double min_eig = eig.eigenvalues().minCoeff();
    if (min_eig >= 0.0) return sym;

    const double tol = 1e-9 * std::abs(sym.trace());
    if (min_eig < -tol) {
        throw DegenerateCovariance("covariance is not positive semidefinite (min eigenvalue " +
                                   std::to_string(min_eig) + ")");
    }
    const Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(0.0);
    sym = eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().transpose();
    return 0.5 * (sym + sym.transpose());
}

ErrorMoments unbiased_stats(const SphericalMeasurement& m, const NoiseSpec& noise, Dim dim) {
    check_inputs(noise);
    const Angles t = angles_of(m, dim);
    const int p = axes(dim);
    const double vb = noise.sigma_bearing * noise.sigma_bearing;
    const double ve = dim == Dim::Spatial ? noise.sigma_elevation * noise.sigma_elevation : 0.0;
    // 1 - lambda_b lambda_e and 1 - lambda_e without cancellation.
    const double shrink = -std::expm1(-0.5 * (vb + ve));

    Eigen::VectorXd mu(p + 1);
    mu(0) = m.range * t.cb * t.ce * shrink;
    mu(1) = m.range * t.sb * t.ce * shrink;
    if (dim == Dim::Spatial) mu(2) = -m.range * t.se * std::expm1(-0.5 * ve);
    mu(p) = -noise.range_cross();

    return {mu, repair_psd(conditioned_covariance(m, noise, dim))};
}

ErrorMoments truth_conditioned_stats(const SphericalMeasurement& truth, const NoiseSpec& noise, Dim dim) {
    check_inputs(noise);
    const LambdaFactors l = lambdas_for(noise, dim);
    const Angles t = angles_of(truth, dim);
    const int p = axes(dim);
    const double gain = l.bearing * l.elevation - 1.0;

    Eigen::VectorXd mu(p + 1);
    mu(0) = truth.range * t.cb * t.ce * gain;
    mu(1) = truth.range * t.sb * t.ce * gain;
    if (dim == Dim::Spatial) mu(2) = truth.range * t.se * (l.elevation - 1.0);
    mu(p) = noise.range_cross();

    return {mu, conditioned_covariance(truth, noise, dim)};
}

ErrorMoments nested_stats(const SphericalMeasurement& m, const NoiseSpec& noise, Dim dim) {
    check_inputs(noise);
    const LambdaFactors l = lambdas_for(noise, dim);
    const Angles t = angles_of(m, dim);
    const int p = axes(dim);
    const double r = m.range;
    const double rd = m.range_rate;
    const double sr2 = noise.sigma_range * noise.sigma_range;
    const double srd2 = noise.sigma_range_rate * noise.sigma_range_rate;
    const double cross = noise.range_cross();
    const double rho2 = noise.correlation * noise.correlation;

    const double lb = l.bearing, lb2 = l.bearing_double;
    const double le = l.elevation, le2 = l.elevation_double;
    const double ll = lb * le;
    // Second moments of r over the truth distribution r = r_m - n_r.
    const double a1 = r * r + sr2;
    const double a2 = r * r + 2.0 * sr2;
    const double k = sr2 * rd + r * cross;

    Eigen::VectorXd mu(p + 1);
    mu(0) = (ll - 1.0) * ll * r * t.cb * t.ce;
    mu(1) = (ll - 1.0) * ll * r * t.sb * t.ce;
    if (dim == Dim::Spatial) mu(2) = (le - 1.0) * le * r * t.se;
    mu(p) = cross;

    const double ee_outer = 1.0 + le2 * le2 * t.c2e;
    const double ee_inner = 1.0 + le2 * t.c2e;

    Eigen::MatrixXd R(p + 1, p + 1);
    R(0, 0) = 0.25 * a2 * (1.0 + lb2 * lb2 * t.c2b) * ee_outer - 0.25 * ll * ll * a1 * (1.0 + lb2 * t.c2b) * ee_inner;
    R(1, 1) = 0.25 * a2 * (1.0 - lb2 * lb2 * t.c2b) * ee_outer - 0.25 * ll * ll * a1 * (1.0 - lb2 * t.c2b) * ee_inner;
    R(0, 1) = 0.25 * a2 * lb2 * lb2 * t.s2b * ee_outer - 0.25 * ll * ll * a1 * lb2 * t.s2b * ee_inner;
    R(0, p) = ll * ll * k * t.cb * t.ce;
    R(1, p) = ll * ll * k * t.sb * t.ce;
    if (dim == Dim::Spatial) {
        R(2, 2) = 0.5 * a2 * (1.0 - le2 * le2 * t.c2e) - 0.5 * le * le * a1 * (1.0 - le2 * t.c2e);
        const double xz_common = 0.5 * lb * lb * le2 * t.s2e * (a2 * le2 - le * le * a1);
        R(0, 2) = xz_common * t.cb;
        R(1, 2) = xz_common * t.sb;
        R(2, p) = le * le * k * t.se;
    }
    R(p, p) = r * r * srd2 + sr2 * rd * rd + 3.0 * (1.0 + rho2) * sr2 * srd2 + 2.0 * r * rd * cross;

    return {mu, repair_psd(R.selfadjointView<Eigen::Upper>())};
}

ErrorMoments nested_stats_sampled(const SphericalMeasurement& m, const NoiseSpec& noise, Dim dim,
                                  std::size_t samples, Rng& rng) {
    check_inputs(noise);
    if (samples == 0) throw InvalidArgument("nested_stats_sampled needs at least one sample");
    const int q = converted_size(dim);
    Eigen::VectorXd mean_sum = Eigen::VectorXd::Zero(q);
    Eigen::MatrixXd cov_sum = Eigen::MatrixXd::Zero(q, q);

    for (std::size_t i = 0; i < samples; ++i) {
        const double u = rng.gaussian();
        const double w = rng.gaussian();
        const double rho = noise.correlation;
        SphericalMeasurement truth = m;
        truth.range -= noise.sigma_range * u;
        truth.range_rate -= noise.sigma_range_rate * (rho * u + std::sqrt(1.0 - rho * rho) * w);
        truth.bearing -= rng.gaussian(noise.sigma_bearing);
        if (dim == Dim::Spatial) truth.elevation -= rng.gaussian(noise.sigma_elevation);

        const ErrorMoments t = truth_conditioned_stats(truth, noise, dim);
        mean_sum += t.mean;
        cov_sum += t.covariance;
    }
    const double n = static_cast<double>(samples);
    return {mean_sum / n, repair_psd(cov_sum / n)};
}

ErrorMoments conversion_stats(ConversionMethod method, const SphericalMeasurement& m,
                              const NoiseSpec& noise, Dim dim) {
    return method == ConversionMethod::MeasurementConditioned ? unbiased_stats(m, noise, dim)
                                                              : nested_stats(m, noise, dim);
}

ConvertedMeasurement convert(const SphericalMeasurement& m, const NoiseSpec& noise, Dim dim,
                             ConversionMethod method) {
    ConvertedMeasurement c;
    c.dim = dim;
    c.step = m.step;
    SphericalMeasurement planar_safe = m;
    if (dim == Dim::Planar) planar_safe.elevation = 0.0;
    c.position = convert_position(planar_safe).head(axes(dim));
    c.pseudo = convert_pseudo(m);
    c.moments = conversion_stats(method, planar_safe, noise, dim);
    return c;
}

}  // namespace rcmkf
