#include <gtest/gtest.h>

#include "rcmkf/conversion.hpp"
#include "rcmkf/errors.hpp"

#include <cmath>
#include <numbers>

using namespace rcmkf;

namespace {

SphericalMeasurement meas(double r, double az_deg, double el_deg, double rdot) {
    return {.range = r, .bearing = deg_to_rad(az_deg), .elevation = deg_to_rad(el_deg), .range_rate = rdot};
}

NoiseSpec noise(double sr, double sb_deg, double se_deg, double srd, double rho) {
    return {.sigma_range = sr,
            .sigma_bearing = deg_to_rad(sb_deg),
            .sigma_elevation = deg_to_rad(se_deg),
            .sigma_range_rate = srd,
            .correlation = rho};
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff();
}

// Per-entry agreement: relative where the reference is large, absolute
// against the largest reference entry otherwise.
void expect_close(const Eigen::MatrixXd& got, const Eigen::MatrixXd& ref, double tol) {
    ASSERT_EQ(got.rows(), ref.rows());
    ASSERT_EQ(got.cols(), ref.cols());
    const double scale = ref.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < ref.rows(); ++i) {
        for (Eigen::Index j = 0; j < ref.cols(); ++j) {
            const double mag = std::abs(ref(i, j));
            const double bound = mag >= 0.01 * scale ? tol * mag : tol * scale;
            EXPECT_NEAR(got(i, j), ref(i, j), bound) << "entry (" << i << ", " << j << ")";
        }
    }
}

}  // namespace

TEST(ConvertPosition, OnAxis) {
    EXPECT_EQ(convert_position(meas(100, 0, 0, 0)), Eigen::Vector3d(100, 0, 0));
}

TEST(ConvertPosition, FortyFiveDegrees) {
    const Eigen::Vector3d p = convert_position(meas(10000, 45, 0, 0));
    EXPECT_NEAR(p.x(), 7071.0678, 1e-4);
    EXPECT_NEAR(p.y(), 7071.0678, 1e-4);
    EXPECT_EQ(p.z(), 0.0);
}

TEST(ConvertPosition, Pole) {
    const Eigen::Vector3d p = convert_position({.range = 250, .bearing = 1.0, .elevation = std::numbers::pi / 2});
    EXPECT_NEAR(p.x(), 0.0, 1e-12);
    EXPECT_NEAR(p.y(), 0.0, 1e-12);
    EXPECT_DOUBLE_EQ(p.z(), 250.0);
}

TEST(ConvertPseudo, Products) {
    EXPECT_EQ(convert_pseudo(meas(10000, 0, 0, 100)), 1e6);
    EXPECT_EQ(convert_pseudo(meas(10000, 0, 0, 0)), 0.0);
    EXPECT_NEAR(convert_pseudo(meas(113137.08, 0, 0, 282.84)), 3.1999e7, 1e3);
}

TEST(LambdaFactors, Noiseless) {
    const auto l = lambda_factors(NoiseSpec{});
    EXPECT_EQ(l.bearing, 1.0);
    EXPECT_EQ(l.bearing_double, 1.0);
    EXPECT_EQ(l.elevation, 1.0);
    EXPECT_EQ(l.elevation_double, 1.0);
}

TEST(LambdaFactors, TwoAndAHalfDegrees) {
    const auto l = lambda_factors(noise(0, 2.5, 0, 0, 0));
    EXPECT_NEAR(l.bearing, 0.9990482, 1e-6);
    EXPECT_DOUBLE_EQ(l.bearing, std::exp(-0.5 * std::pow(2.5 * std::numbers::pi / 180.0, 2)));

    Rng rng(5);
    const int n = 10'000'000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += std::cos(rng.gaussian(deg_to_rad(2.5)));
    // Std of cos(e) is about s^2 / sqrt(2) for small s.
    const double se = std::pow(deg_to_rad(2.5), 2) / std::sqrt(2.0) / std::sqrt(n);
    EXPECT_NEAR(sum / n, l.bearing, 4 * se);
}

TEST(LambdaFactors, DoubleAngleIsFourthPowerAndMonotone) {
    double prev = 2.0;
    for (double deg = 0.0; deg <= 60.0; deg += 0.5) {
        const auto l = lambda_factors(noise(0, deg, deg, 0, 0));
        EXPECT_DOUBLE_EQ(l.bearing_double, std::pow(l.bearing, 4));
        EXPECT_DOUBLE_EQ(l.elevation_double, std::pow(l.elevation, 4));
        EXPECT_LT(l.bearing, prev);
        EXPECT_GT(l.bearing, 0.0);
        EXPECT_LE(l.bearing, 1.0);
        prev = l.bearing;
    }
}

TEST(UnbiasedStats, NoiselessIsExact) {
    for (Dim dim : {Dim::Planar, Dim::Spatial}) {
        const auto s = unbiased_stats(meas(5000, 30, 10, 50), NoiseSpec{}, dim);
        EXPECT_EQ(s.mean, Eigen::VectorXd::Zero(converted_size(dim)));
        EXPECT_EQ(s.covariance, Eigen::MatrixXd::Zero(converted_size(dim), converted_size(dim)));
    }
}

TEST(UnbiasedStats, PseudoMeanUsesNegativeCrossTerm) {
    const auto s = unbiased_stats(meas(113137.08, 45, 0, 282.84), noise(200, 2.5, 0, 1, 0.3), Dim::Planar);
    EXPECT_DOUBLE_EQ(s.mean(2), -60.0);
}

TEST(UnbiasedStats, SymmetricPsdOverRandomInputs) {
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const auto m = meas(10 + 2e5 * rng.uniform(), 360 * rng.uniform() - 180, 170 * rng.uniform() - 85,
                            600 * rng.uniform() - 300);
        const auto n = noise(500 * rng.uniform(), 40 * rng.uniform(), 40 * rng.uniform(), 20 * rng.uniform(),
                             2 * rng.uniform() - 1);
        for (Dim dim : {Dim::Planar, Dim::Spatial}) {
            const auto s = unbiased_stats(m, n, dim);
            ASSERT_EQ(s.covariance, s.covariance.transpose());
            ASSERT_GE(min_eigenvalue(s.covariance), -1e-9 * s.covariance.trace());
            const auto d = nested_stats(m, n, dim);
            ASSERT_EQ(d.covariance, d.covariance.transpose());
            ASSERT_GE(min_eigenvalue(d.covariance), -1e-9 * d.covariance.trace());
        }
    }
}

TEST(UnbiasedStats, SpatialCollapsesToPlanar) {
    Rng rng(12);
    for (int i = 0; i < 500; ++i) {
        const auto m = meas(100 + 1e5 * rng.uniform(), 360 * rng.uniform() - 180, 0, 400 * rng.uniform() - 200);
        const auto n = noise(300 * rng.uniform(), 30 * rng.uniform(), 0, 10 * rng.uniform(), 2 * rng.uniform() - 1);
        for (auto method : {ConversionMethod::MeasurementConditioned, ConversionMethod::NestedConditioning}) {
            const auto planar = conversion_stats(method, m, n, Dim::Planar);
            const auto spatial = conversion_stats(method, m, n, Dim::Spatial);
            const std::array<int, 3> keep{0, 1, 3};
            const double scale = spatial.covariance.cwiseAbs().maxCoeff();
            for (int a = 0; a < 3; ++a) {
                ASSERT_LE(std::abs(planar.mean(a) - spatial.mean(keep[a])),
                          1e-12 * std::max(1.0, spatial.mean.cwiseAbs().maxCoeff()));
                for (int b = 0; b < 3; ++b) {
                    ASSERT_LE(std::abs(planar.covariance(a, b) - spatial.covariance(keep[a], keep[b])), 1e-12 * scale)
                        << to_string(method) << " entry " << a << "," << b;
                }
            }
        }
    }
}

TEST(UnbiasedStats, PlanarIgnoresElevationInputs) {
    const auto base = unbiased_stats(meas(5000, 20, 0, 10), noise(50, 3, 0, 2, 0.5), Dim::Planar);
    const auto other = unbiased_stats(meas(5000, 20, 35, 10), noise(50, 3, 8, 2, 0.5), Dim::Planar);
    EXPECT_EQ(base.mean, other.mean);
    EXPECT_EQ(base.covariance, other.covariance);
}

TEST(UnbiasedStats, InvalidNoiseThrows) {
    EXPECT_THROW(unbiased_stats(meas(1000, 0, 0, 0), noise(-1, 1, 0, 1, 0), Dim::Planar), InvalidArgument);
}

TEST(RepairPsd, ClampsRoundingAndRejectsIndefinite) {
    Eigen::MatrixXd tiny(2, 2);
    tiny << 1.0, 1.0 + 1e-12, 1.0 + 1e-12, 1.0;
    const Eigen::MatrixXd fixed = repair_psd(tiny);
    EXPECT_GE(min_eigenvalue(fixed), 0.0);
    EXPECT_NEAR((fixed - tiny).norm(), 0.0, 1e-11);

    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;
    EXPECT_THROW(repair_psd(bad), DegenerateCovariance);

    Eigen::MatrixXd nan = Eigen::MatrixXd::Identity(2, 2);
    nan(0, 1) = NAN;
    EXPECT_THROW(repair_psd(nan), DegenerateCovariance);
}

TEST(NestedStats, NoiselessIsZero) {
    for (Dim dim : {Dim::Planar, Dim::Spatial}) {
        const auto s = nested_stats(meas(5000, 30, 10, 50), NoiseSpec{}, dim);
        EXPECT_EQ(s.mean, Eigen::VectorXd::Zero(converted_size(dim)));
        EXPECT_EQ(s.covariance, Eigen::MatrixXd::Zero(converted_size(dim), converted_size(dim)));
    }
}

// The two conditioning directions give position means of equal size and
// opposite sign: E[error | truth] = (lambda - 1) x, while
// E[error | measurement] = (1 - lambda) x_m. In the small-noise limit the
// magnitudes agree.
TEST(NestedStats, SmallNoiseMeanMagnitudeMatchesMeasurementConditioned) {
    const auto m = meas(10000, 45, 0, 100);
    const auto n = noise(100, 0.1, 0, 5, 0.3);
    const auto u = unbiased_stats(m, n, Dim::Planar);
    const auto d = nested_stats(m, n, Dim::Planar);
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(std::abs(d.mean(i)), std::abs(u.mean(i)), 0.01 * std::abs(u.mean(i))) << "entry " << i;
        EXPECT_LT(d.mean(i) * u.mean(i), 0.0) << "entry " << i;
    }
}

TEST(NestedStats, ClosedFormMatchesSampledAverage) {
    struct Point {
        Dim dim;
        SphericalMeasurement m;
        NoiseSpec n;
    };
    const std::vector<Point> points{
        {Dim::Planar, meas(10000, 45, 0, 100), noise(100, 10, 0, 5, 0)},
        {Dim::Planar, meas(10000, 45, 0, 100), noise(100, 25, 0, 5, 0.3)},
        {Dim::Planar, meas(113137.08, 45, 0, 282.84), noise(200, 2.5, 0, 1, 0.3)},
        {Dim::Spatial, meas(50000, -120, 25, -150), noise(150, 5, 3, 2, 0.6)},
        {Dim::Spatial, meas(2000, 70, -40, 30), noise(50, 15, 10, 5, 0.9)},
    };
    std::uint64_t seed = 100;
    for (const auto& p : points) {
        Rng rng(seed++);
        const auto closed = nested_stats(p.m, p.n, p.dim);
        const auto sampled = nested_stats_sampled(p.m, p.n, p.dim, 1'000'000, rng);
        SCOPED_TRACE(testing::Message() << "range " << p.m.range << " sigma_bearing " << rad_to_deg(p.n.sigma_bearing));
        expect_close(closed.covariance, sampled.covariance, 0.005);
        expect_close(closed.mean, sampled.mean, 0.005);
    }
}

TEST(Convert, AttachesMethodStatistics) {
    const auto m = meas(20000, 10, 0, -40);
    const auto n = noise(100, 2, 0, 1, 0.2);
    const auto c = convert(m, n, Dim::Planar, ConversionMethod::NestedConditioning);
    EXPECT_EQ(c.position.size(), 2);
    EXPECT_EQ(c.pseudo, 20000 * -40.0);
    EXPECT_EQ(c.moments.mean, nested_stats(m, n, Dim::Planar).mean);
    EXPECT_FALSE(c.degenerate);
    EXPECT_EQ(c.stacked().size(), 3);
}
