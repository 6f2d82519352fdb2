// Acceptance run: one PASS/FAIL line per criterion. Seed 42 throughout.
// Exits nonzero when any criterion fails.

#include "rcmkf/evaluation.hpp"
#include "rcmkf/filtering.hpp"
#include "rcmkf/golden.hpp"
#include "rcmkf/report.hpp"
#include "rcmkf/simulation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

using namespace rcmkf;

namespace {

constexpr std::uint64_t kSeed = 42;

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Eigen::MatrixXd random_spd(int n, Rng& rng, double scale) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.gaussian();
    return scale * (a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n));
}

Eigen::VectorXd random_vector(int n, Rng& rng, double scale) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = scale * rng.gaussian();
    return v;
}

bool symmetric_psd(const Eigen::MatrixXd& p) {
    if (p != p.transpose()) return false;
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(p).eigenvalues().minCoeff() >= -1e-9 * p.trace();
}

Outcome consistency() {
    const auto t0 = std::chrono::steady_clock::now();
    SweepSetup setup;
    setup.sigma_bearing_deg = default_sweep_grid(30.0);
    setup.seed = kSeed;
    const auto u = consistency_sweep(setup, ConversionMethod::MeasurementConditioned);
    const auto n = consistency_sweep(setup, ConversionMethod::NestedConditioning);
    bool nested_exit = false;
    double first_exit = 0.0;
    for (std::size_t i = 0; i < n.inside.size(); ++i) {
        if (n.sigma_bearing_deg[i] >= 15.0 && !n.inside[i]) {
            if (!nested_exit) first_exit = n.sigma_bearing_deg[i];
            nested_exit = true;
        }
    }
    const double t = seconds_since(t0);
    Outcome o;
    o.pass = u.excursions() <= 2 && nested_exit && t <= 60.0;
    o.detail = fmt("measurement-conditioned excursions %zu/%zu, nested first exit >=15 deg at %g deg, %.1f s",
                   u.excursions(), u.inside.size(), nested_exit ? first_exit : -1.0, t);
    return o;
}

Outcome oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto grid = oracle_grid();
    const auto rows = golden_table(grid, 10'000'000, kSeed);
    std::size_t entries = 0, outside = 0;
    double worst = 0.0;
    for (const auto& row : rows) {
        const auto stats = unbiased_stats(row.point.measurement, row.point.noise, row.point.dim);
        const auto& o = row.oracle;
        const auto check = [&](double value, double ref, double se) {
            ++entries;
            const double z = se > 0.0 ? std::abs(value - ref) / se : (value == ref ? 0.0 : INFINITY);
            worst = std::max(worst, z);
            if (z > 3.0) ++outside;
        };
        const int q = static_cast<int>(stats.mean.size());
        for (int a = 0; a < q; ++a) {
            check(stats.mean(a), o.moments.mean(a), o.mean_stderr(a));
            for (int b = a; b < q; ++b) check(stats.covariance(a, b), o.moments.covariance(a, b), o.covariance_stderr(a, b));
        }
    }
    const double t = seconds_since(t0);
    Outcome o;
    o.pass = outside == 0 && t <= 300.0;
    o.detail = fmt("%zu/%zu entries beyond 3 SE, worst %.2f SE, %.1f s", outside, entries, worst, t);
    return o;
}

Outcome rmse_ordering() {
    Outcome o;
    std::string detail;
    for (int case_id : {1, 2}) {
        const auto t0 = std::chrono::steady_clock::now();
        auto s = generate_case(case_id);
        s.runs = 500;
        s.seed = kSeed;
        const std::array variants{FilterVariant::RCMKF_U, FilterVariant::RCMKF_D};
        const auto mc = run_monte_carlo(s, variants);
        const double u = rmse(mc.runs_of(FilterVariant::RCMKF_U)).time_average(10, 100);
        const double d = rmse(mc.runs_of(FilterVariant::RCMKF_D)).time_average(10, 100);
        const double t = seconds_since(t0);
        const bool ok = u <= d && t <= 120.0;
        o.pass = o.pass && ok;
        detail += fmt("%scase %d: U %.1f m vs D %.1f m (%s, %.1f s)", detail.empty() ? "" : "; ", case_id, u, d,
                      ok ? "ok" : "not met", t);
    }
    o.detail = detail;
    return o;
}

Outcome quadratic_identities() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(kSeed);
    double worst = 0.0;
    int outside = 0;
    for (int i = 0; i < 10; ++i) {
        const GaussianBelief b{random_vector(6, rng, 3.0), random_spd(6, rng, 1.0)};
        const Eigen::RowVectorXd L = random_vector(3, rng, 1.0).transpose();
        const auto lin = linearize_pseudo(b, L);
        const Eigen::MatrixXd chol = b.covariance.llt().matrixL();
        const double h0 = pseudo_function(b.mean, L);
        const int count = 1'000'000;
        double s = 0, s2 = 0, s3 = 0, s4 = 0;
        for (int k = 0; k < count; ++k) {
            const double v = pseudo_function(b.mean + chol * random_vector(6, rng, 1.0), L) - h0;
            s += v, s2 += v * v, s3 += v * v * v, s4 += v * v * v * v;
        }
        const double m1 = s / count;
        const double var = s2 / count - m1 * m1;
        const double c4 = s4 / count - 4 * m1 * s3 / count + 6 * m1 * m1 * s2 / count - 3 * std::pow(m1, 4);
        const double jpj = lin.jacobian * b.covariance * lin.jacobian.transpose();
        const double z_mean = std::abs(m1 - 0.5 * lin.correction) / std::sqrt(var / count);
        const double z_var = std::abs(var - jpj - lin.variance_inflation) / std::sqrt((c4 - var * var) / count);
        worst = std::max({worst, z_mean, z_var});
        outside += (z_mean > 3.0) + (z_var > 3.0);
    }
    Outcome o;
    o.pass = outside == 0;
    o.detail = fmt("%d/20 moments beyond 3 SE, worst %.2f SE, %.1f s", outside, worst, seconds_since(t0));
    return o;
}

Outcome property_suites() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(kSeed);
    int psd_fail = 0, jac_fail = 0, collapse_fail = 0, decor_fail = 0;

    // Covariance symmetry and PSD after every filter operation.
    for (int case_id : {1, 2}) {
        auto s = generate_case(case_id);
        s.seed = kSeed;
        for (std::uint64_t run = 0; run < 20; ++run) {
            const auto r = realize(s, run);
            for (auto v : {FilterVariant::RCMKF_U, FilterVariant::RCMKF_D}) {
                std::vector<ConvertedMeasurement> z;
                for (const auto& m : r.measurements) z.push_back(convert(m, s.noise, s.dim(), conversion_method(v)));
                GaussianBelief b = initialize_belief(z[0], z[1], s.model.period);
                psd_fail += !symmetric_psd(b.covariance);
                for (std::size_t k = 2; k < z.size(); ++k) {
                    psd_fail += !symmetric_psd(z[k].moments.covariance);
                    b = kf_predict(b, s.model);
                    psd_fail += !symmetric_psd(b.covariance);
                    const auto d = decorrelate(z[k]);
                    b = kf_update_position(b, d);
                    psd_fail += !symmetric_psd(b.covariance);
                    b = ekf_update_pseudo(b, d);
                    psd_fail += !symmetric_psd(b.covariance);
                }
            }
        }
    }

    // Pseudo-measurement Jacobian against central differences.
    for (int i = 0; i < 20; ++i) {
        for (Dim dim : {Dim::Planar, Dim::Spatial}) {
            const int n = state_size(dim);
            const Eigen::VectorXd x = random_vector(n, rng, 1e3);
            const Eigen::RowVectorXd L = random_vector(axes(dim), rng, 50.0).transpose();
            const auto lin = linearize_pseudo({x, Eigen::MatrixXd::Zero(n, n)}, L);
            for (int k = 0; k < n; ++k) {
                const double h = 1e-3 * std::max(1.0, std::abs(x(k)));
                Eigen::VectorXd up = x, down = x;
                up(k) += h;
                down(k) -= h;
                const double fd = (pseudo_function(up, L) - pseudo_function(down, L)) / (2 * h);
                jac_fail += std::abs(fd - lin.jacobian(k)) > 1e-6 * std::max(1.0, std::abs(lin.jacobian(k)));
            }
        }
    }

    // Spatial statistics at zero elevation reduce to the planar ones.
    for (int i = 0; i < 500; ++i) {
        SphericalMeasurement m;
        m.range = 100 + 1e5 * rng.uniform();
        m.bearing = deg_to_rad(360 * rng.uniform() - 180);
        m.range_rate = 400 * rng.uniform() - 200;
        NoiseSpec n;
        n.sigma_range = 300 * rng.uniform();
        n.sigma_bearing = deg_to_rad(30 * rng.uniform());
        n.sigma_range_rate = 10 * rng.uniform();
        n.correlation = 2 * rng.uniform() - 1;
        for (auto method : {ConversionMethod::MeasurementConditioned, ConversionMethod::NestedConditioning}) {
            const auto planar = conversion_stats(method, m, n, Dim::Planar);
            const auto spatial = conversion_stats(method, m, n, Dim::Spatial);
            const std::array<int, 3> keep{0, 1, 3};
            const double scale = spatial.covariance.cwiseAbs().maxCoeff();
            const double mscale = std::max(1.0, spatial.mean.cwiseAbs().maxCoeff());
            for (int a = 0; a < 3; ++a) {
                collapse_fail += std::abs(planar.mean(a) - spatial.mean(keep[a])) > 1e-12 * mscale;
                for (int b = 0; b < 3; ++b) {
                    collapse_fail +=
                        std::abs(planar.covariance(a, b) - spatial.covariance(keep[a], keep[b])) > 1e-12 * scale;
                }
            }
        }
    }

    // Decorrelated errors have zero cross-covariance with the position errors.
    for (int i = 0; i < 200; ++i) {
        for (Dim dim : {Dim::Planar, Dim::Spatial}) {
            const int q = converted_size(dim), p = axes(dim);
            ConvertedMeasurement z;
            z.dim = dim;
            z.position = random_vector(p, rng, 1e4);
            Eigen::MatrixXd cov = random_spd(q, rng, 1.0);
            cov.bottomRows(1) *= 1e3;
            cov.rightCols(1) *= 1e3;
            z.moments = {Eigen::VectorXd::Zero(q), cov};
            const auto d = decorrelate(z);
            const Eigen::RowVectorXd r_ep = cov.block(p, 0, 1, p);
            const Eigen::RowVectorXd residual = r_ep + d.decorrelation * cov.topLeftCorner(p, p);
            decor_fail += residual.cwiseAbs().maxCoeff() > 1e-12 * r_ep.cwiseAbs().maxCoeff();
        }
    }

    // Deterministic replay: identical CSV bytes for repeated runs and any job count.
    const auto csv = [](int jobs) {
        auto s = generate_case(2);
        s.runs = 8;
        s.seed = kSeed;
        const std::array variants{FilterVariant::RCMKF_U, FilterVariant::RCMKF_D};
        const auto mc = run_monte_carlo(s, variants, jobs);
        const std::array reports{rmse(mc.runs_of(variants[0])), rmse(mc.runs_of(variants[1]))};
        std::ostringstream out;
        write_rmse_csv(out, variants, reports);
        return out.str();
    };
    const std::string a = csv(1);
    const bool replay = a == csv(1) && a == csv(4);

    Outcome o;
    o.pass = psd_fail == 0 && jac_fail == 0 && collapse_fail == 0 && decor_fail == 0 && replay;
    o.detail = fmt("psd violations %d, jacobian %d, collapse %d, decorrelation %d, replay %s, %.1f s", psd_fail,
                   jac_fail, collapse_fail, decor_fail, replay ? "identical" : "differs", seconds_since(t0));
    return o;
}

// Zero measurement noise, zero process noise and no unmodeled inputs: the
// truth follows the filter's own model exactly. The maneuvering Case 2 track
// is reported alongside for information only.
double zero_noise_error(int case_id, bool keep_maneuvers) {
    auto s = generate_case(case_id);
    s.noise = NoiseSpec{};
    s.model = DynamicModel::constant_velocity(s.dim(), s.model.period, 0.0);
    if (!keep_maneuvers) s.maneuvers = ManeuverSchedule();
    const auto r = realize(s, 0);
    double worst = 0.0;
    for (auto v : {FilterVariant::RCMKF_U, FilterVariant::RCMKF_D}) {
        for (const auto& e : track(v, r.measurements, s.noise, s.model)) {
            worst = std::max(worst, (e.belief.mean.head(2) - r.truth[e.step].position()).norm());
        }
    }
    return worst;
}

Outcome zero_noise_exactness() {
    const double worst = std::max(zero_noise_error(1, false), zero_noise_error(2, false));
    Outcome o;
    o.pass = worst < 1e-6;
    o.detail = fmt("worst position error %.3g m over both case geometries; with the unmodeled case 2 maneuvers "
                   "kept it is %.3g m",
                   worst, zero_noise_error(2, true));
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, Outcome (*)()> criteria[] = {
        {"consistency sweep", consistency},
        {"oracle equivalence", oracle_equivalence},
        {"RMSE ordering", rmse_ordering},
        {"quadratic-moment identities", quadratic_identities},
        {"property suites", property_suites},
        {"zero-noise exactness", zero_noise_exactness},
    };
    int failed = 0;
    for (std::size_t i = 0; i < std::size(criteria); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        std::printf("criterion %zu %s: %s (%s)\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
