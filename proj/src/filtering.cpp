#include "rcmkf/filtering.hpp"

#include "rcmkf/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace rcmkf {
namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// Joseph-stabilized covariance update P+ = (I-KH) P (I-KH)^T + K R K^T.
Eigen::MatrixXd joseph_update(const Eigen::MatrixXd& P, const Eigen::MatrixXd& K, const Eigen::MatrixXd& H,
                              const Eigen::MatrixXd& R) {
    const Eigen::Index n = P.rows();
    const Eigen::MatrixXd IKH = Eigen::MatrixXd::Identity(n, n) - K * H;
    return symmetrized(IKH * P * IKH.transpose() + K * R * K.transpose());
}

void require_state(const GaussianBelief& b) {
    const Dim dim = b.dim();
    if (b.covariance.rows() != state_size(dim) || b.covariance.cols() != state_size(dim)) {
        throw InvalidArgument("belief covariance does not match state size");
    }
}

}  // namespace

DecorrelatedMeasurement decorrelate(const ConvertedMeasurement& z) {
    if (z.degenerate) throw DegenerateCovariance("converted measurement has no valid error statistics");
    const int p = axes(z.dim);
    const Eigen::MatrixXd& R = z.moments.covariance;
    if (R.rows() != p + 1 || z.moments.mean.size() != p + 1 || z.position.size() != p) {
        throw InvalidArgument("converted measurement has inconsistent dimensions");
    }
    const Eigen::MatrixXd Rpp = R.topLeftCorner(p, p);
    const Eigen::RowVectorXd Rep = R.block(p, 0, 1, p);

    const Eigen::LLT<Eigen::MatrixXd> llt(Rpp);
    if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-14)) {
        throw DegenerateCovariance("position error covariance is singular");
    }

    DecorrelatedMeasurement d;
    d.decorrelation = -llt.solve(Rep.transpose()).transpose();
    d.position = z.position;
    d.position_bias = z.moments.mean.head(p);
    d.position_covariance = Rpp;
    d.pseudo = d.decorrelation.dot(z.position) + z.pseudo;
    d.pseudo_bias = d.decorrelation.dot(d.position_bias) + z.moments.mean(p);
    // Schur complement R_ee - R_ep R_pp^-1 R_ep^T = R_ee + L R_ep^T.
    d.pseudo_variance = std::max(R(p, p) + d.decorrelation.dot(Rep), 0.0);
    return d;
}

GaussianBelief kf_predict(const GaussianBelief& belief, const DynamicModel& model) {
    require_state(belief);
    if (belief.mean.size() != model.transition.rows()) {
        throw InvalidArgument("belief dimension does not match dynamic model");
    }
    const Eigen::MatrixXd& F = model.transition;
    return {F * belief.mean, symmetrized(F * belief.covariance * F.transpose() + model.process_covariance())};
}

GaussianBelief kf_update_position(const GaussianBelief& belief, const DecorrelatedMeasurement& d) {
    require_state(belief);
    const Dim dim = belief.dim();
    const int p = axes(dim);
    const int n = state_size(dim);
    if (d.position.size() != p) throw InvalidArgument("measurement dimension does not match belief");

    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(p, n);
    H.leftCols(p).setIdentity();

    const Eigen::MatrixXd S = symmetrized(belief.covariance.topLeftCorner(p, p) + d.position_covariance);
    const Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-14)) {
        throw DegenerateCovariance("position innovation covariance is singular");
    }
    const Eigen::MatrixXd K = llt.solve(belief.covariance.leftCols(p).transpose()).transpose();
    const Eigen::VectorXd innovation = d.position - d.position_bias - belief.mean.head(p);

    return {belief.mean + K * innovation, joseph_update(belief.covariance, K, H, d.position_covariance)};
}

double pseudo_function(const Eigen::VectorXd& state, const Eigen::RowVectorXd& decorrelation) {
    const int p = axes(dim_from_state_size(state.size()));
    return decorrelation.dot(state.head(p)) + state.head(p).dot(state.tail(p));
}

PseudoLinearization linearize_pseudo(const GaussianBelief& belief, const Eigen::RowVectorXd& decorrelation) {
    require_state(belief);
    const int p = axes(belief.dim());
    if (decorrelation.size() != p) throw InvalidArgument("decorrelation row has wrong size");

    const Eigen::MatrixXd& P = belief.covariance;
    const Eigen::MatrixXd Ppp = P.topLeftCorner(p, p);
    const Eigen::MatrixXd Pvv = P.bottomRightCorner(p, p);
    const Eigen::MatrixXd Ppv = P.topRightCorner(p, p);

    PseudoLinearization lin;
    lin.jacobian.resize(2 * p);
    lin.jacobian.head(p) = decorrelation + belief.mean.tail(p).transpose();
    lin.jacobian.tail(p) = belief.mean.head(p).transpose();
    // Entries P(i, i+p) are the position/velocity covariances on each axis.
    lin.correction = 2.0 * Ppv.trace();
    lin.variance_inflation = (Ppp * Pvv).trace() + (Ppv * Ppv).trace();
    return lin;
}

GaussianBelief ekf_update_pseudo(const GaussianBelief& belief, const DecorrelatedMeasurement& d) {
    const PseudoLinearization lin = linearize_pseudo(belief, d.decorrelation);
    const Eigen::MatrixXd& P = belief.covariance;

    const double noise = d.pseudo_variance + lin.variance_inflation;
    const double s = lin.jacobian.dot(P * lin.jacobian.transpose()) + noise;
    if (!(s > 0.0) || !std::isfinite(s)) throw DegenerateCovariance("pseudo innovation variance is not positive");

    const Eigen::VectorXd K = P * lin.jacobian.transpose() / s;
    const double innovation =
        d.pseudo - d.pseudo_bias - pseudo_function(belief.mean, d.decorrelation) - 0.5 * lin.correction;

    return {belief.mean + K * innovation, joseph_update(P, K, lin.jacobian, Eigen::MatrixXd::Constant(1, 1, noise))};
}

std::string_view to_string(FilterVariant v) { return v == FilterVariant::RCMKF_U ? "RCMKF-U" : "RCMKF-D"; }

FilterVariant parse_variant(std::string_view name) {
    std::string key;
    for (char c : name) {
        if (std::isalnum(static_cast<unsigned char>(c))) key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (key == "rcmkfu" || key == "u") return FilterVariant::RCMKF_U;
    if (key == "rcmkfd" || key == "d") return FilterVariant::RCMKF_D;
    throw InvalidArgument("unknown filter variant '" + std::string(name) + "'");
}

ConversionMethod conversion_method(FilterVariant v) {
    return v == FilterVariant::RCMKF_U ? ConversionMethod::MeasurementConditioned
                                       : ConversionMethod::NestedConditioning;
}

GaussianBelief initialize_belief(const ConvertedMeasurement& first, const ConvertedMeasurement& second,
                                 double period) {
    if (!(period > 0.0)) throw InvalidArgument("sampling period must be positive");
    if (first.dim != second.dim) throw InvalidArgument("initialization measurements differ in dimension");
    if (first.degenerate || second.degenerate) {
        throw DegenerateCovariance("initialization measurement has no valid error statistics");
    }
    const int p = axes(second.dim);

    const Eigen::VectorXd p1 = first.position - first.moments.mean.head(p);
    const Eigen::VectorXd p2 = second.position - second.moments.mean.head(p);
    const Eigen::MatrixXd R1 = first.moments.covariance.topLeftCorner(p, p);
    const Eigen::MatrixXd R2 = second.moments.covariance.topLeftCorner(p, p);

    GaussianBelief b;
    b.mean.resize(2 * p);
    b.mean << p2, (p2 - p1) / period;
    b.covariance.resize(2 * p, 2 * p);
    b.covariance.topLeftCorner(p, p) = R2;
    b.covariance.topRightCorner(p, p) = R2 / period;
    b.covariance.bottomLeftCorner(p, p) = R2 / period;
    b.covariance.bottomRightCorner(p, p) = (R1 + R2) / (period * period);
    b.covariance = symmetrized(b.covariance);
    return b;
}

std::vector<FilterStep> run_filter(std::span<const ConvertedMeasurement> measurements, const DynamicModel& model,
                                   const GaussianBelief& init) {
    if (measurements.empty()) throw InvalidArgument("run_filter needs at least one measurement");
    std::vector<FilterStep> out;
    out.reserve(measurements.size());

    GaussianBelief belief = init;
    for (const auto& z : measurements) {
        FilterStep step;
        step.step = z.step;
        try {
            belief = kf_predict(belief, model);
            try {
                const DecorrelatedMeasurement d = decorrelate(z);
                const GaussianBelief positioned = kf_update_position(belief, d);
                belief = ekf_update_pseudo(positioned, d);
            } catch (const DegenerateCovariance&) {
                step.update_skipped = true;
            }
        } catch (const InvalidArgument& e) {
            throw InvalidArgument("step " + std::to_string(z.step) + ": " + e.what());
        }
        step.belief = belief;
        out.push_back(std::move(step));
    }
    return out;
}

namespace {

std::vector<ConvertedMeasurement> convert_all(FilterVariant variant, std::span<const SphericalMeasurement> ms,
                                              const NoiseSpec& noise, Dim dim) {
    std::vector<ConvertedMeasurement> out;
    out.reserve(ms.size());
    const ConversionMethod method = conversion_method(variant);
    for (const auto& m : ms) {
        try {
            out.push_back(convert(m, noise, dim, method));
        } catch (const DegenerateCovariance&) {
            ConvertedMeasurement bad;
            bad.dim = dim;
            bad.step = m.step;
            bad.degenerate = true;
            out.push_back(std::move(bad));
        }
    }
    return out;
}

}  // namespace

std::vector<FilterStep> run_filter(FilterVariant variant, std::span<const SphericalMeasurement> measurements,
                                   const NoiseSpec& noise, const DynamicModel& model, const GaussianBelief& init) {
    const auto converted = convert_all(variant, measurements, noise, model.dim);
    return run_filter(std::span<const ConvertedMeasurement>(converted), model, init);
}

std::vector<FilterStep> track(FilterVariant variant, std::span<const SphericalMeasurement> measurements,
                              const NoiseSpec& noise, const DynamicModel& model) {
    if (measurements.size() <= static_cast<std::size_t>(kInitializationSteps)) {
        throw InvalidArgument("tracking needs more than two measurements");
    }
    const auto converted = convert_all(variant, measurements, noise, model.dim);
    const GaussianBelief init = initialize_belief(converted[0], converted[1], model.period);
    return run_filter(std::span<const ConvertedMeasurement>(converted).subspan(kInitializationSteps), model, init);
}

}  // namespace rcmkf
