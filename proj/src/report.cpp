#include "rcmkf/report.hpp"

#include "rcmkf/errors.hpp"

#include <array>
#include <charconv>

namespace rcmkf {
namespace {

constexpr std::array<const char*, 4> kAxisNames{"x", "y", "z", "eta"};

// Index of an (x, y, z, eta) slot inside a planar (x, y, eta) vector, or -1.
int planar_slot(int slot) { return slot < 2 ? slot : (slot == 3 ? 2 : -1); }

}  // namespace

std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

std::string column_name(FilterVariant v) { return v == FilterVariant::RCMKF_U ? "rcmkfu" : "rcmkfd"; }

void write_rmse_csv(std::ostream& out, std::span<const FilterVariant> variants, std::span<const RmseReport> reports) {
    if (variants.size() != reports.size() || reports.empty()) {
        throw InvalidArgument("need one RMSE report per variant");
    }
    out << "step";
    for (auto v : variants) out << ",rmse_pos_" << column_name(v);
    out << '\n';
    for (std::size_t k = 0; k < reports.front().steps.size(); ++k) {
        out << reports.front().steps[k];
        for (const auto& r : reports) out << ',' << format_number(r.rmse.at(k));
        out << '\n';
    }
}

void write_nees_csv(std::ostream& out, std::span<const FilterVariant> variants, std::span<const NeesReport> reports) {
    if (variants.size() != reports.size() || reports.empty()) {
        throw InvalidArgument("need one NEES report per variant");
    }
    out << "step";
    for (auto v : variants) out << ",nees_" << column_name(v);
    out << ",lower_bound,upper_bound\n";
    for (std::size_t k = 0; k < reports.front().steps.size(); ++k) {
        out << reports.front().steps[k];
        for (const auto& r : reports) out << ',' << format_number(r.average_nees.at(k));
        out << ',' << format_number(reports.front().bounds.lower) << ',' << format_number(reports.front().bounds.upper)
            << '\n';
    }
}

void write_consistency_csv(std::ostream& out, const NesReport& measurement_conditioned, const NesReport& nested) {
    if (measurement_conditioned.sigma_bearing_deg != nested.sigma_bearing_deg) {
        throw InvalidArgument("consistency reports use different grids");
    }
    out << "sigma_theta_deg,nes_measurement_conditioned,nes_nested,lower_bound,upper_bound\n";
    for (std::size_t i = 0; i < nested.sigma_bearing_deg.size(); ++i) {
        out << format_number(nested.sigma_bearing_deg[i]) << ','
            << format_number(measurement_conditioned.average_nes[i]) << ',' << format_number(nested.average_nes[i])
            << ',' << format_number(measurement_conditioned.bounds.lower) << ','
            << format_number(measurement_conditioned.bounds.upper) << '\n';
    }
}

void write_golden_csv(std::ostream& out, std::span<const GoldenRow> rows) {
    out << "point,dimension,range,bearing_deg,elevation_deg,range_rate,sigma_range,sigma_bearing_deg,"
           "sigma_elevation_deg,sigma_range_rate,correlation,samples";
    for (const char* a : kAxisNames) out << ",mu_" << a;
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) out << ",R_" << kAxisNames[a] << '_' << kAxisNames[b];
    for (const char* a : kAxisNames) out << ",se_mu_" << a;
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) out << ",se_R_" << kAxisNames[a] << '_' << kAxisNames[b];
    out << '\n';

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& p = rows[i].point;
        const auto& o = rows[i].oracle;
        const bool spatial = p.dim == Dim::Spatial;
        const auto slot = [&](int s) { return spatial ? s : planar_slot(s); };

        out << i << ',' << axes(p.dim) << ',' << format_number(p.measurement.range) << ','
            << format_number(rad_to_deg(p.measurement.bearing)) << ','
            << format_number(spatial ? rad_to_deg(p.measurement.elevation) : 0.0) << ','
            << format_number(p.measurement.range_rate) << ',' << format_number(p.noise.sigma_range) << ','
            << format_number(rad_to_deg(p.noise.sigma_bearing)) << ','
            << format_number(spatial ? rad_to_deg(p.noise.sigma_elevation) : 0.0) << ','
            << format_number(p.noise.sigma_range_rate) << ',' << format_number(p.noise.correlation) << ','
            << o.samples;

        const auto emit_vector = [&](const Eigen::VectorXd& v) {
            for (int s = 0; s < 4; ++s) {
                out << ',';
                if (slot(s) >= 0) out << format_number(v(slot(s)));
            }
        };
        const auto emit_upper = [&](const Eigen::MatrixXd& m) {
            for (int a = 0; a < 4; ++a) {
                for (int b = a; b < 4; ++b) {
                    out << ',';
                    if (slot(a) >= 0 && slot(b) >= 0) out << format_number(m(slot(a), slot(b)));
                }
            }
        };
        emit_vector(o.moments.mean);
        emit_upper(o.moments.covariance);
        emit_vector(o.mean_stderr);
        emit_upper(o.covariance_stderr);
        out << '\n';
    }
}

}  // namespace rcmkf
