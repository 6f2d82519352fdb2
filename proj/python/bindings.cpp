#include "rcmkf/config.hpp"
#include "rcmkf/conversion.hpp"
#include "rcmkf/errors.hpp"
#include "rcmkf/evaluation.hpp"
#include "rcmkf/filtering.hpp"
#include "rcmkf/simulation.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace rcmkf;

namespace {

py::tuple moments_tuple(const ErrorMoments& m) { return py::make_tuple(m.mean, m.covariance); }

Dim dim_of(int d) {
    if (d != 2 && d != 3) throw InvalidArgument("dimension must be 2 or 3");
    return static_cast<Dim>(d);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Converted-measurement Kalman filtering with range rate";
    m.attr("__version__") = std::string(version());

    py::register_exception<DegenerateCovariance>(m, "DegenerateCovariance", PyExc_ArithmeticError);

    py::enum_<ConversionMethod>(m, "ConversionMethod")
        .value("MEASUREMENT_CONDITIONED", ConversionMethod::MeasurementConditioned)
        .value("NESTED_CONDITIONING", ConversionMethod::NestedConditioning);

    py::enum_<FilterVariant>(m, "FilterVariant")
        .value("RCMKF_U", FilterVariant::RCMKF_U)
        .value("RCMKF_D", FilterVariant::RCMKF_D);

    py::class_<SphericalMeasurement>(m, "SphericalMeasurement")
        .def(py::init([](double range, double bearing, double elevation, double range_rate) {
                 return SphericalMeasurement{range, bearing, elevation, range_rate, 0};
             }),
             py::arg("range"), py::arg("bearing"), py::arg("elevation") = 0.0, py::arg("range_rate") = 0.0)
        .def_readwrite("range", &SphericalMeasurement::range)
        .def_readwrite("bearing", &SphericalMeasurement::bearing)
        .def_readwrite("elevation", &SphericalMeasurement::elevation)
        .def_readwrite("range_rate", &SphericalMeasurement::range_rate);

    py::class_<NoiseSpec>(m, "NoiseSpec")
        .def(py::init([](double sr, double sb, double se, double srr, double rho) {
                 NoiseSpec n{sr, sb, se, srr, rho};
                 n.validate();
                 return n;
             }),
             py::arg("sigma_range") = 0.0, py::arg("sigma_bearing") = 0.0, py::arg("sigma_elevation") = 0.0,
             py::arg("sigma_range_rate") = 0.0, py::arg("correlation") = 0.0)
        .def_readwrite("sigma_range", &NoiseSpec::sigma_range)
        .def_readwrite("sigma_bearing", &NoiseSpec::sigma_bearing)
        .def_readwrite("sigma_elevation", &NoiseSpec::sigma_elevation)
        .def_readwrite("sigma_range_rate", &NoiseSpec::sigma_range_rate)
        .def_readwrite("correlation", &NoiseSpec::correlation);

    py::class_<GaussianBelief>(m, "GaussianBelief")
        .def(py::init<Eigen::VectorXd, Eigen::MatrixXd>(), py::arg("mean"), py::arg("covariance"))
        .def_readwrite("mean", &GaussianBelief::mean)
        .def_readwrite("covariance", &GaussianBelief::covariance);

    m.def("convert_position", &convert_position, py::arg("measurement"));
    m.def("convert_pseudo", &convert_pseudo, py::arg("measurement"));
    m.def(
        "unbiased_stats",
        [](const SphericalMeasurement& z, const NoiseSpec& n, int dim) { return moments_tuple(unbiased_stats(z, n, dim_of(dim))); },
        py::arg("measurement"), py::arg("noise"), py::arg("dim") = 2,
        "Measurement-conditioned (mean, covariance) of the converted error.");
    m.def(
        "nested_stats",
        [](const SphericalMeasurement& z, const NoiseSpec& n, int dim) { return moments_tuple(nested_stats(z, n, dim_of(dim))); },
        py::arg("measurement"), py::arg("noise"), py::arg("dim") = 2,
        "Nested-conditioning (mean, covariance) of the converted error.");
    m.def(
        "moment_oracle",
        [](const SphericalMeasurement& z, const NoiseSpec& n, int dim, std::size_t samples, std::uint64_t seed) {
            Rng rng(seed);
            const auto o = mc_moment_oracle(z, n, dim_of(dim), samples, rng);
            py::dict d;
            d["mean"] = o.moments.mean;
            d["covariance"] = o.moments.covariance;
            d["mean_stderr"] = o.mean_stderr;
            d["covariance_stderr"] = o.covariance_stderr;
            return d;
        },
        py::arg("measurement"), py::arg("noise"), py::arg("dim") = 2, py::arg("samples") = 100000,
        py::arg("seed") = 42);

    m.def(
        "decorrelate",
        [](const Eigen::VectorXd& position, double pseudo, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
            ConvertedMeasurement z;
            z.dim = dim_of(static_cast<int>(position.size()));
            z.position = position;
            z.pseudo = pseudo;
            z.moments = {mean, cov};
            const auto d = decorrelate(z);
            py::dict out;
            out["decorrelation"] = Eigen::VectorXd(d.decorrelation.transpose());
            out["pseudo"] = d.pseudo;
            out["pseudo_bias"] = d.pseudo_bias;
            out["pseudo_variance"] = d.pseudo_variance;
            return out;
        },
        py::arg("position"), py::arg("pseudo"), py::arg("mean"), py::arg("covariance"));
    m.def(
        "linearize_pseudo",
        [](const GaussianBelief& b, const Eigen::VectorXd& decorrelation) {
            const auto lin = linearize_pseudo(b, decorrelation.transpose());
            return py::make_tuple(Eigen::VectorXd(lin.jacobian.transpose()), lin.correction, lin.variance_inflation);
        },
        py::arg("belief"), py::arg("decorrelation"), "(jacobian, delta^2, A) of the pseudo-measurement function.");

    m.def(
        "simulate",
        [](int case_id, int runs, std::uint64_t seed, int jobs) {
            auto s = generate_case(case_id);
            s.runs = runs;
            s.seed = seed;
            const std::array variants{FilterVariant::RCMKF_U, FilterVariant::RCMKF_D};
            MonteCarloResult mc;
            {
                py::gil_scoped_release release;
                mc = run_monte_carlo(s, variants, jobs);
            }
            const auto u = rmse(mc.runs_of(FilterVariant::RCMKF_U));
            const auto d = rmse(mc.runs_of(FilterVariant::RCMKF_D));
            py::dict out;
            out["step"] = u.steps;
            out["rmse_pos_rcmkfu"] = u.rmse;
            out["rmse_pos_rcmkfd"] = d.rmse;
            return out;
        },
        py::arg("case_id") = 1, py::arg("runs") = 500, py::arg("seed") = 42, py::arg("jobs") = 1,
        "Per-step position RMSE of both filters on a benchmark case.");

    m.def(
        "consistency_sweep",
        [](ConversionMethod method, std::vector<double> sigma_bearing_deg, int samples, std::uint64_t seed) {
            SweepSetup setup;
            setup.sigma_bearing_deg = std::move(sigma_bearing_deg);
            setup.samples = samples;
            setup.seed = seed;
            const auto r = consistency_sweep(setup, method);
            py::dict out;
            out["sigma_theta_deg"] = r.sigma_bearing_deg;
            out["average_nes"] = r.average_nes;
            out["inside"] = r.inside;
            out["bounds"] = py::make_tuple(r.bounds.lower, r.bounds.upper);
            return out;
        },
        py::arg("method"), py::arg("sigma_bearing_deg") = default_sweep_grid(), py::arg("samples") = 1000,
        py::arg("seed") = 42);

    m.def(
        "chi_square_bounds",
        [](int dof, int samples, double tail) {
            const auto b = chi_square_bounds(dof, samples, tail);
            return py::make_tuple(b.lower, b.upper);
        },
        py::arg("dof"), py::arg("samples"), py::arg("tail") = 0.001);
}
