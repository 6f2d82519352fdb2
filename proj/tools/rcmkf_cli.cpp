// Command-line front end for the converted-measurement tracking benchmarks.
//
//   rcmkf simulate    --case 1 --runs 500 --seed 42 --out out/
//   rcmkf consistency --sigma-theta-max 30 --out out/
//   rcmkf golden      --samples 10000000 --out out/

#include "rcmkf/config.hpp"
#include "rcmkf/errors.hpp"
#include "rcmkf/evaluation.hpp"
#include "rcmkf/golden.hpp"
#include "rcmkf/report.hpp"
#include "rcmkf/simulation.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct Options {
    std::string config_path;
    std::optional<int> case_id;
    std::optional<int> runs;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> jobs;
    std::optional<double> sigma_theta_max;
    std::optional<int> sweep_samples;
    std::optional<std::size_t> golden_samples;
};

rcmkf::ExperimentConfig resolve(const Options& o) {
    rcmkf::ExperimentConfig c =
        o.config_path.empty() ? rcmkf::config_from_json(json::object()) : rcmkf::load_config(o.config_path);
    if (o.case_id) {
        const auto seed = c.scenario.seed;
        c.scenario = rcmkf::generate_case(*o.case_id);
        c.scenario.seed = seed;
    }
    if (o.runs) c.scenario.runs = *o.runs;
    if (o.seed) c.seed = *o.seed;
    if (o.out) c.output_dir = *o.out;
    if (o.jobs) c.jobs = *o.jobs;
    if (o.sigma_theta_max) c.sweep.sigma_bearing_deg = rcmkf::default_sweep_grid(*o.sigma_theta_max);
    if (o.sweep_samples) c.sweep.samples = *o.sweep_samples;
    if (o.golden_samples) c.golden_samples = *o.golden_samples;
    c.scenario.seed = c.seed;
    c.sweep.seed = c.seed;
    c.validate();
    return c;
}

fs::path prepare_output(const rcmkf::ExperimentConfig& c) {
    const fs::path dir(c.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw std::runtime_error("cannot create output directory " + dir.string());
    }
    return dir;
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    writer(out);
    out.flush();
    if (!out) throw std::runtime_error("error while writing " + path.string());
}

void write_manifest(const fs::path& dir, const std::string& command, const rcmkf::ExperimentConfig& c,
                    json summary) {
    json manifest = {{"command", command},
                     {"version", std::string(rcmkf::version())},
                     {"seed", c.seed},
                     {"config", rcmkf::to_json(c)},
                     {"summary", std::move(summary)}};
    write_file(dir / "manifest.json", [&](std::ostream& out) { out << manifest.dump(2) << '\n'; });
}

void run_simulate(const rcmkf::ExperimentConfig& c) {
    const fs::path dir = prepare_output(c);
    const auto result = rcmkf::run_monte_carlo(c.scenario, c.variants, c.jobs);

    std::vector<rcmkf::RmseReport> rmse;
    std::vector<rcmkf::NeesReport> nees;
    json summary = json::object();
    bool nees_ok = true;
    for (auto v : c.variants) {
        const auto& runs = result.runs_of(v);
        rmse.push_back(rcmkf::rmse(runs));
        try {
            nees.push_back(rcmkf::nees(runs));
        } catch (const rcmkf::DegenerateCovariance&) {
            nees_ok = false;
        }
        std::size_t skipped = 0;
        for (const auto& r : runs) skipped += r.skipped_updates();
        summary[std::string(rcmkf::to_string(v))] = {
            {"mean_rmse_pos", rcmkf::format_number(rmse.back().time_average(0, c.scenario.steps))},
            {"skipped_updates", skipped}};
    }
    write_file(dir / "rmse.csv", [&](std::ostream& out) { rcmkf::write_rmse_csv(out, c.variants, rmse); });
    if (nees_ok) {
        write_file(dir / "nees.csv", [&](std::ostream& out) { rcmkf::write_nees_csv(out, c.variants, nees); });
    }
    write_manifest(dir, "simulate", c, summary);
    std::cout << "wrote " << (dir / "rmse.csv").string() << " (" << rmse.front().steps.size() << " steps, "
              << c.scenario.runs << " runs)\n";
}

void run_consistency(const rcmkf::ExperimentConfig& c) {
    const fs::path dir = prepare_output(c);
    const auto mc = rcmkf::consistency_sweep(c.sweep, rcmkf::ConversionMethod::MeasurementConditioned);
    const auto nested = rcmkf::consistency_sweep(c.sweep, rcmkf::ConversionMethod::NestedConditioning);
    write_file(dir / "consistency.csv", [&](std::ostream& out) { rcmkf::write_consistency_csv(out, mc, nested); });
    write_manifest(dir, "consistency", c,
                   {{"excursions_measurement_conditioned", mc.excursions()},
                    {"excursions_nested", nested.excursions()},
                    {"lower_bound", rcmkf::format_number(mc.bounds.lower)},
                    {"upper_bound", rcmkf::format_number(mc.bounds.upper)}});
    std::cout << "wrote " << (dir / "consistency.csv").string() << " (" << mc.sigma_bearing_deg.size()
              << " grid points)\n";
}

void run_golden(const rcmkf::ExperimentConfig& c) {
    const fs::path dir = prepare_output(c);
    const auto grid = rcmkf::oracle_grid();
    const auto rows = rcmkf::golden_table(grid, c.golden_samples, c.seed);
    write_file(dir / "golden.csv", [&](std::ostream& out) { rcmkf::write_golden_csv(out, rows); });
    write_manifest(dir, "golden", c, {{"points", rows.size()}, {"samples", c.golden_samples}});
    std::cout << "wrote " << (dir / "golden.csv").string() << " (" << rows.size() << " points)\n";
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--jobs", o.jobs, "worker threads");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Converted-measurement tracking with range rate: benchmarks and golden values"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(rcmkf::version()));

    Options o;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo RMSE of RCMKF-U and RCMKF-D");
    add_common(simulate, o);
    simulate->add_option("--case", o.case_id, "benchmark case (1 or 2)");
    simulate->add_option("--runs", o.runs, "Monte Carlo runs");

    auto* consistency = app.add_subcommand("consistency", "average NES sweep over bearing noise");
    add_common(consistency, o);
    consistency->add_option("--sigma-theta-max", o.sigma_theta_max, "largest bearing sigma in degrees");
    consistency->add_option("--samples", o.sweep_samples, "samples per grid point");

    auto* golden = app.add_subcommand("golden", "Monte Carlo moment tables for the conversion test grid");
    add_common(golden, o);
    golden->add_option("--samples", o.golden_samples, "oracle samples per operating point");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    rcmkf::ExperimentConfig config;
    try {
        config = resolve(o);
    } catch (const rcmkf::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (simulate->parsed()) run_simulate(config);
        if (consistency->parsed()) run_consistency(config);
        if (golden->parsed()) run_golden(config);
    } catch (const rcmkf::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
