#include "rcmkf/config.hpp"

#include "rcmkf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <fstream>
#include <limits>

namespace rcmkf {
namespace {

using nlohmann::json;

// Degree value whose conversion reproduces `rad` bit for bit, so that a
// serialized config parses back to identical radians.
double degrees_exact(double rad) {
    double d = rad_to_deg(rad);
    if (deg_to_rad(d) == rad) return d;
    double up = d, down = d;
    for (int i = 0; i < 8; ++i) {
        up = std::nextafter(up, std::numeric_limits<double>::infinity());
        down = std::nextafter(down, -std::numeric_limits<double>::infinity());
        if (deg_to_rad(up) == rad) return up;
        if (deg_to_rad(down) == rad) return down;
    }
    return d;
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const char* section) {
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw InvalidArgument(std::string("unknown config key '") + key + "' in " + section);
        }
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config key '") + key + "': " + e.what());
    }
}

void read_degrees(const json& j, const char* key, double& rad) {
    if (!j.contains(key)) return;
    double deg = 0.0;
    read(j, key, deg);
    rad = deg_to_rad(deg);
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json noise_json(const NoiseSpec& n) {
    return {{"sigma_range", n.sigma_range},
            {"sigma_bearing_deg", degrees_exact(n.sigma_bearing)},
            {"sigma_elevation_deg", degrees_exact(n.sigma_elevation)},
            {"sigma_range_rate", n.sigma_range_rate},
            {"correlation", n.correlation}};
}

NoiseSpec noise_from(const json& j, NoiseSpec n) {
    if (!j.is_object()) throw InvalidArgument("config 'noise' must be an object");
    check_keys(j, {"sigma_range", "sigma_bearing_deg", "sigma_elevation_deg", "sigma_range_rate", "correlation"},
               "noise");
    read(j, "sigma_range", n.sigma_range);
    read_degrees(j, "sigma_bearing_deg", n.sigma_bearing);
    read_degrees(j, "sigma_elevation_deg", n.sigma_elevation);
    read(j, "sigma_range_rate", n.sigma_range_rate);
    read(j, "correlation", n.correlation);
    return n;
}

json scenario_json(const Scenario& s) {
    json maneuvers = json::array();
    for (const auto& e : s.maneuvers.entries()) {
        maneuvers.push_back({{"start_step", e.start_step}, {"acceleration", vector_json(e.acceleration)}});
    }
    json j = {{"dimension", axes(s.dim())},
              {"period", s.model.period},
              {"process_noise_std", s.model.accel_std()},
              {"initial_state", vector_json(s.initial.values())},
              {"maneuvers", maneuvers},
              {"noise", noise_json(s.noise)},
              {"steps", s.steps},
              {"runs", s.runs}};
    if (s.case_id != 0) j["case"] = s.case_id;
    return j;
}

Scenario scenario_from(const json& j, Scenario s) {
    if (!j.is_object()) throw InvalidArgument("config 'scenario' must be an object");
    check_keys(j, {"case", "dimension", "period", "process_noise_std", "initial_state", "maneuvers", "noise", "steps",
                   "runs"},
               "scenario");
    if (j.contains("case")) {
        int id = 0;
        read(j, "case", id);
        s = generate_case(id);
    }
    int dimension = axes(s.dim());
    double period = s.model.period;
    double accel_std = s.model.accel_std();
    read(j, "dimension", dimension);
    read(j, "period", period);
    read(j, "process_noise_std", accel_std);
    if (dimension != 2 && dimension != 3) throw InvalidArgument("scenario dimension must be 2 or 3");
    const Dim dim = static_cast<Dim>(dimension);
    const bool model_changed = j.contains("dimension") || j.contains("period") || j.contains("process_noise_std");
    if (model_changed) s.model = DynamicModel::constant_velocity(dim, period, accel_std);

    if (j.contains("initial_state")) {
        std::vector<double> x;
        read(j, "initial_state", x);
        s.initial = StateVector(vector_from(x));
    }
    if (j.contains("maneuvers")) {
        if (!j.at("maneuvers").is_array()) throw InvalidArgument("config 'maneuvers' must be an array");
        std::vector<ManeuverEntry> entries;
        for (const auto& e : j.at("maneuvers")) {
            if (!e.is_object()) throw InvalidArgument("each maneuver must be an object");
            check_keys(e, {"start_step", "acceleration"}, "maneuver");
            ManeuverEntry entry;
            std::vector<double> a;
            read(e, "start_step", entry.start_step);
            read(e, "acceleration", a);
            entry.acceleration = vector_from(a);
            entries.push_back(std::move(entry));
        }
        s.maneuvers = ManeuverSchedule(std::move(entries));
    }
    if (j.contains("noise")) s.noise = noise_from(j.at("noise"), s.noise);
    read(j, "steps", s.steps);
    read(j, "runs", s.runs);
    if (!j.contains("case") && (model_changed || j.contains("initial_state") || j.contains("maneuvers"))) {
        s.case_id = 0;
    }
    return s;
}

json sweep_json(const SweepSetup& s) {
    return {{"range", s.range},
            {"bearing_deg", degrees_exact(s.bearing)},
            {"range_rate", s.range_rate},
            {"sigma_range", s.sigma_range},
            {"sigma_range_rate", s.sigma_range_rate},
            {"correlation", s.correlation},
            {"sigma_bearing_deg", s.sigma_bearing_deg},
            {"samples", s.samples},
            {"tail", s.tail}};
}

SweepSetup sweep_from(const json& j, SweepSetup s) {
    if (!j.is_object()) throw InvalidArgument("config 'sweep' must be an object");
    check_keys(j, {"range", "bearing_deg", "range_rate", "sigma_range", "sigma_range_rate", "correlation",
                   "sigma_bearing_max_deg", "sigma_bearing_deg", "samples", "tail"},
               "sweep");
    read(j, "range", s.range);
    read_degrees(j, "bearing_deg", s.bearing);
    read(j, "range_rate", s.range_rate);
    read(j, "sigma_range", s.sigma_range);
    read(j, "sigma_range_rate", s.sigma_range_rate);
    read(j, "correlation", s.correlation);
    if (j.contains("sigma_bearing_max_deg")) {
        double max_deg = 30.0;
        read(j, "sigma_bearing_max_deg", max_deg);
        s.sigma_bearing_deg = default_sweep_grid(max_deg);
    }
    read(j, "sigma_bearing_deg", s.sigma_bearing_deg);
    read(j, "samples", s.samples);
    read(j, "tail", s.tail);
    return s;
}

}  // namespace

#ifndef RCMKF_VERSION
#define RCMKF_VERSION "0.0.0-unknown"
#endif

std::string_view version() { return RCMKF_VERSION; }

void ExperimentConfig::validate() const {
    scenario.validate();
    if (variants.empty()) throw InvalidArgument("at least one filter variant must be selected");
    if (jobs < 1) throw InvalidArgument("jobs must be at least 1");
    if (output_dir.empty()) throw InvalidArgument("output directory must not be empty");
    if (sweep.sigma_bearing_deg.empty()) throw InvalidArgument("consistency sweep grid is empty");
    for (double d : sweep.sigma_bearing_deg) {
        if (!(d >= 0.0) || !std::isfinite(d)) throw InvalidArgument("sweep sigma values must be finite and >= 0");
    }
    if (sweep.samples < 1) throw InvalidArgument("sweep samples must be at least 1");
    if (!(sweep.tail > 0.0 && sweep.tail < 0.5)) throw InvalidArgument("sweep tail must lie in (0, 0.5)");
    if (golden_samples < 10000) throw InvalidArgument("golden samples must be at least 10^4");
}

json to_json(const ExperimentConfig& c) {
    json variants = json::array();
    for (auto v : c.variants) variants.push_back(std::string(to_string(v)));
    return {{"seed", c.seed},
            {"jobs", c.jobs},
            {"output_dir", c.output_dir},
            {"variants", variants},
            {"golden_samples", c.golden_samples},
            {"scenario", scenario_json(c.scenario)},
            {"sweep", sweep_json(c.sweep)}};
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    check_keys(j, {"seed", "jobs", "output_dir", "variants", "golden_samples", "scenario", "sweep"}, "config");
    ExperimentConfig c;
    read(j, "seed", c.seed);
    read(j, "jobs", c.jobs);
    read(j, "output_dir", c.output_dir);
    read(j, "golden_samples", c.golden_samples);
    if (j.contains("variants")) {
        std::vector<std::string> names;
        read(j, "variants", names);
        c.variants.clear();
        for (const auto& n : names) c.variants.push_back(parse_variant(n));
    }
    if (j.contains("scenario")) c.scenario = scenario_from(j.at("scenario"), c.scenario);
    if (j.contains("sweep")) c.sweep = sweep_from(j.at("sweep"), c.sweep);
    c.scenario.seed = c.seed;
    c.sweep.seed = c.seed;
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidArgument("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

}  // namespace rcmkf
