#pragma once

#include "rcmkf/evaluation.hpp"
#include "rcmkf/filtering.hpp"
#include "rcmkf/scenario.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rcmkf {

/// git-describe style version of the build, recorded in run manifests.
std::string_view version();

/// Everything needed to reproduce one experiment. Angles are stored in
/// radians here and appear in degrees in the JSON form.
struct ExperimentConfig {
    Scenario scenario = generate_case(1);
    std::vector<FilterVariant> variants{FilterVariant::RCMKF_U, FilterVariant::RCMKF_D};
    std::string output_dir = "out";
    std::uint64_t seed = 42;
    int jobs = 1;
    SweepSetup sweep{.sigma_bearing_deg = default_sweep_grid()};
    std::size_t golden_samples = 10'000'000;

    /// Throws InvalidArgument on any inconsistency.
    void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& config);

/// Missing keys keep their defaults. A "case" key in the scenario section
/// starts from that benchmark case before applying the remaining keys.
/// Throws InvalidArgument on malformed input.
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace rcmkf
