#pragma once

#include "rcmkf/filtering.hpp"
#include "rcmkf/scenario.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rcmkf {

/// One Monte Carlo realization of a scenario processed by one filter.
struct RunRecord {
    std::uint64_t run_index = 0;
    FilterVariant variant = FilterVariant::RCMKF_U;
    std::vector<StateVector> truth;                  // indexed by step
    std::vector<SphericalMeasurement> measurements;  // indexed by step
    std::vector<FilterStep> estimates;               // steps after initialization

    std::size_t skipped_updates() const;
};

struct Realization {
    std::vector<StateVector> truth;
    std::vector<SphericalMeasurement> measurements;
};

/// Truth and measurements of run `run_index`, drawn from the stream
/// derive_seed(scenario.seed, run_index). Identical for every variant.
Realization realize(const Scenario& scenario, std::uint64_t run_index);

RunRecord simulate_run(const Scenario& scenario, FilterVariant variant, std::uint64_t run_index);

struct MonteCarloResult {
    std::vector<FilterVariant> variants;
    std::vector<std::vector<RunRecord>> runs;  // [variant][run]

    const std::vector<RunRecord>& runs_of(FilterVariant v) const;
};

/// Runs scenario.runs realizations through every variant on `jobs` worker
/// threads. Output is independent of `jobs`.
MonteCarloResult run_monte_carlo(const Scenario& scenario, std::span<const FilterVariant> variants, int jobs = 1);

}  // namespace rcmkf
