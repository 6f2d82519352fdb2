#include "rcmkf/simulation.hpp"

#include "rcmkf/errors.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace rcmkf {

std::size_t RunRecord::skipped_updates() const {
    return static_cast<std::size_t>(
        std::count_if(estimates.begin(), estimates.end(), [](const FilterStep& s) { return s.update_skipped; }));
}

Realization realize(const Scenario& scenario, std::uint64_t run_index) {
    Rng rng(derive_seed(scenario.seed, run_index));
    Realization r;
    r.truth = generate_truth(scenario, rng);
    r.measurements = generate_measurements(r.truth, scenario.noise, rng);
    return r;
}

RunRecord simulate_run(const Scenario& scenario, FilterVariant variant, std::uint64_t run_index) {
    Realization r = realize(scenario, run_index);
    RunRecord rec;
    rec.run_index = run_index;
    rec.variant = variant;
    rec.estimates = track(variant, r.measurements, scenario.noise, scenario.model);
    rec.truth = std::move(r.truth);
    rec.measurements = std::move(r.measurements);
    return rec;
}

const std::vector<RunRecord>& MonteCarloResult::runs_of(FilterVariant v) const {
    for (std::size_t i = 0; i < variants.size(); ++i) {
        if (variants[i] == v) return runs[i];
    }
    throw InvalidArgument("variant was not part of this Monte Carlo result");
}

MonteCarloResult run_monte_carlo(const Scenario& scenario, std::span<const FilterVariant> variants, int jobs) {
    scenario.validate();
    if (variants.empty()) throw InvalidArgument("at least one filter variant is required");
    if (jobs < 1) throw InvalidArgument("jobs must be at least 1");
    if (scenario.steps <= kInitializationSteps) {
        throw InvalidArgument("scenario needs more than two steps to initialize a filter");
    }
    const auto n_runs = static_cast<std::size_t>(scenario.runs);

    MonteCarloResult result;
    result.variants.assign(variants.begin(), variants.end());
    result.runs.assign(variants.size(), std::vector<RunRecord>(n_runs));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t i = next++; i < n_runs; i = next++) {
            try {
                Realization r = realize(scenario, i);
                for (std::size_t v = 0; v < variants.size(); ++v) {
                    RunRecord& rec = result.runs[v][i];
                    rec.run_index = i;
                    rec.variant = variants[v];
                    rec.estimates = track(variants[v], r.measurements, scenario.noise, scenario.model);
                    rec.truth = r.truth;
                    rec.measurements = r.measurements;
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n_runs;
            }
        }
    };

    const int workers = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(n_runs, 1)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return result;
}

}  // namespace rcmkf
