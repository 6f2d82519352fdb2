#pragma once

#include <cstdint>
#include <random>

namespace rcmkf {

/// SplitMix64 finalizer applied to (master, stream). Used to give every
/// Monte Carlo realization its own independent engine so that results do not
/// depend on how realizations are scheduled across threads.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Seeded random source with platform-independent output.
///
/// std::normal_distribution is implementation-defined, so Gaussian variates
/// are produced here by Box-Muller on top of mt19937_64, whose output
/// sequence is fixed by the standard.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1).
    double uniform();
    double gaussian();
    double gaussian(double sigma) { return sigma * gaussian(); }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace rcmkf
