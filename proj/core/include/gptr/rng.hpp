#pragma once

#include <cstdint>
#include <random>

#include "gptr/types.hpp"

namespace gptr {

/// Deterministic random stream. All randomness in the library flows through
/// this class so that a (seed, stream) pair reproduces a run exactly.
/// Normal variates use Box-Muller on top of mt19937_64 instead of
/// std::normal_distribution, whose output is implementation-defined.
class RngEngine {
public:
    explicit RngEngine(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi);
    /// Standard normal variate.
    double normal();
    double normal(double mean, double std) { return mean + std * normal(); }
    std::uint64_t next_u64() { return gen_(); }

    Vector uniform_vector(int n, double lo, double hi);
    Vector normal_vector(int n);

    /// Uniform point in the closed ball B(center; radius).
    Vector ball_point(const Vector& center, double radius);

private:
    std::mt19937_64 gen_;
};

/// Mixes a base seed with a stream index into an independent-looking seed
/// (splitmix64 finalizer). Used to give sub-components their own streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace gptr
