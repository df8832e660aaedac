#pragma once

#include <cstdint>
#include <functional>

#include "gptr/rng.hpp"
#include "gptr/types.hpp"

namespace gptr {

struct DirectSearchOptions {
    int samples = 2000;       // seeded uniform box samples
    int polish_iters = 400;   // compass-search sweeps after the best sample
    double initial_step = 0.25; // compass step as a fraction of the box span
    std::uint64_t seed = 0;
};

struct DirectSearchResult {
    Vector x;
    double value = 0.0;
    int evals = 0;
};

/// Derivative-free box minimization used as a reference optimizer: seeded
/// uniform sampling over [lower, upper] followed by coordinate (compass)
/// search with step halving. Deterministic given the seed; not meant to be
/// fast, only reliable on the smooth low-dimensional problems here.
DirectSearchResult direct_search(const std::function<double(const Vector&)>& f,
                                 const Vector& lower, const Vector& upper,
                                 const DirectSearchOptions& opts = {});

}  // namespace gptr
