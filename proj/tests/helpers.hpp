#pragma once

#include <cmath>
#include <functional>

#include "gptr/dataset.hpp"
#include "gptr/rng.hpp"
#include "gptr/types.hpp"

namespace gptr::testing {

/// Independent central-difference gradient used to cross-check every
/// analytic gradient in the library.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f,
                          const Vector& x, double h = 1e-6) {
    Vector g(x.size());
    for (int i = 0; i < x.size(); ++i) {
        Vector hi = x, lo = x;
        hi[i] += h;
        lo[i] -= h;
        g[i] = (f(hi) - f(lo)) / (2.0 * h);
    }
    return g;
}

/// Seeded dataset with uniform inputs in [lo, hi]^dim and outputs from `f`
/// plus optional Gaussian noise.
inline Dataset random_dataset(std::uint64_t seed, int count, int dim,
                              const std::function<double(const Vector&)>& f,
                              double lo = -1.0, double hi = 1.0,
                              double noise_std = 0.0) {
    RngEngine rng(seed);
    Dataset d;
    for (int i = 0; i < count; ++i) {
        const Vector x = rng.uniform_vector(dim, lo, hi);
        double z = f(x);
        if (noise_std > 0.0) z += rng.normal(0.0, noise_std);
        d.append(x, z);
    }
    return d;
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace gptr::testing
