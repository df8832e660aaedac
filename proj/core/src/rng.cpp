#include "gptr/rng.hpp"

#include <cmath>
#include <numbers>

namespace gptr {

double RngEngine::uniform() {
    // 53-bit mantissa resolution in [0, 1)
    return (gen_() >> 11) * 0x1.0p-53;
}

double RngEngine::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double RngEngine::normal() {
    // Box-Muller, cosine branch only; u1 shifted away from 0 for the log.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vector RngEngine::uniform_vector(int n, double lo, double hi) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
}

Vector RngEngine::normal_vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
}

Vector RngEngine::ball_point(const Vector& center, double radius) {
    const int n = static_cast<int>(center.size());
    Vector dir = normal_vector(n);
    double nrm = dir.norm();
    if (nrm == 0.0) {
        dir.setZero();
        dir[0] = 1.0;
        nrm = 1.0;
    }
    const double r = radius * std::pow(uniform(), 1.0 / n);
    return center + (r / nrm) * dir;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace gptr
