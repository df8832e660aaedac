#include "gptr/ball_grid.hpp"

#include <cmath>
#include <numbers>

namespace gptr {

namespace {

constexpr std::uint32_t kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                     31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

double acklam_inverse_cdf(double p) {
    // Acklam's rational minimax approximation.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - plow) {
        q = p - 0.5;
        r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double halton(std::uint64_t index, std::uint32_t base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

double inverse_normal_cdf(double p) {
    require(p > 0.0 && p < 1.0, "inverse_normal_cdf: p must lie in (0,1)");
    double x = acklam_inverse_cdf(p);
    // One Halley refinement against erfc brings the error to ~1e-15.
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

std::vector<Vector> ball_grid(const Vector& center, double radius, int count) {
    const int n = static_cast<int>(center.size());
    require(count >= 1, "ball_grid: count must be >= 1");
    require(radius > 0.0, "ball_grid: radius must be positive");
    require(n >= 1 && n <= 19, "ball_grid: dimension must be in [1, 19]");

    std::vector<Vector> pts;
    pts.reserve(count);
    pts.push_back(center);
    for (int i = 0; i < n && static_cast<int>(pts.size()) < count; ++i) {
        Vector p = center;
        p[i] += radius;
        pts.push_back(p);
        if (static_cast<int>(pts.size()) == count) break;
        p[i] = center[i] - radius;
        pts.push_back(p);
    }

    std::uint64_t idx = 1;
    while (static_cast<int>(pts.size()) < count) {
        Vector z(n);
        for (int j = 0; j < n; ++j) {
            double u = halton(idx, kPrimes[j]);
            u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
            z[j] = inverse_normal_cdf(u);
        }
        double nrm = z.norm();
        if (nrm == 0.0) {
            z.setZero();
            z[0] = 1.0;
            nrm = 1.0;
        }
        const double t = halton(idx, kPrimes[n]);
        const double r = radius * std::pow(t, 1.0 / n);
        pts.push_back(center + (r / nrm) * z);
        ++idx;
    }
    return pts;
}

}  // namespace gptr
