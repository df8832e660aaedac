#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gptr/rng.hpp"
#include "gptr/types.hpp"

namespace gptr {

/// One noisy measurement of the true objective at a point. The RNG carries
/// the noise stream; noiseless plants ignore it.
using PlantFunction = std::function<double(const Vector&, RngEngine&)>;

/// An optimization problem as the trust-region loop sees it: the noisy
/// plant, optionally a known nominal model (for mismatch-mode surrogates)
/// and exact value/gradient oracles (tests and certification only).
struct ProblemSpec {
    std::string name;
    int dim = 0;
    PlantFunction evaluate;
    double noise_std = 0.0;
    std::function<double(const Vector&)> nominal_model;
    std::function<double(const Vector&)> oracle_value;
    std::function<Vector(const Vector&)> oracle_gradient;
    std::optional<double> lipschitz_grad_bound;
    Vector default_start;

    bool has_oracle() const {
        return static_cast<bool>(oracle_value) &&
               static_cast<bool>(oracle_gradient);
    }
    void validate() const;
};

/// Wraps an exact function as a plant with additive N(0, noise_std^2)
/// measurement noise; with noise_std = 0 the plant returns f exactly and
/// consumes no random draws.
PlantFunction noisy_plant(std::function<double(const Vector&)> f,
                          double noise_std);

/// Convex quadratic sum_i (1 + i/2) x_i^2 with minimum 0 at the origin.
ProblemSpec make_quadratic(int dim, double noise_std = 0.0);

/// The 2-D Rosenbrock function (1-x)^2 + 100 (y-x^2)^2, minimum at (1,1).
ProblemSpec make_rosenbrock(double noise_std = 0.0);

/// 1-D multimodal test function sin(3x) + x^2/2.
ProblemSpec make_sin_multimodal(double noise_std = 0.0);

/// The desk-scale problems with exact oracles, at a common noise level.
std::vector<ProblemSpec> analytic_suite(double noise_std = 0.0);

/// Looks a problem up by name ("quadratic2", "quadratic5", "rosenbrock",
/// "sin"); throws ArgumentError for unknown names.
ProblemSpec problem_by_name(const std::string& name, double noise_std = 0.0);

}  // namespace gptr
