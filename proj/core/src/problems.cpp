#include "gptr/problems.hpp"

#include <cmath>
#include <utility>

namespace gptr {

void ProblemSpec::validate() const {
    require(dim >= 1, "problem dimension must be at least 1");
    require(static_cast<bool>(evaluate), "problem must provide a plant");
    require(noise_std >= 0.0, "noise_std must be nonnegative");
    require(default_start.size() == 0 || default_start.size() == dim,
            "default_start dimension mismatch");
}

PlantFunction noisy_plant(std::function<double(const Vector&)> f,
                          double noise_std) {
    require(noise_std >= 0.0, "noise_std must be nonnegative");
    if (noise_std == 0.0)
        return [f = std::move(f)](const Vector& x, RngEngine&) { return f(x); };
    return [f = std::move(f), noise_std](const Vector& x, RngEngine& rng) {
        return f(x) + rng.normal(0.0, noise_std);
    };
}

ProblemSpec make_quadratic(int dim, double noise_std) {
    require(dim >= 1, "quadratic needs dimension at least 1");
    Vector weights(dim);
    for (int i = 0; i < dim; ++i) weights[i] = 1.0 + 0.5 * i;

    auto value = [weights](const Vector& x) {
        return weights.dot(x.cwiseProduct(x));
    };
    ProblemSpec p;
    p.name = "quadratic" + std::to_string(dim);
    p.dim = dim;
    p.noise_std = noise_std;
    p.evaluate = noisy_plant(value, noise_std);
    p.oracle_value = value;
    p.oracle_gradient = [weights](const Vector& x) -> Vector {
        return 2.0 * weights.cwiseProduct(x);
    };
    p.lipschitz_grad_bound = 2.0 * weights.maxCoeff();
    p.default_start = Vector::Constant(dim, 2.0);
    return p;
}

ProblemSpec make_rosenbrock(double noise_std) {
    auto value = [](const Vector& x) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        return a * a + 100.0 * b * b;
    };
    ProblemSpec p;
    p.name = "rosenbrock";
    p.dim = 2;
    p.noise_std = noise_std;
    p.evaluate = noisy_plant(value, noise_std);
    p.oracle_value = value;
    p.oracle_gradient = [](const Vector& x) -> Vector {
        const double b = x[1] - x[0] * x[0];
        Vector g(2);
        g[0] = -2.0 * (1.0 - x[0]) - 400.0 * x[0] * b;
        g[1] = 200.0 * b;
        return g;
    };
    p.default_start = (Vector(2) << -1.2, 1.0).finished();
    return p;
}

ProblemSpec make_sin_multimodal(double noise_std) {
    auto value = [](const Vector& x) {
        return std::sin(3.0 * x[0]) + 0.5 * x[0] * x[0];
    };
    ProblemSpec p;
    p.name = "sin";
    p.dim = 1;
    p.noise_std = noise_std;
    p.evaluate = noisy_plant(value, noise_std);
    p.oracle_value = value;
    p.oracle_gradient = [](const Vector& x) -> Vector {
        Vector g(1);
        g[0] = 3.0 * std::cos(3.0 * x[0]) + x[0];
        return g;
    };
    p.default_start = Vector::Constant(1, 2.0);
    return p;
}

std::vector<ProblemSpec> analytic_suite(double noise_std) {
    return {make_quadratic(2, noise_std), make_rosenbrock(noise_std),
            make_sin_multimodal(noise_std)};
}

ProblemSpec problem_by_name(const std::string& name, double noise_std) {
    if (name == "rosenbrock") return make_rosenbrock(noise_std);
    if (name == "sin") return make_sin_multimodal(noise_std);
    if (name.rfind("quadratic", 0) == 0) {
        const std::string tail = name.substr(9);
        int dim = 2;
        if (!tail.empty()) {
            try {
                dim = std::stoi(tail);
            } catch (const std::exception&) {
                throw ArgumentError("unknown problem name: " + name);
            }
        }
        return make_quadratic(dim, noise_std);
    }
    throw ArgumentError("unknown problem name: " + name);
}

}  // namespace gptr
