#include "gptr/direct_search.hpp"

#include <algorithm>

namespace gptr {

DirectSearchResult direct_search(const std::function<double(const Vector&)>& f,
                                 const Vector& lower, const Vector& upper,
                                 const DirectSearchOptions& opts) {
    const int n = static_cast<int>(lower.size());
    require(n >= 1, "direct search needs dimension at least 1");
    require(upper.size() == n, "box bounds must have the same dimension");
    require((upper.array() >= lower.array()).all(),
            "upper bounds must dominate lower bounds");
    require(static_cast<bool>(f), "objective must be callable");
    require(opts.samples >= 1, "at least one sample is required");
    require(opts.polish_iters >= 0, "polish_iters must be nonnegative");
    require(opts.initial_step > 0.0, "initial_step must be positive");

    DirectSearchResult best;
    best.x = 0.5 * (lower + upper);
    best.value = f(best.x);
    best.evals = 1;

    RngEngine rng(opts.seed);
    for (int i = 0; i < opts.samples; ++i) {
        Vector x(n);
        for (int d = 0; d < n; ++d) x[d] = rng.uniform(lower[d], upper[d]);
        const double v = f(x);
        ++best.evals;
        if (v < best.value) {
            best.value = v;
            best.x = std::move(x);
        }
    }

    const Vector span = upper - lower;
    Vector step = opts.initial_step * span;
    for (int it = 0; it < opts.polish_iters; ++it) {
        if (step.maxCoeff() < 1e-13 * std::max(1.0, span.maxCoeff())) break;
        bool improved = false;
        Vector trial = best.x;
        for (int d = 0; d < n; ++d) {
            for (const double sign : {1.0, -1.0}) {
                trial[d] = std::clamp(best.x[d] + sign * step[d], lower[d],
                                      upper[d]);
                if (trial[d] == best.x[d]) continue;
                const double v = f(trial);
                ++best.evals;
                if (v < best.value) {
                    best.value = v;
                    best.x[d] = trial[d];
                    improved = true;
                }
            }
            trial[d] = best.x[d];
        }
        if (!improved) step *= 0.5;
    }
    return best;
}

}  // namespace gptr
