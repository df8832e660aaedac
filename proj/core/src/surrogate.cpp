#include "gptr/surrogate.hpp"

namespace gptr {

Vector central_difference_gradient(const std::function<double(const Vector&)>& f,
                                   const Vector& x, double step) {
    require(step > 0.0, "finite-difference step must be positive");
    Vector g(x.size());
    Vector probe = x;
    for (int i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + step;
        const double hi = f(probe);
        probe[i] = x[i] - step;
        const double lo = f(probe);
        probe[i] = x[i];
        g[i] = (hi - lo) / (2.0 * step);
    }
    return g;
}

Vector MismatchSurrogate::gradient(const Vector& x) const {
    return central_difference_gradient(nominal_, x, fd_step_) + gp_.mean_grad(x);
}

Vector FunctionSurrogate::gradient(const Vector& x) const {
    if (grad_) return grad_(x);
    return central_difference_gradient(f_, x, 1e-6);
}

}  // namespace gptr
