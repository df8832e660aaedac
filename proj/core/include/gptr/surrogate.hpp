#pragma once

#include <functional>
#include <memory>
#include <utility>

#include "gptr/gp.hpp"

namespace gptr {

/// Anything the trust-region machinery can minimize: a value and a gradient.
class Surrogate {
public:
    virtual ~Surrogate() = default;
    virtual int dim() const = 0;
    virtual double value(const Vector& x) const = 0;
    virtual Vector gradient(const Vector& x) const = 0;
};

/// GP posterior mean as the surrogate (direct mode).
class GpSurrogate final : public Surrogate {
public:
    explicit GpSurrogate(GpModel model) : model_(std::move(model)) {}
    int dim() const override { return model_.dim(); }
    double value(const Vector& x) const override { return model_.posterior_mean(x); }
    Vector gradient(const Vector& x) const override { return model_.mean_grad(x); }
    const GpModel& model() const { return model_; }

private:
    GpModel model_;
};

/// Nominal model cost plus a GP correction trained on plant-minus-model
/// residuals (mismatch mode). The nominal part is a black box, so its
/// gradient is taken by central differences with step `fd_step` per
/// coordinate; the GP part uses its analytic gradient.
class MismatchSurrogate final : public Surrogate {
public:
    MismatchSurrogate(std::function<double(const Vector&)> nominal,
                      GpModel correction, double fd_step = 1e-6)
        : nominal_(std::move(nominal)),
          gp_(std::move(correction)),
          fd_step_(fd_step) {}

    int dim() const override { return gp_.dim(); }
    double value(const Vector& x) const override {
        return nominal_(x) + gp_.posterior_mean(x);
    }
    Vector gradient(const Vector& x) const override;
    const GpModel& model() const { return gp_; }

private:
    std::function<double(const Vector&)> nominal_;
    GpModel gp_;
    double fd_step_;
};

/// Wraps plain callables; used by tests and the certification CLI. Without
/// an explicit gradient, central differences (step 1e-6) are used.
class FunctionSurrogate final : public Surrogate {
public:
    FunctionSurrogate(int dim, std::function<double(const Vector&)> f,
                      std::function<Vector(const Vector&)> grad = nullptr)
        : dim_(dim), f_(std::move(f)), grad_(std::move(grad)) {}

    int dim() const override { return dim_; }
    double value(const Vector& x) const override { return f_(x); }
    Vector gradient(const Vector& x) const override;

private:
    int dim_;
    std::function<double(const Vector&)> f_;
    std::function<Vector(const Vector&)> grad_;
};

/// Central-difference gradient helper shared by the wrappers above.
Vector central_difference_gradient(const std::function<double(const Vector&)>& f,
                                   const Vector& x, double step);

}  // namespace gptr
