#pragma once

#include <cstdint>
#include <string>

#include "gptr/surrogate.hpp"
#include "gptr/trust_region.hpp"

namespace gptr {

enum class LocalKind { linear, quadratic };

std::string to_string(LocalKind kind);
LocalKind local_kind_from_string(const std::string& s);

/// Polynomial surrogate fitted inside one trust region: value
/// intercept + g'(x-center) [+ (x-center)'H(x-center)/2 for the quadratic
/// kind]. A linear model carries dim+1 coefficients, a quadratic one
/// 1 + dim + dim(dim+1)/2.
class LocalModel final : public Surrogate {
public:
    LocalModel(LocalKind kind, Vector center, double radius, double intercept,
               Vector gradient_coeffs, Matrix hessian);

    int dim() const override { return static_cast<int>(center_.size()); }
    double value(const Vector& x) const override;
    Vector gradient(const Vector& x) const override;

    LocalKind kind() const { return kind_; }
    const Vector& center() const { return center_; }
    double radius() const { return radius_; }
    double intercept() const { return intercept_; }
    const Vector& gradient_coeffs() const { return gradient_; }
    const Matrix& hessian() const { return hessian_; }
    int coefficient_count() const;

private:
    LocalKind kind_;
    Vector center_;
    double radius_;
    double intercept_;
    Vector gradient_;
    Matrix hessian_; // 0x0 for linear models
};

struct LocalBuild {
    LocalModel model;
    int plant_evals_used = 0;
    Matrix design; // one sample per row, center first
    Vector values; // matching plant measurements
};

/// Samples the plant on a fresh design inside B(center; delta) and fits the
/// model. Linear: center plus the dim scaled coordinate directions, exact
/// interpolation. Quadratic: those plus seeded ball samples up to
/// ceil(1.2 * coefficient count), least squares. Designs whose scaled
/// condition number exceeds max_cond are redrawn (up to `redraws` times,
/// then PoisednessError).
LocalBuild build_local(LocalKind kind, const PlantFunction& plant,
                       const Vector& center, double delta, RngEngine& rng,
                       double max_cond = 1e8, int redraws = 10);

/// The trust-region loop with the GP replaced by a local model rebuilt at
/// every iteration. Trace and result carry the same schema as run();
/// plant_evals_used per record includes the rebuild cost. The result's GP
/// model is empty; `data` collects every plant sample taken.
TrRunResult run_local_tr(const ProblemSpec& problem, const TrConfig& config,
                         LocalKind kind, const Vector& x0, std::uint64_t seed,
                         const RunHooks& hooks = {});

}  // namespace gptr
