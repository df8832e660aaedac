#pragma once

#include <nlohmann/json_fwd.hpp>

#include "gptr/types.hpp"

namespace gptr {

/// Hyperparameters of the squared-exponential ARD covariance
///
///   c(x_i, x_j) = signal_std^2 * exp(-(x_i-x_j)' Lambda (x_i-x_j) / 2),
///
/// where Lambda = diag(inv_lengthscales). `noise_std` is the standard
/// deviation of the additive sampling noise and enters the regression
/// system as Q = C + noise_std^2 * I; it is not part of the kernel itself.
///
/// Values are stored on the natural scale; the trainer works on log(sigma_f)
/// and log(lambda_i) internally to keep them positive.
struct Hyperparams {
    double signal_std = 1.0;
    Vector inv_lengthscales;
    double noise_std = 0.0;

    int input_dim() const { return static_cast<int>(inv_lengthscales.size()); }
    double signal_var() const { return signal_std * signal_std; }

    /// Throws ArgumentError unless signal_std > 0, every inv_lengthscale > 0
    /// and noise_std >= 0.
    void validate() const;

    /// Convenience: unit signal, unit inverse lengthscales, given noise.
    static Hyperparams isotropic(int dim, double signal_std = 1.0,
                                 double inv_lengthscale = 1.0,
                                 double noise_std = 0.0);
};

void to_json(nlohmann::json& j, const Hyperparams& h);
void from_json(const nlohmann::json& j, Hyperparams& h);

/// c(x_i, x_j) under `theta`. Symmetric; in (0, signal_std^2].
double eval_kernel(const Vector& x_i, const Vector& x_j, const Hyperparams& theta);

/// Gradient of eval_kernel with respect to its first argument:
/// -Lambda (x_i - x_j) c(x_i, x_j).
Vector kernel_grad_x(const Vector& x_i, const Vector& x_j, const Hyperparams& theta);

/// Gradient of eval_kernel with respect to the log-hyperparameters
/// (log signal_std, log inv_lengthscale_1, ...). Used by the trainer.
Vector kernel_grad_log_hyper(const Vector& x_i, const Vector& x_j,
                             const Hyperparams& theta);

/// Covariance matrix C with C_ij = c(x_i, x_j); X holds one point per row.
Matrix cov_matrix(const Matrix& X, const Hyperparams& theta);

/// Covariance vector [c(x, x_1), ..., c(x, x_l)]'.
Vector cov_vector(const Vector& x, const Matrix& X, const Hyperparams& theta);

/// Extension point for other covariance functions. Only the SE-ARD kernel
/// is implemented; the free functions above are its canonical entry points.
class CovarianceKernel {
public:
    virtual ~CovarianceKernel() = default;
    virtual double value(const Vector& x_i, const Vector& x_j,
                         const Hyperparams& theta) const = 0;
    virtual Vector grad_x(const Vector& x_i, const Vector& x_j,
                          const Hyperparams& theta) const = 0;
};

class SquaredExponentialArd final : public CovarianceKernel {
public:
    double value(const Vector& x_i, const Vector& x_j,
                 const Hyperparams& theta) const override {
        return eval_kernel(x_i, x_j, theta);
    }
    Vector grad_x(const Vector& x_i, const Vector& x_j,
                  const Hyperparams& theta) const override {
        return kernel_grad_x(x_i, x_j, theta);
    }
};

}  // namespace gptr
