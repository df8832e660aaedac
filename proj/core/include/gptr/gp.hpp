#pragma once

#include <cstdint>
#include <optional>

#include "gptr/dataset.hpp"
#include "gptr/kernel.hpp"

namespace gptr {

/// Gaussian-process regressor built on the SE-ARD kernel and a zero prior
/// mean. Holds the dataset, the hyperparameters and the lower Cholesky
/// factor of Q = C + noise_std^2 I (plus whatever diagonal jitter the
/// factorization needed). Immutable once fitted; with_point() produces a
/// new model.
///
/// Posterior at a query x:
///   mean      c(x)' Q^{-1} z          (O(l) given the cached weights)
///   variance  k(x) - c(x)' Q^{-1} c(x), clamped to [0, signal_std^2]
class GpModel {
public:
    GpModel() = default;

    /// Factorizes Q once. Failure triggers the jitter ladder: add
    /// 1e-10 * signal_std^2 to the diagonal, escalate tenfold up to
    /// 1e-4 * signal_std^2, then throw NumericalError. An empty dataset
    /// yields the prior model (mean 0, variance signal_std^2).
    static GpModel fit(Dataset data, Hyperparams theta);

    /// New model with (x, z) appended; reuses the existing factor and
    /// extends it by one row (O(l^2)). Falls back to a full refit if the
    /// extended pivot is not positive.
    GpModel with_point(const Vector& x, double z) const;

    double posterior_mean(const Vector& x) const;
    double posterior_var(const Vector& x) const;
    /// Analytic gradient of the posterior mean; matches central finite
    /// differences of posterior_mean.
    Vector mean_grad(const Vector& x) const;

    const Dataset& data() const { return data_; }
    const Hyperparams& hyperparams() const { return theta_; }
    double jitter() const { return jitter_; }
    const Matrix& chol_lower() const { return chol_; }
    const Vector& alpha_weights() const { return alpha_; }
    int size() const { return data_.size(); }
    int dim() const { return theta_.input_dim(); }

private:
    void check_query(const Vector& x, const char* who) const;

    Dataset data_;
    Hyperparams theta_;
    Matrix chol_;    // lower triangular L with L L' = Q + jitter I
    Vector alpha_;   // Q^{-1} z
    double jitter_ = 0.0;
};

/// Log-marginal likelihood of the data under `theta`, via the Cholesky
/// factor: -z'Q^{-1}z/2 - log|Q|/2 - (l/2) log 2pi. Uses the same jitter
/// ladder as GpModel::fit.
double log_marginal_likelihood(const Hyperparams& theta, const Dataset& data);

struct TrainOptions {
    int restarts = 5;          // random starts, uniform in the log box
    std::uint64_t seed = 0;
    double log_box = 5.0;      // starts drawn from [-log_box, log_box]
    int max_ascent_iters = 80;
    double grad_tol = 1e-5;
    /// Extra start at these hyperparameters (e.g. the previous estimate).
    std::optional<Hyperparams> warm_start;
};

/// Maximizes the log-marginal likelihood over (signal_std, inv_lengthscales)
/// in log space; noise_std is the known sampling-noise level and stays
/// fixed. Multi-start gradient ascent: the returned hyperparameters score at
/// least as well as every start point, including the warm start and a
/// data-driven heuristic start. Deterministic given the seed.
Hyperparams train(const Dataset& data, double noise_std,
                  const TrainOptions& opts = {});

/// Maximum posterior standard deviation over a deterministic low-discrepancy
/// sample of `grid` points covering B(center; delta) (center always
/// included). Nondecreasing in `grid`.
double max_posterior_std_in_ball(const GpModel& model, const Vector& center,
                                 double delta, int grid);

}  // namespace gptr
