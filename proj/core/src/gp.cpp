#include "gptr/gp.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <numbers>

#include "gptr/ball_grid.hpp"
#include "gptr/rng.hpp"

namespace gptr {

namespace {

constexpr double kJitterStart = 1e-10;
constexpr double kJitterCap = 1e-4;

/// Cholesky with escalating diagonal jitter (relative to signal variance).
/// Returns the lower factor and the jitter actually applied.
std::pair<Matrix, double> jittered_cholesky(const Matrix& Q, double signal_var) {
    Eigen::LLT<Matrix> llt(Q);
    if (llt.info() == Eigen::Success) return {Matrix(llt.matrixL()), 0.0};
    for (double j = kJitterStart; j <= kJitterCap * (1.0 + 1e-12); j *= 10.0) {
        Matrix Qj = Q;
        Qj.diagonal().array() += j * signal_var;
        llt.compute(Qj);
        if (llt.info() == Eigen::Success) return {Matrix(llt.matrixL()), j * signal_var};
    }
    throw NumericalError(
        "jittered_cholesky: Q stayed non-positive-definite up to jitter "
        "1e-4 * signal_var; dataset is numerically singular");
}

}  // namespace

void GpModel::check_query(const Vector& x, const char* who) const {
    if (x.size() != theta_.input_dim())
        throw ArgumentError(std::string(who) + ": query dimension mismatch");
}

GpModel GpModel::fit(Dataset data, Hyperparams theta) {
    theta.validate();
    GpModel m;
    m.theta_ = std::move(theta);
    if (!data.empty()) {
        require(data.dim() == m.theta_.input_dim(),
                "GpModel::fit: data dimension does not match hyperparameters");
        Matrix Q = cov_matrix(data.inputs, m.theta_);
        Q.diagonal().array() += m.theta_.noise_std * m.theta_.noise_std;
        auto [L, jit] = jittered_cholesky(Q, m.theta_.signal_var());
        m.chol_ = std::move(L);
        m.jitter_ = jit;
        m.alpha_ = m.chol_.triangularView<Eigen::Lower>().solve(data.outputs);
        m.chol_.triangularView<Eigen::Lower>().transpose().solveInPlace(m.alpha_);
    }
    m.data_ = std::move(data);
    return m;
}

GpModel GpModel::with_point(const Vector& x, double z) const {
    check_query(x, "GpModel::with_point");
    if (data_.empty()) {
        Dataset d;
        d.append(x, z);
        return fit(std::move(d), theta_);
    }
    const int l = size();
    const Vector c = cov_vector(x, data_.inputs, theta_);
    const double q_nn =
        theta_.signal_var() + theta_.noise_std * theta_.noise_std + jitter_;
    Vector v = chol_.triangularView<Eigen::Lower>().solve(c);
    const double pivot2 = q_nn - v.squaredNorm();
    Dataset d = data_;
    d.append(x, z);
    if (pivot2 <= 1e-12 * theta_.signal_var()) {
        return fit(std::move(d), theta_);  // refit, possibly with more jitter
    }
    GpModel m;
    m.theta_ = theta_;
    m.jitter_ = jitter_;
    m.chol_ = Matrix::Zero(l + 1, l + 1);
    m.chol_.topLeftCorner(l, l) = chol_;
    m.chol_.row(l).head(l) = v.transpose();
    m.chol_(l, l) = std::sqrt(pivot2);
    m.alpha_ = m.chol_.triangularView<Eigen::Lower>().solve(d.outputs);
    m.chol_.triangularView<Eigen::Lower>().transpose().solveInPlace(m.alpha_);
    m.data_ = std::move(d);
    return m;
}

double GpModel::posterior_mean(const Vector& x) const {
    check_query(x, "GpModel::posterior_mean");
    if (data_.empty()) return 0.0;
    return cov_vector(x, data_.inputs, theta_).dot(alpha_);
}

double GpModel::posterior_var(const Vector& x) const {
    check_query(x, "GpModel::posterior_var");
    const double prior = theta_.signal_var();
    if (data_.empty()) return prior;
    const Vector c = cov_vector(x, data_.inputs, theta_);
    const Vector v = chol_.triangularView<Eigen::Lower>().solve(c);
    const double var = prior - v.squaredNorm();
    return std::min(std::max(var, 0.0), prior);
}

Vector GpModel::mean_grad(const Vector& x) const {
    check_query(x, "GpModel::mean_grad");
    if (data_.empty()) return Vector::Zero(theta_.input_dim());
    // sum_i alpha_i * dc(x, x_i)/dx = -Lambda (x * sum(w) - X' w), w = c .* alpha
    const Vector c = cov_vector(x, data_.inputs, theta_);
    const Vector w = c.cwiseProduct(alpha_);
    const Vector moment = data_.inputs.transpose() * w;
    return -theta_.inv_lengthscales.cwiseProduct(x * w.sum() - moment);
}

double log_marginal_likelihood(const Hyperparams& theta, const Dataset& data) {
    theta.validate();
    require(data.size() >= 1, "log_marginal_likelihood: need at least one point");
    require(data.dim() == theta.input_dim(),
            "log_marginal_likelihood: dimension mismatch");
    Matrix Q = cov_matrix(data.inputs, theta);
    Q.diagonal().array() += theta.noise_std * theta.noise_std;
    auto [L, jit] = jittered_cholesky(Q, theta.signal_var());
    (void)jit;
    const Vector u = L.triangularView<Eigen::Lower>().solve(data.outputs);
    const double logdet = 2.0 * L.diagonal().array().log().sum();
    const double n = static_cast<double>(data.size());
    return -0.5 * u.squaredNorm() - 0.5 * logdet -
           0.5 * n * std::log(2.0 * std::numbers::pi);
}

namespace {

/// Likelihood and gradient in log-hyperparameter space, with the
/// per-dimension squared-difference matrices cached across evaluations.
class ArdLikelihood {
public:
    ArdLikelihood(const Dataset& data, double noise_std)
        : data_(data), noise_std_(noise_std), n_(data.dim()) {
        sqdiff_.reserve(n_);
        for (int j = 0; j < n_; ++j) {
            const Vector col = data_.inputs.col(j);
            Matrix D = col.replicate(1, data_.size());
            D -= col.transpose().replicate(data_.size(), 1);
            sqdiff_.push_back(D.cwiseAbs2());
        }
    }

    int num_params() const { return n_ + 1; }

    Hyperparams to_theta(const Vector& u) const {
        Hyperparams h;
        h.signal_std = std::exp(u[0]);
        h.inv_lengthscales = u.tail(n_).array().exp().matrix();
        h.noise_std = noise_std_;
        return h;
    }

    /// Negated log-marginal likelihood and its gradient wrt u. Returns
    /// +inf value (gradient zeroed) when the factorization fails.
    double negated(const Vector& u, Vector& grad) const {
        const int l = data_.size();
        const double sf2 = std::exp(2.0 * u[0]);
        Matrix E = Matrix::Zero(l, l);
        for (int j = 0; j < n_; ++j) E += std::exp(u[1 + j]) * sqdiff_[j];
        const Matrix C = sf2 * (-0.5 * E).array().exp().matrix();
        Matrix Q = C;
        Q.diagonal().array() += noise_std_ * noise_std_;
        Matrix L;
        try {
            auto [Lo, jit] = jittered_cholesky(Q, sf2);
            (void)jit;
            L = std::move(Lo);
        } catch (const NumericalError&) {
            grad = Vector::Zero(num_params());
            return std::numeric_limits<double>::infinity();
        }
        Vector alpha = L.triangularView<Eigen::Lower>().solve(data_.outputs);
        const double quad = alpha.squaredNorm();
        const double logdet = 2.0 * L.diagonal().array().log().sum();
        L.triangularView<Eigen::Lower>().transpose().solveInPlace(alpha);
        const double lml = -0.5 * quad - 0.5 * logdet -
                           0.5 * l * std::log(2.0 * std::numbers::pi);

        // dL/dtheta_j = tr((alpha alpha' - Q^{-1}) dQ/dtheta_j) / 2
        Matrix W = alpha * alpha.transpose();
        {
            Matrix Qinv = Matrix::Identity(l, l);
            L.triangularView<Eigen::Lower>().solveInPlace(Qinv);
            L.triangularView<Eigen::Lower>().transpose().solveInPlace(Qinv);
            W -= Qinv;
        }
        grad.resize(num_params());
        grad[0] = -0.5 * 2.0 * W.cwiseProduct(C).sum();  // d(-L)/d log sf
        for (int j = 0; j < n_; ++j) {
            const Matrix dC =
                -0.5 * std::exp(u[1 + j]) * sqdiff_[j].cwiseProduct(C);
            grad[1 + j] = -0.5 * W.cwiseProduct(dC).sum();
        }
        if (!std::isfinite(lml)) {
            grad.setZero();
            return std::numeric_limits<double>::infinity();
        }
        return -lml;
    }

private:
    const Dataset& data_;
    double noise_std_;
    int n_;
    std::vector<Matrix> sqdiff_;
};

struct AscentResult {
    Vector u;
    double value;  // log-marginal likelihood (not negated)
};

/// Gradient ascent with Barzilai-Borwein steps and an Armijo backtrack,
/// iterates clamped to [-8, 8] per coordinate in log space.
AscentResult ascend(const ArdLikelihood& lik, Vector u, int max_iters,
                    double grad_tol) {
    constexpr double kClamp = 8.0;
    const auto clamp = [&](Vector v) {
        return v.cwiseMax(-kClamp).cwiseMin(kClamp).eval();
    };
    u = clamp(std::move(u));
    Vector g(lik.num_params());
    double f = lik.negated(u, g);
    if (!std::isfinite(f))
        return {u, -std::numeric_limits<double>::infinity()};
    double step = 0.1 / std::max(1.0, g.norm());
    Vector u_prev = u, g_prev = g;
    for (int it = 0; it < max_iters; ++it) {
        if (g.lpNorm<Eigen::Infinity>() < grad_tol) break;
        double t = step;
        bool improved = false;
        Vector u_try;
        double f_try = 0.0;
        Vector g_try(lik.num_params());
        for (int bk = 0; bk < 30; ++bk) {
            u_try = clamp(u - t * g);
            f_try = lik.negated(u_try, g_try);
            if (std::isfinite(f_try) &&
                f_try <= f - 1e-4 * t * g.squaredNorm()) {
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if (!improved) break;
        u_prev = u;
        g_prev = g;
        u = u_try;
        f = f_try;
        g = g_try;
        const Vector du = u - u_prev;
        const Vector dg = g - g_prev;
        const double dgg = du.dot(dg);
        step = (dgg > 0.0) ? du.squaredNorm() / dgg : 2.0 * t;
        step = std::min(std::max(step, 1e-8), 1e2);
    }
    return {u, -f};
}

Vector heuristic_start(const Dataset& data, const ArdLikelihood& lik) {
    // Signal scale from the output spread; lengthscales from the median
    // coordinate spread of the inputs.
    const int n = data.dim();
    Vector u(lik.num_params());
    const double zstd = std::sqrt(
        (data.outputs.array() - data.outputs.mean()).square().sum() /
        std::max(1, data.size() - 1));
    u[0] = std::log(std::max(zstd, 1e-3));
    for (int j = 0; j < n; ++j) {
        const double span =
            data.inputs.col(j).maxCoeff() - data.inputs.col(j).minCoeff();
        const double ell = std::max(span / 2.0, 1e-3);
        u[1 + j] = std::log(1.0 / (ell * ell));
    }
    return u;
}

}  // namespace

Hyperparams train(const Dataset& data, double noise_std, const TrainOptions& opts) {
    require(data.size() >= 2, "train: need at least two data points");
    require(noise_std >= 0.0, "train: noise_std must be nonnegative");
    require(opts.restarts >= 1, "train: restarts must be positive");

    ArdLikelihood lik(data, noise_std);
    RngEngine rng(derive_seed(opts.seed, 0x7261696eULL));

    std::vector<Vector> starts;
    if (opts.warm_start) {
        const Hyperparams& w = *opts.warm_start;
        w.validate();
        require(w.input_dim() == data.dim(), "train: warm start dimension mismatch");
        Vector u(lik.num_params());
        u[0] = std::log(w.signal_std);
        u.tail(data.dim()) = w.inv_lengthscales.array().log().matrix();
        starts.push_back(u);
    }
    starts.push_back(heuristic_start(data, lik));
    for (int r = 0; r < opts.restarts; ++r)
        starts.push_back(rng.uniform_vector(lik.num_params(), -opts.log_box,
                                            opts.log_box));

    Vector best_u;
    double best_value = -std::numeric_limits<double>::infinity();
    const auto consider = [&](const Vector& u, double value) {
        if (value > best_value) {
            best_value = value;
            best_u = u;
        }
    };
    for (const Vector& u0 : starts) {
        Vector g(lik.num_params());
        consider(u0, -lik.negated(u0, g));  // start itself counts
        const AscentResult res = ascend(lik, u0, opts.max_ascent_iters, opts.grad_tol);
        consider(res.u, res.value);
    }
    if (!std::isfinite(best_value))
        throw TrainingError("train: no start produced a finite likelihood");
    return lik.to_theta(best_u);
}

double max_posterior_std_in_ball(const GpModel& model, const Vector& center,
                                 double delta, int grid) {
    require(delta > 0.0, "max_posterior_std_in_ball: delta must be positive");
    require(grid >= 1, "max_posterior_std_in_ball: grid must be positive");
    double best = 0.0;
    for (const Vector& p : ball_grid(center, delta, grid))
        best = std::max(best, std::sqrt(model.posterior_var(p)));
    return best;
}

}  // namespace gptr
