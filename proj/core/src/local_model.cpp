#include "gptr/local_model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <utility>

namespace gptr {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

int quadratic_coefficients(int n) { return 1 + n + n * (n + 1) / 2; }

/// Scaled feature row [1, u, {u_i u_j : i <= j}] (quadratic) or [1, u].
Vector features(LocalKind kind, const Vector& u) {
    const int n = static_cast<int>(u.size());
    const int p = kind == LocalKind::linear ? 1 + n : quadratic_coefficients(n);
    Vector phi(p);
    phi[0] = 1.0;
    phi.segment(1, n) = u;
    if (kind == LocalKind::quadratic) {
        int idx = 1 + n;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) phi[idx++] = u[i] * u[j];
    }
    return phi;
}

}  // namespace

std::string to_string(LocalKind kind) {
    return kind == LocalKind::linear ? "linear" : "quadratic";
}

LocalKind local_kind_from_string(const std::string& s) {
    if (s == "linear") return LocalKind::linear;
    if (s == "quadratic") return LocalKind::quadratic;
    throw ArgumentError("unknown local model kind: " + s +
                        " (expected linear or quadratic)");
}

LocalModel::LocalModel(LocalKind kind, Vector center, double radius,
                       double intercept, Vector gradient_coeffs,
                       Matrix hessian)
    : kind_(kind),
      center_(std::move(center)),
      radius_(radius),
      intercept_(intercept),
      gradient_(std::move(gradient_coeffs)),
      hessian_(std::move(hessian)) {
    const auto n = center_.size();
    require(n >= 1, "local model needs dimension at least 1");
    require(radius_ > 0.0, "local model radius must be positive");
    require(gradient_.size() == n, "gradient coefficient size mismatch");
    if (kind_ == LocalKind::linear)
        require(hessian_.size() == 0, "linear model must not carry a Hessian");
    else
        require(hessian_.rows() == n && hessian_.cols() == n,
                "quadratic model Hessian must be square of the input size");
}

int LocalModel::coefficient_count() const {
    const int n = dim();
    return kind_ == LocalKind::linear ? 1 + n : quadratic_coefficients(n);
}

double LocalModel::value(const Vector& x) const {
    require(x.size() == center_.size(), "local model query dimension mismatch");
    const Vector s = x - center_;
    double v = intercept_ + gradient_.dot(s);
    if (kind_ == LocalKind::quadratic) v += 0.5 * s.dot(hessian_ * s);
    return v;
}

Vector LocalModel::gradient(const Vector& x) const {
    require(x.size() == center_.size(), "local model query dimension mismatch");
    if (kind_ == LocalKind::linear) return gradient_;
    return gradient_ + hessian_ * (x - center_);
}

LocalBuild build_local(LocalKind kind, const PlantFunction& plant,
                       const Vector& center, double delta, RngEngine& rng,
                       double max_cond, int redraws) {
    const int n = static_cast<int>(center.size());
    require(n >= 1, "local model needs dimension at least 1");
    require(delta > 0.0, "local model radius must be positive");
    require(static_cast<bool>(plant), "plant must be callable");
    require(max_cond > 0.0, "max_cond must be positive");
    require(redraws >= 1, "at least one design draw is needed");

    const int p = kind == LocalKind::linear ? 1 + n
                                            : quadratic_coefficients(n);
    const int count =
        kind == LocalKind::linear
            ? 1 + n
            : static_cast<int>(std::ceil(1.2 * p));

    // Fixed part of the design: the center and the scaled coordinate
    // directions. Only the remaining rows are random and redrawn on
    // ill-conditioning; the plant is sampled only once a design is accepted.
    for (int attempt = 0; attempt < redraws; ++attempt) {
        Matrix design(count, n);
        design.row(0) = center.transpose();
        for (int i = 0; i < n; ++i) {
            design.row(1 + i) = center.transpose();
            design(1 + i, i) += delta;
        }
        for (int r = 1 + n; r < count; ++r)
            design.row(r) = rng.ball_point(center, delta).transpose();

        Matrix A(count, p);
        for (int r = 0; r < count; ++r)
            A.row(r) =
                features(kind, (design.row(r).transpose() - center) / delta)
                    .transpose();
        const Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU |
                                                  Eigen::ComputeThinV);
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        if (!(smin > 0.0) || smax / smin > max_cond) continue;

        Vector z(count);
        for (int r = 0; r < count; ++r)
            z[r] = plant(design.row(r).transpose(), rng);
        const Vector b = svd.solve(z);

        const double intercept = b[0];
        const Vector grad = b.segment(1, n) / delta;
        Matrix hessian(0, 0);
        if (kind == LocalKind::quadratic) {
            hessian = Matrix::Zero(n, n);
            int idx = 1 + n;
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    const double c = b[idx++] / (delta * delta);
                    if (i == j) {
                        hessian(i, i) = 2.0 * c;
                    } else {
                        hessian(i, j) = c;
                        hessian(j, i) = c;
                    }
                }
        }
        LocalBuild out{LocalModel(kind, center, delta, intercept, grad,
                                  std::move(hessian)),
                       count, std::move(design), std::move(z)};
        return out;
    }
    throw PoisednessError("local design stayed ill-conditioned after " +
                          std::to_string(redraws) + " draws");
}

TrRunResult run_local_tr(const ProblemSpec& problem, const TrConfig& config,
                         LocalKind kind, const Vector& x0, std::uint64_t seed,
                         const RunHooks& hooks) {
    config.validate();
    problem.validate();
    require(x0.size() == problem.dim, "x0 dimension mismatch");

    const double dmin = config.effective_delta_min();
    TrRunResult result;
    result.best_plant_estimate = kNan;
    result.best_x = x0;
    result.stop_reason = "max_iters";

    Vector x = x0;
    double delta = config.delta0;
    Dataset data;

    auto note_sample = [&](const Vector& point, double value) {
        data.append(point, value);
        if (std::isnan(result.best_plant_estimate) ||
            value < result.best_plant_estimate) {
            result.best_plant_estimate = value;
            result.best_x = point;
        }
    };

    try {
        RngEngine plant_rng(derive_seed(seed, 3));
        const std::uint64_t sub_seed = derive_seed(seed, 2);

        for (int k = 0; k < config.max_iters; ++k) {
            if (delta < dmin) {
                result.stop_reason = "delta_min";
                break;
            }
            if (hooks.on_iteration_start) hooks.on_iteration_start(k);

            IterationRecord rec;
            rec.k = k;
            rec.x = x;
            rec.delta = delta;

            LocalBuild built =
                build_local(kind, problem.evaluate, x, delta, plant_rng);
            result.total_plant_evals += built.plant_evals_used;
            rec.plant_evals_used = built.plant_evals_used;
            for (int r = 0; r < built.design.rows(); ++r)
                note_sample(built.design.row(r).transpose(), built.values[r]);
            rec.plant_value_estimate = built.values[0];

            const Vector step = solve_subproblem(
                built.model, x, delta, config.subproblem_starts,
                derive_seed(sub_seed, static_cast<std::uint64_t>(k)),
                config.subproblem_iters);
            const double m0 = built.model.value(x);
            const double ms = built.model.value(x + step);
            rec.step = step;
            rec.model_decrement = m0 - ms;

            if (!model_decrement_test(m0, ms, delta, config.beta_dec)) {
                rec.accepted = false;
                delta *= config.gamma_dec;
                result.trace.push_back(rec);
                if (hooks.on_record) hooks.on_record(result.trace.back());
                continue;
            }

            const RhoEstimate est =
                estimate_rho(problem.evaluate, rec.model_decrement, x, step,
                             config.rho_avg, plant_rng);
            result.total_plant_evals += est.evals_used;
            rec.plant_evals_used += est.evals_used;
            rec.rho = est.rho;
            rec.plant_value_estimate = est.f0;
            note_sample(x, est.f0);
            note_sample(x + step, est.fs);

            const RadiusUpdate update = update_state(est.rho, delta, config);
            rec.accepted = update.accepted;
            if (update.accepted) x = x + step;
            delta = update.next_delta;
            result.trace.push_back(rec);
            if (hooks.on_record) hooks.on_record(result.trace.back());
        }
    } catch (const EvaluationError& e) {
        result.stop_reason = "error";
        result.error = e.what();
    } catch (const PoisednessError& e) {
        result.stop_reason = "error";
        result.error = e.what();
    } catch (const NumericalError& e) {
        result.stop_reason = "error";
        result.error = e.what();
    }

    result.final_x = x;
    result.final_delta = delta;
    result.data = std::move(data);
    return result;
}

}  // namespace gptr
