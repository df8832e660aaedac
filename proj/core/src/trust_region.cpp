#include "gptr/trust_region.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

namespace gptr {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Seed streams carved out of the run seed.
constexpr std::uint64_t kStreamTrain = 1;
constexpr std::uint64_t kStreamSubproblem = 2;
constexpr std::uint64_t kStreamPlant = 3;

std::string format_vector(const Vector& v) {
    std::ostringstream out;
    out << "[";
    for (int i = 0; i < v.size(); ++i) {
        if (i > 0) out << ", ";
        out << format_double(v[i]);
    }
    out << "]";
    return out.str();
}

/// Non-owning view of a GP posterior mean; the loop rebinds the model every
/// iteration without copying datasets around.
class MeanRef final : public Surrogate {
public:
    explicit MeanRef(const GpModel& m) : m_(&m) {}
    int dim() const override { return m_->dim(); }
    double value(const Vector& x) const override { return m_->posterior_mean(x); }
    Vector gradient(const Vector& x) const override { return m_->mean_grad(x); }

private:
    const GpModel* m_;
};

/// Non-owning nominal-plus-correction view for mismatch mode.
class MismatchRef final : public Surrogate {
public:
    MismatchRef(const std::function<double(const Vector&)>& nominal,
                const GpModel& m, double fd_step)
        : nominal_(&nominal), m_(&m), fd_step_(fd_step) {}
    int dim() const override { return m_->dim(); }
    double value(const Vector& x) const override {
        return (*nominal_)(x) + m_->posterior_mean(x);
    }
    Vector gradient(const Vector& x) const override {
        return central_difference_gradient(*nominal_, x, fd_step_) +
               m_->mean_grad(x);
    }

private:
    const std::function<double(const Vector&)>* nominal_;
    const GpModel* m_;
    double fd_step_;
};

Dataset tail_window(const Dataset& d, int window) {
    if (window <= 0 || d.size() <= window) return d;
    Dataset t;
    t.inputs = d.inputs.bottomRows(window);
    t.outputs = d.outputs.tail(window);
    return t;
}

}  // namespace

std::string to_string(SurrogateMode mode) {
    return mode == SurrogateMode::direct ? "direct" : "mismatch";
}

SurrogateMode surrogate_mode_from_string(const std::string& s) {
    if (s == "direct") return SurrogateMode::direct;
    if (s == "mismatch") return SurrogateMode::mismatch;
    throw ArgumentError("unknown surrogate mode: " + s +
                        " (expected direct or mismatch)");
}

void TrConfig::validate() const {
    std::ostringstream bad;
    auto check = [&](bool ok, const char* msg) {
        if (!ok) bad << "\n  " << msg;
    };
    check(gamma_dec > 0.0 && gamma_dec < 1.0, "gamma_dec must lie in (0,1)");
    check(gamma_inc > 1.0, "gamma_inc must exceed 1");
    check(eta > 0.0 && eta < 1.0, "eta must lie in (0,1)");
    check(beta_dec > 0.0 && beta_dec < 1.0, "beta_dec must lie in (0,1)");
    check(!(eta > 0.0 && eta < 1.0 && beta_dec > 0.0 && beta_dec < 1.0) ||
              eta < beta_dec,
          "eta must be smaller than beta_dec");
    check(delta0 > 0.0, "delta0 must be positive");
    check(max_iters >= 1, "max_iters must be at least 1");
    check(delta_min >= 0.0, "delta_min must be nonnegative");
    check(rho_avg >= 1, "rho_avg must be at least 1");
    check(min_dist_factor >= 0.0, "min_dist_factor must be nonnegative");
    check(retrain_every >= 1, "retrain_every must be at least 1");
    check(subproblem_starts >= 1, "subproblem_starts must be at least 1");
    check(subproblem_iters >= 1, "subproblem_iters must be at least 1");
    check(train_window >= 0, "train_window must be nonnegative");
    check(nominal_fd_step > 0.0, "nominal_fd_step must be positive");
    if (!bad.str().empty())
        throw ArgumentError("invalid trust-region config:" + bad.str());
}

Vector solve_subproblem(const Surrogate& model, const Vector& center,
                        double delta, int starts, std::uint64_t seed,
                        int iters) {
    require(delta > 0.0, "subproblem radius must be positive");
    require(starts >= 1, "subproblem needs at least one start");
    require(iters >= 1, "subproblem needs at least one iteration");
    require(model.dim() == center.size(),
            "surrogate and center dimensions must agree");

    const int n = static_cast<int>(center.size());
    auto project = [delta](Vector s) {
        double norm = s.norm();
        if (norm > delta) {
            s *= delta / norm;
            while (s.norm() > delta)
                s *= 1.0 - std::numeric_limits<double>::epsilon();
        }
        return s;
    };

    // Monotone projected gradient descent with adaptive backtracking.
    auto descend = [&](Vector s) {
        s = project(std::move(s));
        double fs = model.value(center + s);
        double t_prev = 0.0;
        for (int it = 0; it < iters; ++it) {
            const Vector g = model.gradient(center + s);
            const double gn = g.norm();
            if (gn < 1e-14) break;
            double t = t_prev > 0.0 ? 2.0 * t_prev : delta / gn;
            bool moved = false;
            for (int bt = 0; bt < 50; ++bt) {
                Vector cand = project(s - t * g);
                const double fc = model.value(center + cand);
                const double pred = g.dot(s - cand); // >= 0 by convexity of the ball
                if (fc < fs && fc <= fs - 1e-4 * pred) {
                    s = std::move(cand);
                    fs = fc;
                    t_prev = t;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if (!moved) break;
        }
        return std::make_pair(fs, std::move(s));
    };

    RngEngine rng(seed);
    auto [best_value, best_step] = descend(Vector::Zero(n));
    for (int i = 1; i < starts; ++i) {
        auto [value, step] = descend(rng.ball_point(Vector::Zero(n), delta));
        const bool better = value < best_value - 1e-12;
        const bool tie = std::abs(value - best_value) <= 1e-12 &&
                         step.norm() < best_step.norm();
        if (better || tie) {
            best_value = value;
            best_step = std::move(step);
        }
    }
    return best_step;
}

bool model_decrement_test(double m_at_x, double m_at_xs, double delta,
                          double beta_dec) {
    require(delta > 0.0, "delta must be positive");
    return m_at_x - m_at_xs >= beta_dec * std::min(delta, delta * delta);
}

RhoEstimate estimate_rho(const PlantFunction& plant, double model_decrement,
                         const Vector& x, const Vector& step, int rho_avg,
                         RngEngine& rng) {
    require(rho_avg >= 1, "rho_avg must be at least 1");
    require(model_decrement > 0.0,
            "rho is only defined for a positive model decrement");
    const Vector xs = x + step;
    double f0 = 0.0;
    double fs = 0.0;
    for (int i = 0; i < rho_avg; ++i) f0 += plant(x, rng);
    for (int i = 0; i < rho_avg; ++i) fs += plant(xs, rng);
    f0 /= rho_avg;
    fs /= rho_avg;
    RhoEstimate est;
    est.rho = (f0 - fs) / model_decrement;
    est.f0 = f0;
    est.fs = fs;
    est.evals_used = 2 * rho_avg;
    return est;
}

RadiusUpdate update_state(double rho, double delta, const TrConfig& config) {
    RadiusUpdate u;
    u.accepted = rho >= config.eta;
    u.next_delta =
        u.accepted ? config.gamma_inc * delta : config.gamma_dec * delta;
    return u;
}

TrRunResult run(const ProblemSpec& problem, const TrConfig& config,
                const Dataset& initial_data, const Vector& x0,
                std::uint64_t seed, const RunHooks& hooks) {
    config.validate();
    problem.validate();
    require(x0.size() == problem.dim, "x0 dimension mismatch");
    require(!initial_data.empty(), "run needs a nonempty initial dataset");
    require(initial_data.dim() == problem.dim,
            "initial dataset dimension mismatch");
    const bool mismatch = config.surrogate_mode == SurrogateMode::mismatch;
    if (mismatch)
        require(static_cast<bool>(problem.nominal_model),
                "mismatch mode needs a nominal model");

    const double noise =
        config.gp_noise_std >= 0.0 ? config.gp_noise_std : problem.noise_std;
    const double dmin = config.effective_delta_min();

    TrRunResult result;
    result.best_plant_estimate = kNan;
    result.best_x = x0;
    result.stop_reason = "max_iters";

    // The GP's training targets: raw plant values in direct mode, residuals
    // against the nominal model in mismatch mode.
    auto target = [&](const Vector& x, double plant_value) {
        return mismatch ? plant_value - problem.nominal_model(x) : plant_value;
    };

    Dataset data;
    GpModel model;
    Hyperparams theta;
    Vector x = x0;
    double delta = config.delta0;
    std::optional<double> estimate_at_x;

    try {
        data.inputs = initial_data.inputs;
        data.outputs = initial_data.outputs;
        if (mismatch)
            for (int i = 0; i < data.size(); ++i)
                data.outputs[i] = target(data.point(i), data.outputs[i]);

        TrainOptions topts = config.train;
        topts.seed = derive_seed(seed, kStreamTrain);
        theta = train(tail_window(data, config.train_window), noise, topts);
        model = GpModel::fit(data, theta);

        MeanRef direct_view(model);
        MismatchRef mismatch_view(problem.nominal_model, model,
                                  config.nominal_fd_step);
        const Surrogate& surrogate =
            mismatch ? static_cast<const Surrogate&>(mismatch_view)
                     : static_cast<const Surrogate&>(direct_view);

        RngEngine plant_rng(derive_seed(seed, kStreamPlant));
        const std::uint64_t sub_seed = derive_seed(seed, kStreamSubproblem);
        int appended_since_retrain = 0;

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

            const Vector step = solve_subproblem(
                surrogate, x, delta, config.subproblem_starts,
                derive_seed(sub_seed, static_cast<std::uint64_t>(k)),
                config.subproblem_iters);
            const double m0 = surrogate.value(x);
            const double ms = surrogate.value(x + step);
            rec.step = step;
            rec.model_decrement = m0 - ms;

            if (!model_decrement_test(m0, ms, delta, config.beta_dec)) {
                // Not enough predicted decrease: shrink without spending
                // plant evaluations.
                rec.accepted = false;
                rec.plant_value_estimate = estimate_at_x.value_or(kNan);
                delta *= config.gamma_dec;
                result.trace.push_back(rec);
                if (hooks.on_record) hooks.on_record(result.trace.back());
                continue;
            }

            const RhoEstimate est =
                estimate_rho(problem.evaluate, rec.model_decrement, x, step,
                             config.rho_avg, plant_rng);
            result.total_plant_evals += est.evals_used;
            rec.plant_evals_used = est.evals_used;
            rec.rho = est.rho;
            rec.plant_value_estimate = est.f0;

            for (const auto& [point, value] :
                 {std::pair<Vector, double>{x, est.f0},
                  std::pair<Vector, double>{x + step, est.fs}}) {
                if (std::isnan(result.best_plant_estimate) ||
                    value < result.best_plant_estimate) {
                    result.best_plant_estimate = value;
                    result.best_x = point;
                }
                if (try_add_point(data, point, target(point, value),
                                  config.min_dist_factor * delta)) {
                    model = model.with_point(point, target(point, value));
                    ++appended_since_retrain;
                }
            }
            if (appended_since_retrain >= config.retrain_every) {
                TrainOptions warm = config.train;
                warm.seed = derive_seed(seed, kStreamTrain);
                warm.warm_start = theta;
                theta = train(tail_window(data, config.train_window), noise,
                              warm);
                model = GpModel::fit(data, theta);
                appended_since_retrain = 0;
            }

            const RadiusUpdate update = update_state(est.rho, delta, config);
            rec.accepted = update.accepted;
            if (update.accepted) {
                x = x + step;
                estimate_at_x = est.fs;
            } else {
                estimate_at_x = est.f0;
            }
            delta = update.next_delta;
            result.trace.push_back(rec);
            if (hooks.on_record) hooks.on_record(result.trace.back());
        }
    } catch (const EvaluationError& e) {
        result.stop_reason = "error";
        result.error = e.what();
    } catch (const TrainingError& e) {
        result.stop_reason = "error";
        result.error = e.what();
    } catch (const NumericalError& e) {
        result.stop_reason = "error";
        result.error = e.what();
    }

    result.final_x = x;
    result.final_delta = delta;
    result.model = std::move(model);
    result.data = std::move(data);
    return result;
}

std::string TrRunResult::summary_text() const {
    std::ostringstream out;
    out << "iterations:              " << trace.size() << "\n";
    out << "stop reason:             " << stop_reason << "\n";
    if (!error.empty()) out << "error:                   " << error << "\n";
    out << "final iterate:           " << format_vector(final_x) << "\n";
    out << "final radius:            " << format_double(final_delta) << "\n";
    out << "total plant evaluations: " << total_plant_evals << "\n";
    out << "best plant estimate:     " << format_double(best_plant_estimate)
        << "\n";
    out << "best point:              " << format_vector(best_x) << "\n";
    return out.str();
}

void write_trace_csv(const std::vector<IterationRecord>& trace,
                     const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot open " + path + " for writing");
    const int n = trace.empty() ? 0 : static_cast<int>(trace.front().x.size());
    out << "k";
    for (int i = 1; i <= n; ++i) out << ",x_" << i;
    out << ",delta";
    for (int i = 1; i <= n; ++i) out << ",step_" << i;
    out << ",model_decrement,rho,accepted,plant_evals_used,"
           "plant_value_estimate\n";
    for (const IterationRecord& r : trace) {
        out << r.k;
        for (int i = 0; i < n; ++i) out << "," << format_double(r.x[i]);
        out << "," << format_double(r.delta);
        for (int i = 0; i < n; ++i)
            out << "," << (r.step ? format_double((*r.step)[i]) : "");
        out << "," << format_double(r.model_decrement);
        out << "," << (r.rho ? format_double(*r.rho) : "");
        out << "," << (r.accepted ? 1 : 0);
        out << "," << r.plant_evals_used;
        out << "," << format_double(r.plant_value_estimate);
        out << "\n";
    }
    if (!out) throw ArgumentError("failed while writing " + path);
}

}  // namespace gptr
