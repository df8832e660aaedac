#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gptr/gp.hpp"
#include "gptr/problems.hpp"
#include "gptr/surrogate.hpp"

namespace gptr {

enum class SurrogateMode { direct, mismatch };

std::string to_string(SurrogateMode mode);
SurrogateMode surrogate_mode_from_string(const std::string& s);

/// Knobs of the trust-region loop. The radius factors, eta, and delta0
/// default to the reactor-study settings; beta_dec is the model-decrement
/// constant (must exceed eta). delta_min = 0 selects the automatic stopping
/// radius 1e-6 * delta0.
struct TrConfig {
    double gamma_inc = 3.0;
    double gamma_dec = 0.9;
    double eta = 0.5;
    double beta_dec = 0.6;
    double delta0 = 3.5;
    int max_iters = 100;
    double delta_min = 0.0;
    int rho_avg = 1;               // plant evaluations averaged per estimate
    double min_dist_factor = 0.01; // dedup distance = factor * delta_k
    SurrogateMode surrogate_mode = SurrogateMode::direct;
    int retrain_every = 1;         // hyperparameter retrain cadence, in appended points

    // Solver and training knobs (not part of the algorithm statement).
    int subproblem_starts = 8;
    int subproblem_iters = 200;
    TrainOptions train;
    int train_window = 0;           // hyperparameter-training window; 0 = all points
    double gp_noise_std = -1.0;     // GP noise level; negative = problem.noise_std
    double nominal_fd_step = 1e-6;  // mismatch mode: nominal-gradient FD step

    double effective_delta_min() const {
        return delta_min > 0.0 ? delta_min : 1e-6 * delta0;
    }
    /// Throws ArgumentError naming every violated field.
    void validate() const;
};

/// One row of the run trace. `step` is absent only if the iteration did not
/// reach the subproblem; `rho` is present exactly when the model-decrement
/// test passed (and plant evaluations were spent). plant_value_estimate is
/// the latest plant estimate at this iteration's iterate (NaN before the
/// first plant evaluation).
struct IterationRecord {
    int k = 0;
    Vector x;
    double delta = 0.0;
    std::optional<Vector> step;
    double model_decrement = 0.0;
    std::optional<double> rho;
    bool accepted = false;
    int plant_evals_used = 0;
    double plant_value_estimate = 0.0;
};

/// Outcome of a run. `error` is empty on clean termination; on evaluation or
/// training failure it carries the message and `trace` holds everything up
/// to the failing iteration. In mismatch mode `data` stores residuals
/// (plant minus nominal model), matching what the GP was trained on.
struct TrRunResult {
    std::vector<IterationRecord> trace;
    Vector final_x;
    double final_delta = 0.0;
    GpModel model;
    Dataset data;
    int total_plant_evals = 0;
    double best_plant_estimate = 0.0;
    Vector best_x;
    std::string stop_reason; // "max_iters" | "delta_min" | "error"
    std::string error;

    std::string summary_text() const;
};

/// Optional callbacks; on_iteration_start fires before the model is used
/// (the reactor experiment advances its batch counter here).
struct RunHooks {
    std::function<void(int)> on_iteration_start;
    std::function<void(const IterationRecord&)> on_record;
};

/// Approximate argmin of the surrogate over the ball B(center; delta):
/// multi-start projected gradient descent with backtracking, started from
/// the center and from seeded uniform ball samples. Never ascends (the
/// center start bounds the result) and returns a step with norm <= delta.
/// Starts that tie within 1e-12 resolve to the smaller-norm step.
Vector solve_subproblem(const Surrogate& model, const Vector& center,
                        double delta, int starts, std::uint64_t seed,
                        int iters = 200);

/// Decrement gate: proceed to plant evaluation only if the surrogate
/// predicts a decrease of at least beta_dec * min(delta, delta^2).
bool model_decrement_test(double m_at_x, double m_at_xs, double delta,
                          double beta_dec);

struct RhoEstimate {
    double rho = 0.0;
    double f0 = 0.0; // plant estimate at x (mean of rho_avg draws)
    double fs = 0.0; // plant estimate at x + step
    int evals_used = 0;
};

/// Ratio of measured to predicted decrease. F0 and Fs are sample means of
/// rho_avg noisy plant evaluations each, drawn in deterministic order.
RhoEstimate estimate_rho(const PlantFunction& plant, double model_decrement,
                         const Vector& x, const Vector& step, int rho_avg,
                         RngEngine& rng);

struct RadiusUpdate {
    bool accepted = false;
    double next_delta = 0.0;
};

/// Acceptance rule: rho >= eta moves the iterate and inflates the radius by
/// gamma_inc, otherwise the iterate stays and the radius deflates by
/// gamma_dec.
RadiusUpdate update_state(double rho, double delta, const TrConfig& config);

/// Runs the full loop from x0 until max_iters or the radius falls below the
/// stopping threshold. initial_data must hold raw plant measurements; in
/// mismatch mode the nominal-model value is subtracted internally before GP
/// training. Deterministic given (problem, config, seed).
TrRunResult run(const ProblemSpec& problem, const TrConfig& config,
                const Dataset& initial_data, const Vector& x0,
                std::uint64_t seed, const RunHooks& hooks = {});

/// Writes the trace as CSV: one row per IterationRecord, full precision.
void write_trace_csv(const std::vector<IterationRecord>& trace,
                     const std::string& path);

}  // namespace gptr
