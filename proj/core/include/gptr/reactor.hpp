#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "gptr/problems.hpp"

namespace gptr {

/// Semi-batch reactor with reactions A + B -> C, 2B -> D plus two side
/// paths consuming B (first order) and B + C. States: concentrations
/// c_A..c_D (mol/L) and volume V (L); B is fed at rate F (L/min) with inlet
/// concentration c_B_in.
///
/// The rate constants k1, k2 and the operating data below are taken from
/// the published semi-batch case study this benchmark reproduces; k3, k4
/// are the uncertain constants switched between scenarios. All values are
/// configuration, not physical ground truth.
struct ReactorParams {
    double k1 = 0.053;   // L/(mol min)
    double k2 = 0.128;   // L/(mol min)
    double k3 = 0.0;     // 1/min, scenario dependent
    double k4 = 0.0;     // L/(mol min), scenario dependent
    double cB_in = 5.0;  // mol/L
    double cA0 = 0.72;
    double cB0 = 0.05;
    double cC0 = 0.08;
    double cD0 = 0.01;
    double V0 = 1.0;     // L
    double t_f = 250.0;  // min
    double F_max = 2e-3; // L/min
    double cB_max = 0.025;
    double cD_max = 0.15;
    double penalty_weight = 100.0;
    double h = 0.25;     // integrator step, t_f/h must be integral

    void validate() const;
};

void to_json(nlohmann::json& j, const ReactorParams& p);
void from_json(const nlohmann::json& j, ReactorParams& p);

/// Measurement noise of the penalized cost: std = fraction * |cost| unless
/// an absolute level is set.
struct ReactorNoise {
    double fraction = 0.05;
    double absolute = 0.0;

    double std_at(double cost) const {
        return absolute > 0.0 ? absolute : fraction * std::abs(cost);
    }
};

void to_json(nlohmann::json& j, const ReactorNoise& n);
void from_json(const nlohmann::json& j, ReactorNoise& n);

/// Three-arc feed recipe: full feed until t_m, constant feed F until t_s,
/// then no feed.
struct ArcInput {
    double t_m = 0.0;
    double t_s = 0.0;
    double F = 0.0;

    void validate(const ReactorParams& params) const;
};

enum class Scenario { I, II };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

/// Batch-to-batch plan: Scenario I for batches 1-7, Scenario II from batch
/// 8 on. batch >= 1 required.
Scenario scenario_schedule(int batch);

/// Copy of `params` with the uncertain constants (k3, k4) set for the
/// scenario: I -> (0.01, 0.009), II -> (0.28, 0.001).
ReactorParams apply_scenario(ReactorParams params, Scenario s);

/// Feed rate at time t under the three-arc recipe.
double feed_profile(const ArcInput& pi, double t, const ReactorParams& params);

/// Nearest integration grid point to t (multiples of params.h).
double snap_to_grid(double t, const ReactorParams& params);

/// Right-hand side of the five material balances at the given feed rate.
/// Throws EvaluationError (carrying the state) if V <= 0.
Vector reactor_rhs(const Vector& state, double F, const ReactorParams& params);

/// Integrates one batch with the classical 4th-order scheme at fixed step
/// h, arc switch times snapped to the step grid and the feed held at its
/// mid-step value. Returns the terminal state (c_A, c_B, c_C, c_D, V).
/// If min_concentration is given, it receives the smallest concentration
/// seen anywhere along the trajectory.
Vector simulate_batch(const ArcInput& pi, const ReactorParams& params,
                      double* min_concentration = nullptr);

/// Full trajectory for plotting: rows (t, c_A, c_B, c_C, c_D, V, F) at
/// every grid point; F is the feed applied on the step starting at t.
Matrix simulate_trajectory(const ArcInput& pi, const ReactorParams& params);

/// Constraint violation penalty of a terminal state:
/// w * (max(0, c_B - c_B_max)^2 + max(0, c_D - c_D_max)^2).
double terminal_penalty(const Vector& terminal, const ReactorParams& params);

struct BatchOutcome {
    Vector terminal;
    double cost = 0.0;    // -c_C(t_f) V(t_f) + penalty (minimization sense)
    double penalty = 0.0;
};

/// Noiseless batch simulation and penalized cost under `params` as given.
BatchOutcome evaluate_batch(const ArcInput& pi, const ReactorParams& params);

/// Penalized cost under the scenario's rate constants; with an RNG the
/// value carries additive Gaussian noise scaled per `noise`.
double batch_objective(const ArcInput& pi, const ReactorParams& params,
                       Scenario scenario, RngEngine* rng = nullptr,
                       const ReactorNoise& noise = {});

/// The known-model cost: same recipe and parameters but with the uncertain
/// reactions absent (k3 = k4 = 0) and no noise.
double model_objective(const ArcInput& pi, ReactorParams params);

/// Decodes a normalized optimizer point x in [0,1]^3 (clamped) into a
/// recipe: t_m = x0 t_f, t_s = max(t_m, x1 t_f), F = x2 F_max.
ArcInput from_normalized(const Vector& x, const ReactorParams& params);

/// Configuration of the batch-to-batch benchmark problem.
struct ReactorProblem {
    ReactorParams params;
    ReactorNoise noise;
    std::function<Scenario(int)> schedule = scenario_schedule;
};

/// Wraps the reactor as an optimization problem over normalized [0,1]^3
/// inputs. Each plant evaluation simulates one batch under the scenario of
/// the current batch counter (counter 0, i.e. the initial design, runs as
/// batch 1); the trust-region loop advances the counter through its
/// iteration hook. The nominal model is the k3 = k4 = 0 cost, enabling
/// mismatch-mode surrogates.
ProblemSpec make_reactor_problem(const ReactorProblem& cfg,
                                 std::shared_ptr<int> batch_counter);

}  // namespace gptr
