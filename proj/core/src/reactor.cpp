#include "gptr/reactor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gptr {

void ReactorParams::validate() const {
    std::ostringstream bad;
    auto check = [&](bool ok, const char* msg) {
        if (!ok) bad << "\n  " << msg;
    };
    check(k1 >= 0.0 && k2 >= 0.0 && k3 >= 0.0 && k4 >= 0.0,
          "rate constants must be nonnegative");
    check(cB_in >= 0.0, "cB_in must be nonnegative");
    check(cA0 >= 0.0 && cB0 >= 0.0 && cC0 >= 0.0 && cD0 >= 0.0,
          "initial concentrations must be nonnegative");
    check(V0 > 0.0, "V0 must be positive");
    check(t_f > 0.0, "t_f must be positive");
    check(F_max >= 0.0, "F_max must be nonnegative");
    check(cB_max >= 0.0 && cD_max >= 0.0,
          "constraint bounds must be nonnegative");
    check(penalty_weight >= 0.0, "penalty_weight must be nonnegative");
    check(h > 0.0, "integrator step must be positive");
    if (h > 0.0 && t_f > 0.0)
        check(std::abs(t_f / h - std::round(t_f / h)) < 1e-9,
              "t_f must be an integer multiple of the step h");
    if (!bad.str().empty())
        throw ArgumentError("invalid reactor parameters:" + bad.str());
}

void to_json(nlohmann::json& j, const ReactorParams& p) {
    j = nlohmann::json{
        {"k1", p.k1},           {"k2", p.k2},
        {"k3", p.k3},           {"k4", p.k4},
        {"cB_in", p.cB_in},     {"cA0", p.cA0},
        {"cB0", p.cB0},         {"cC0", p.cC0},
        {"cD0", p.cD0},         {"V0", p.V0},
        {"t_f", p.t_f},         {"F_max", p.F_max},
        {"cB_max", p.cB_max},   {"cD_max", p.cD_max},
        {"penalty_weight", p.penalty_weight},
        {"h", p.h}};
}

void from_json(const nlohmann::json& j, ReactorParams& p) {
    p = ReactorParams{};
    auto get = [&](const char* key, double& into) {
        if (j.contains(key)) j.at(key).get_to(into);
    };
    get("k1", p.k1);
    get("k2", p.k2);
    get("k3", p.k3);
    get("k4", p.k4);
    get("cB_in", p.cB_in);
    get("cA0", p.cA0);
    get("cB0", p.cB0);
    get("cC0", p.cC0);
    get("cD0", p.cD0);
    get("V0", p.V0);
    get("t_f", p.t_f);
    get("F_max", p.F_max);
    get("cB_max", p.cB_max);
    get("cD_max", p.cD_max);
    get("penalty_weight", p.penalty_weight);
    get("h", p.h);
}

void to_json(nlohmann::json& j, const ReactorNoise& n) {
    j = nlohmann::json{{"fraction", n.fraction}, {"absolute", n.absolute}};
}

void from_json(const nlohmann::json& j, ReactorNoise& n) {
    n = ReactorNoise{};
    if (j.contains("fraction")) j.at("fraction").get_to(n.fraction);
    if (j.contains("absolute")) j.at("absolute").get_to(n.absolute);
}

void ArcInput::validate(const ReactorParams& params) const {
    require(t_m >= 0.0 && t_m <= t_s && t_s <= params.t_f,
            "switch times must satisfy 0 <= t_m <= t_s <= t_f");
    require(F >= 0.0 && F <= params.F_max,
            "arc-2 feed must lie in [0, F_max]");
}

std::string to_string(Scenario s) { return s == Scenario::I ? "I" : "II"; }

Scenario scenario_from_string(const std::string& s) {
    if (s == "I") return Scenario::I;
    if (s == "II") return Scenario::II;
    throw ArgumentError("unknown scenario: " + s + " (expected I or II)");
}

Scenario scenario_schedule(int batch) {
    require(batch >= 1, "batch numbering starts at 1");
    return batch <= 7 ? Scenario::I : Scenario::II;
}

ReactorParams apply_scenario(ReactorParams params, Scenario s) {
    if (s == Scenario::I) {
        params.k3 = 0.01;
        params.k4 = 0.009;
    } else {
        params.k3 = 0.28;
        params.k4 = 0.001;
    }
    return params;
}

double feed_profile(const ArcInput& pi, double t, const ReactorParams& params) {
    pi.validate(params);
    require(t >= 0.0 && t <= params.t_f, "time outside the batch horizon");
    if (t < pi.t_m) return params.F_max;
    if (t < pi.t_s) return pi.F;
    return 0.0;
}

double snap_to_grid(double t, const ReactorParams& params) {
    const double snapped = std::round(t / params.h) * params.h;
    return std::clamp(snapped, 0.0, params.t_f);
}

Vector reactor_rhs(const Vector& state, double F, const ReactorParams& params) {
    require(state.size() == 5, "reactor state must have 5 components");
    const double cA = state[0];
    const double cB = state[1];
    const double cC = state[2];
    const double cD = state[3];
    const double V = state[4];
    if (!(V > 0.0))
        throw EvaluationError("reactor volume must stay positive", state);
    const double dilution = F / V;
    Vector d(5);
    d[0] = -params.k1 * cA * cB - dilution * cA;
    d[1] = -params.k1 * cA * cB - 2.0 * params.k2 * cB * cB - params.k3 * cB -
           params.k4 * cB * cC + dilution * (params.cB_in - cB);
    d[2] = params.k1 * cA * cB - params.k4 * cB * cC - dilution * cC;
    d[3] = params.k2 * cB * cB - dilution * cD;
    d[4] = F;
    return d;
}

namespace {

Vector initial_state(const ReactorParams& p) {
    Vector s(5);
    s << p.cA0, p.cB0, p.cC0, p.cD0, p.V0;
    return s;
}

ArcInput snapped(const ArcInput& pi, const ReactorParams& params) {
    ArcInput out = pi;
    out.t_m = snap_to_grid(pi.t_m, params);
    out.t_s = snap_to_grid(pi.t_s, params);
    return out;
}

Vector rk4_step(const Vector& state, double F, double h,
                const ReactorParams& params) {
    const Vector k1 = reactor_rhs(state, F, params);
    const Vector k2 = reactor_rhs(state + 0.5 * h * k1, F, params);
    const Vector k3 = reactor_rhs(state + 0.5 * h * k2, F, params);
    const Vector k4 = reactor_rhs(state + h * k3, F, params);
    return state + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Vector simulate_batch(const ArcInput& pi, const ReactorParams& params,
                      double* min_concentration) {
    params.validate();
    pi.validate(params);
    const ArcInput arcs = snapped(pi, params);
    const int steps = static_cast<int>(std::round(params.t_f / params.h));
    Vector state = initial_state(params);
    double min_conc = state.head(4).minCoeff();
    for (int i = 0; i < steps; ++i) {
        const double t_mid = (i + 0.5) * params.h;
        const double F = feed_profile(arcs, t_mid, params);
        state = rk4_step(state, F, params.h, params);
        min_conc = std::min(min_conc, state.head(4).minCoeff());
    }
    if (min_concentration) *min_concentration = min_conc;
    return state;
}

Matrix simulate_trajectory(const ArcInput& pi, const ReactorParams& params) {
    params.validate();
    pi.validate(params);
    const ArcInput arcs = snapped(pi, params);
    const int steps = static_cast<int>(std::round(params.t_f / params.h));
    Matrix out(steps + 1, 7);
    Vector state = initial_state(params);
    for (int i = 0; i <= steps; ++i) {
        const double t = i * params.h;
        const double F = i < steps ? feed_profile(arcs, t + 0.5 * params.h, params)
                                   : feed_profile(arcs, params.t_f, params);
        out(i, 0) = t;
        out.row(i).segment(1, 5) = state.transpose();
        out(i, 6) = F;
        if (i < steps) state = rk4_step(state, F, params.h, params);
    }
    return out;
}

double terminal_penalty(const Vector& terminal, const ReactorParams& params) {
    require(terminal.size() == 5, "terminal state must have 5 components");
    const double over_b = std::max(0.0, terminal[1] - params.cB_max);
    const double over_d = std::max(0.0, terminal[3] - params.cD_max);
    return params.penalty_weight * (over_b * over_b + over_d * over_d);
}

BatchOutcome evaluate_batch(const ArcInput& pi, const ReactorParams& params) {
    BatchOutcome out;
    out.terminal = simulate_batch(pi, params);
    out.penalty = terminal_penalty(out.terminal, params);
    out.cost = -out.terminal[2] * out.terminal[4] + out.penalty;
    return out;
}

double batch_objective(const ArcInput& pi, const ReactorParams& params,
                       Scenario scenario, RngEngine* rng,
                       const ReactorNoise& noise) {
    const BatchOutcome outcome =
        evaluate_batch(pi, apply_scenario(params, scenario));
    double cost = outcome.cost;
    if (rng) {
        const double std = noise.std_at(cost);
        if (std > 0.0) cost += rng->normal(0.0, std);
    }
    return cost;
}

double model_objective(const ArcInput& pi, ReactorParams params) {
    params.k3 = 0.0;
    params.k4 = 0.0;
    return evaluate_batch(pi, params).cost;
}

ArcInput from_normalized(const Vector& x, const ReactorParams& params) {
    require(x.size() == 3, "normalized reactor input must have 3 components");
    auto unit = [](double v) { return std::clamp(v, 0.0, 1.0); };
    ArcInput pi;
    pi.t_m = unit(x[0]) * params.t_f;
    pi.t_s = std::max(pi.t_m, unit(x[1]) * params.t_f);
    pi.F = unit(x[2]) * params.F_max;
    return pi;
}

ProblemSpec make_reactor_problem(const ReactorProblem& cfg,
                                 std::shared_ptr<int> batch_counter) {
    cfg.params.validate();
    require(static_cast<bool>(cfg.schedule), "scenario schedule must be set");
    require(static_cast<bool>(batch_counter), "batch counter must be set");

    ProblemSpec p;
    p.name = "reactor";
    p.dim = 3;
    p.noise_std = cfg.noise.absolute;
    p.evaluate = [cfg, batch_counter](const Vector& x, RngEngine& rng) {
        const Scenario s = cfg.schedule(std::max(1, *batch_counter));
        return batch_objective(from_normalized(x, cfg.params), cfg.params, s,
                               &rng, cfg.noise);
    };
    p.nominal_model = [params = cfg.params](const Vector& x) {
        return model_objective(from_normalized(x, params), params);
    };
    return p;
}

}  // namespace gptr
