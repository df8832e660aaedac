#include "gptr/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "gptr/direct_search.hpp"

namespace gptr {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Seed streams of one experiment.
constexpr std::uint64_t kStreamModelOpt = 100;
constexpr std::uint64_t kStreamInit = 101;
constexpr std::uint64_t kStreamRun = 102;

json vec_json(const Vector& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

Vector vec_from_json(const json& j) {
    const auto values = j.get<std::vector<double>>();
    Vector v(static_cast<int>(values.size()));
    for (int i = 0; i < v.size(); ++i) v[i] = values[i];
    return v;
}

json train_to_json(const TrainOptions& t) {
    return json{{"restarts", t.restarts},
                {"log_box", t.log_box},
                {"max_ascent_iters", t.max_ascent_iters},
                {"grad_tol", t.grad_tol}};
}

void train_from_json(const json& j, TrainOptions& t) {
    if (j.contains("restarts")) j.at("restarts").get_to(t.restarts);
    if (j.contains("log_box")) j.at("log_box").get_to(t.log_box);
    if (j.contains("max_ascent_iters"))
        j.at("max_ascent_iters").get_to(t.max_ascent_iters);
    if (j.contains("grad_tol")) j.at("grad_tol").get_to(t.grad_tol);
}

json tr_to_json(const TrConfig& c) {
    return json{{"gamma_inc", c.gamma_inc},
                {"gamma_dec", c.gamma_dec},
                {"eta", c.eta},
                {"beta_dec", c.beta_dec},
                {"delta0", c.delta0},
                {"max_iters", c.max_iters},
                {"delta_min", c.delta_min},
                {"rho_avg", c.rho_avg},
                {"min_dist_factor", c.min_dist_factor},
                {"surrogate_mode", to_string(c.surrogate_mode)},
                {"retrain_every", c.retrain_every},
                {"subproblem_starts", c.subproblem_starts},
                {"subproblem_iters", c.subproblem_iters},
                {"train", train_to_json(c.train)},
                {"train_window", c.train_window},
                {"gp_noise_std", c.gp_noise_std},
                {"nominal_fd_step", c.nominal_fd_step}};
}

void tr_from_json(const json& j, TrConfig& c) {
    auto get = [&](const char* key, auto& into) {
        if (j.contains(key)) j.at(key).get_to(into);
    };
    get("gamma_inc", c.gamma_inc);
    get("gamma_dec", c.gamma_dec);
    get("eta", c.eta);
    get("beta_dec", c.beta_dec);
    get("delta0", c.delta0);
    get("max_iters", c.max_iters);
    get("delta_min", c.delta_min);
    get("rho_avg", c.rho_avg);
    get("min_dist_factor", c.min_dist_factor);
    if (j.contains("surrogate_mode"))
        c.surrogate_mode =
            surrogate_mode_from_string(j.at("surrogate_mode").get<std::string>());
    get("retrain_every", c.retrain_every);
    get("subproblem_starts", c.subproblem_starts);
    get("subproblem_iters", c.subproblem_iters);
    if (j.contains("train")) train_from_json(j.at("train"), c.train);
    get("train_window", c.train_window);
    get("gp_noise_std", c.gp_noise_std);
    get("nominal_fd_step", c.nominal_fd_step);
}

struct ProblemSetup {
    ProblemSpec problem;
    std::shared_ptr<int> batch_counter;
    Vector design_center;
    Vector model_optimum;       // reactor only
    double model_opt_cost = 0.0; // nominal cost at the model optimum
};

ProblemSetup make_setup(const ExperimentConfig& config) {
    ProblemSetup s;
    s.batch_counter = std::make_shared<int>(0);
    if (config.is_reactor()) {
        ReactorProblem rp;
        rp.params = config.reactor;
        rp.noise = config.reactor_noise;
        s.problem = make_reactor_problem(rp, s.batch_counter);
        DirectSearchOptions opts;
        opts.seed = derive_seed(config.seed, kStreamModelOpt);
        const DirectSearchResult opt = direct_search(
            s.problem.nominal_model, Vector::Zero(3), Vector::Ones(3), opts);
        s.model_optimum = opt.x;
        s.model_opt_cost = opt.value;
        s.design_center = config.init.center.value_or(s.model_optimum);
    } else {
        s.problem = problem_by_name(config.problem, config.problem_noise_std);
        const Vector start = config.x0.value_or(s.problem.default_start);
        s.design_center = config.init.center.value_or(start);
    }
    return s;
}

Dataset sample_design(const ExperimentConfig& config, const ProblemSetup& s) {
    const int n = s.problem.dim;
    const double half_width =
        config.init.box_fraction *
        std::max(1.0, s.design_center.cwiseAbs().maxCoeff());
    RngEngine rng(derive_seed(config.seed, kStreamInit));
    Dataset d;
    for (int i = 0; i < config.init.count; ++i) {
        Vector x = s.design_center + rng.uniform_vector(n, -half_width,
                                                        half_width);
        if (config.is_reactor())
            x = x.cwiseMax(Vector::Zero(n)).cwiseMin(Vector::Ones(n));
        d.append(x, s.problem.evaluate(x, rng));
    }
    return d;
}

void write_text_file(const std::string& path, const std::string& content,
                     std::vector<std::string>& files) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot open " + path + " for writing");
    out << content;
    if (!out) throw ArgumentError("failed while writing " + path);
    files.push_back(path);
}

void write_json_file(const std::string& path, const json& j,
                     std::vector<std::string>& files) {
    write_text_file(path, j.dump(2) + "\n", files);
}

std::string batches_csv(const std::vector<ReactorBatchRow>& rows) {
    std::ostringstream out;
    out << "batch,scenario,x_1,x_2,x_3,t_m,t_s,F,measured,cost_noiseless,"
           "cost_model_input,cB,cD,penalty,accepted\n";
    for (const ReactorBatchRow& r : rows) {
        out << r.batch << "," << to_string(r.scenario);
        for (int i = 0; i < 3; ++i) out << "," << format_double(r.applied[i]);
        out << "," << format_double(r.recipe.t_m) << ","
            << format_double(r.recipe.t_s) << "," << format_double(r.recipe.F)
            << "," << format_double(r.measured) << ","
            << format_double(r.cost_noiseless) << ","
            << format_double(r.cost_model_input) << "," << format_double(r.cB)
            << "," << format_double(r.cD) << "," << format_double(r.penalty)
            << "," << (r.accepted ? 1 : 0) << "\n";
    }
    return out.str();
}

std::string profiles_csv(const ExperimentResult& result,
                         const ReactorParams& params) {
    std::ostringstream out;
    out << "label,t,F\n";
    auto emit = [&](const std::string& label, const Vector& x) {
        const Matrix traj =
            simulate_trajectory(from_normalized(x, params), params);
        for (int i = 0; i < traj.rows(); ++i)
            out << label << "," << format_double(traj(i, 0)) << ","
                << format_double(traj(i, 6)) << "\n";
    };
    emit("model", result.model_optimum);
    std::set<int> batches;
    const int last = static_cast<int>(result.batches.size());
    for (const int b : {1, 7, 8, 12, last})
        if (b >= 1 && b <= last) batches.insert(b);
    for (const int b : batches)
        emit("batch_" + std::to_string(b), result.batches[b - 1].applied);
    return out.str();
}

}  // namespace

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::gp: return "gp";
        case RunMode::linear: return "linear";
        case RunMode::quadratic: return "quadratic";
    }
    throw ArgumentError("invalid run mode");
}

RunMode run_mode_from_string(const std::string& s) {
    if (s == "gp") return RunMode::gp;
    if (s == "linear") return RunMode::linear;
    if (s == "quadratic") return RunMode::quadratic;
    throw ArgumentError("unknown mode: " + s +
                        " (expected gp, linear, or quadratic)");
}

void ExperimentConfig::validate() const {
    std::vector<std::string> bad;
    int dim = -1;
    if (is_reactor()) {
        dim = 3;
        try {
            reactor.validate();
        } catch (const ArgumentError& e) {
            bad.push_back(e.what());
        }
        if (reactor_noise.fraction < 0.0 || reactor_noise.absolute < 0.0)
            bad.push_back("reactor_noise: levels must be nonnegative");
    } else {
        try {
            dim = problem_by_name(problem, 0.0).dim;
        } catch (const ArgumentError&) {
            bad.push_back("problem: unknown name \"" + problem + "\"");
        }
        if (problem_noise_std < 0.0)
            bad.push_back("problem.noise_std: must be nonnegative");
    }
    try {
        tr.validate();
    } catch (const ArgumentError& e) {
        bad.push_back(e.what());
    }
    try {
        constants.validate();
    } catch (const ArgumentError& e) {
        bad.push_back(e.what());
    }
    if (init.count < 1) bad.push_back("init.count: must be at least 1");
    if (!(init.box_fraction > 0.0))
        bad.push_back("init.box_fraction: must be positive");
    if (dim > 0 && init.center && init.center->size() != dim)
        bad.push_back("init.center: dimension mismatch");
    if (dim > 0 && x0 && x0->size() != dim)
        bad.push_back("x0: dimension mismatch");
    if (!seed_set)
        bad.push_back("seed: must be set explicitly (no wall-clock default)");
    if (output_dir.empty()) bad.push_back("output_dir: must not be empty");
    if (!bad.empty()) {
        std::ostringstream msg;
        msg << "invalid experiment config:";
        for (const std::string& b : bad) msg << "\n  " << b;
        throw ArgumentError(msg.str());
    }
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["problem"] = json{{"name", c.problem},
                        {"noise_std", c.problem_noise_std},
                        {"reactor", c.reactor},
                        {"reactor_noise", c.reactor_noise}};
    j["mode"] = to_string(c.mode);
    j["trust_region"] = tr_to_json(c.tr);
    j["constants"] = c.constants;
    j["init"] = json{{"count", c.init.count},
                     {"box_fraction", c.init.box_fraction},
                     {"center", c.init.center ? json(vec_json(*c.init.center))
                                              : json(nullptr)}};
    j["x0"] = c.x0 ? json(vec_json(*c.x0)) : json(nullptr);
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    if (j.contains("problem")) {
        const json& p = j.at("problem");
        if (p.contains("name")) p.at("name").get_to(c.problem);
        if (p.contains("noise_std")) p.at("noise_std").get_to(c.problem_noise_std);
        if (p.contains("reactor")) p.at("reactor").get_to(c.reactor);
        if (p.contains("reactor_noise"))
            p.at("reactor_noise").get_to(c.reactor_noise);
    }
    if (j.contains("mode"))
        c.mode = run_mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("trust_region")) tr_from_json(j.at("trust_region"), c.tr);
    if (j.contains("constants")) j.at("constants").get_to(c.constants);
    if (j.contains("init")) {
        const json& in = j.at("init");
        if (in.contains("count")) in.at("count").get_to(c.init.count);
        if (in.contains("box_fraction"))
            in.at("box_fraction").get_to(c.init.box_fraction);
        if (in.contains("center") && !in.at("center").is_null())
            c.init.center = vec_from_json(in.at("center"));
    }
    if (j.contains("x0") && !j.at("x0").is_null())
        c.x0 = vec_from_json(j.at("x0"));
    if (j.contains("seed")) {
        j.at("seed").get_to(c.seed);
        c.seed_set = true;
    }
    if (j.contains("output_dir")) j.at("output_dir").get_to(c.output_dir);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ArgumentError("config " + path + " is not valid JSON: " +
                            e.what());
    }
    return config_from_json(j);
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string dump = config_to_json(config).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char ch : dump) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return std::string(buf);
}

Dataset build_initial_design(const ExperimentConfig& config) {
    config.validate();
    const ProblemSetup setup = make_setup(config);
    return sample_design(config, setup);
}

// Stock batch-to-batch recipe study: 22 batches, plant behaviour switches at
// batch 8. The trust region starts small (inputs are normalized to [0,1])
// and the GP models the plant cost directly; the nominal model predicts a
// large constraint penalty exactly where the switched plant's optimum lies,
// so adding it as a prior slows re-adaptation down instead of helping.
ExperimentConfig default_reactor_config(std::uint64_t seed) {
    ExperimentConfig c;
    c.problem = "reactor";
    c.mode = RunMode::gp;
    c.tr.surrogate_mode = SurrogateMode::direct;
    c.tr.delta0 = 0.05;
    c.tr.eta = 0.2;
    c.tr.beta_dec = 0.3;
    c.tr.max_iters = 22;
    c.tr.retrain_every = 1;
    c.tr.min_dist_factor = 0.01;
    c.tr.subproblem_starts = 16;
    c.tr.train.restarts = 3;
    c.init.count = 20;
    c.init.box_fraction = 0.1;
    c.seed = seed;
    c.seed_set = true;
    c.output_dir = "out/reactor";
    return c;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();

    ExperimentResult result;
    result.config = config;
    result.hash = config_hash(config);

    ProblemSetup setup = make_setup(config);
    result.model_optimum = setup.model_optimum;
    result.x0 = config.x0.value_or(
        config.is_reactor() ? setup.model_optimum
                            : setup.problem.default_start);

    TrConfig tr = config.tr;
    if (config.is_reactor() && tr.gp_noise_std < 0.0) {
        // The reactor's cost noise is relative; give the GP a matching
        // absolute level at the operating cost scale.
        tr.gp_noise_std =
            config.reactor_noise.absolute > 0.0
                ? config.reactor_noise.absolute
                : config.reactor_noise.fraction * std::abs(setup.model_opt_cost);
    }

    RunHooks hooks;
    if (config.is_reactor())
        hooks.on_iteration_start = [counter = setup.batch_counter](int k) {
            *counter = k + 1;
        };

    const std::uint64_t run_seed = derive_seed(config.seed, kStreamRun);
    if (config.mode == RunMode::gp) {
        result.initial_data = sample_design(config, setup);
        result.run = run(setup.problem, tr, result.initial_data, result.x0,
                         run_seed, hooks);
    } else {
        const LocalKind kind = config.mode == RunMode::linear
                                   ? LocalKind::linear
                                   : LocalKind::quadratic;
        result.run = run_local_tr(setup.problem, tr, kind, result.x0,
                                  run_seed, hooks);
    }

    if (config.is_reactor()) {
        double fixed_cost[2] = {0.0, 0.0};
        for (const Scenario s : {Scenario::I, Scenario::II})
            fixed_cost[s == Scenario::I ? 0 : 1] =
                evaluate_batch(from_normalized(result.model_optimum,
                                               config.reactor),
                               apply_scenario(config.reactor, s))
                    .cost;
        for (const IterationRecord& rec : result.run.trace) {
            ReactorBatchRow row;
            row.batch = rec.k + 1;
            row.scenario = scenario_schedule(row.batch);
            row.applied = rec.rho && rec.step ? Vector(rec.x + *rec.step)
                                              : rec.x;
            row.recipe = from_normalized(row.applied, config.reactor);
            const BatchOutcome outcome = evaluate_batch(
                row.recipe, apply_scenario(config.reactor, row.scenario));
            row.measured = rec.rho ? rec.plant_value_estimate -
                                         *rec.rho * rec.model_decrement
                                   : kNan;
            row.cost_noiseless = outcome.cost;
            row.cost_model_input =
                fixed_cost[row.scenario == Scenario::I ? 0 : 1];
            row.cB = outcome.terminal[1];
            row.cD = outcome.terminal[3];
            row.penalty = outcome.penalty;
            row.accepted = rec.accepted;
            result.batches.push_back(std::move(row));
        }
    }

    // Summary record. NaNs serialize as null.
    const int init_evals = result.initial_data.size();
    json summary;
    summary["problem"] = config.problem;
    summary["mode"] = to_string(config.mode);
    summary["surrogate_mode"] = to_string(config.tr.surrogate_mode);
    summary["seed"] = config.seed;
    summary["config_hash"] = result.hash;
    summary["iterations"] = result.run.trace.size();
    summary["stop_reason"] = result.run.stop_reason;
    summary["error"] = result.run.error.empty() ? json(nullptr)
                                                : json(result.run.error);
    summary["final_x"] = vec_json(result.run.final_x);
    summary["final_delta"] = result.run.final_delta;
    summary["total_plant_evals"] = result.run.total_plant_evals;
    summary["initial_design_evals"] = init_evals;
    summary["total_plant_evals_with_init"] =
        result.run.total_plant_evals + init_evals;
    summary["best_plant_estimate"] = result.run.best_plant_estimate;
    summary["best_x"] = vec_json(result.run.best_x);
    summary["gamma_inc"] = config.tr.gamma_inc;
    summary["gamma_dec"] = config.tr.gamma_dec;
    summary["alpha_lower_bound"] =
        alpha_lower_bound(config.tr.gamma_inc, config.tr.gamma_dec);
    if (!config.is_reactor() && setup.problem.has_oracle() &&
        result.run.final_x.size() == setup.problem.dim) {
        summary["oracle"] = json{
            {"value_final", setup.problem.oracle_value(result.run.final_x)},
            {"grad_norm_final",
             setup.problem.oracle_gradient(result.run.final_x).norm()}};
    } else {
        summary["oracle"] = nullptr;
    }
    if (config.is_reactor()) {
        summary["reactor"] = json{
            {"model_optimum", vec_json(result.model_optimum)},
            {"model_optimum_cost", setup.model_opt_cost},
            {"batches", result.batches.size()}};
    } else {
        summary["reactor"] = nullptr;
    }
    result.summary = summary;

    // Artifacts.
    fs::create_directories(config.output_dir);
    const std::string dir = config.output_dir + "/";
    write_json_file(dir + "config.json", config_to_json(config), result.files);
    write_trace_csv(result.run.trace, dir + "trace.csv");
    result.files.push_back(dir + "trace.csv");
    write_json_file(dir + "summary.json", summary, result.files);
    {
        std::ostringstream text;
        text << "problem:                 " << config.problem << "\n";
        text << "mode:                    " << to_string(config.mode) << "\n";
        text << "config hash:             " << result.hash << "\n";
        text << result.run.summary_text();
        text << "alpha lower bound:       "
             << format_double(summary["alpha_lower_bound"].get<double>())
             << " (gamma_inc " << format_double(config.tr.gamma_inc)
             << ", gamma_dec " << format_double(config.tr.gamma_dec) << ")\n";
        write_text_file(dir + "summary.txt", text.str(), result.files);
    }
    write_csv(result.run.data, dir + "dataset.csv");
    result.files.push_back(dir + "dataset.csv");
    if (config.is_reactor()) {
        write_text_file(dir + "batches.csv", batches_csv(result.batches),
                        result.files);
        write_text_file(dir + "profiles.csv",
                        profiles_csv(result, config.reactor), result.files);
    }
    return result;
}

Comparison compare_modes(const std::vector<ExperimentConfig>& configs,
                         double tolerance) {
    require(!configs.empty(), "compare needs at least one config");
    require(tolerance > 0.0, "tolerance must be positive");
    auto stripped = [](const ExperimentConfig& c) {
        json j = config_to_json(c);
        j.erase("mode");
        j.erase("output_dir");
        return j;
    };
    const json reference = stripped(configs.front());
    for (const ExperimentConfig& c : configs)
        require(stripped(c) == reference,
                "compare configs must differ only in mode and output_dir");

    Comparison cmp;
    cmp.tolerance = tolerance;
    for (const ExperimentConfig& config : configs) {
        const ExperimentResult res = run_experiment(config);
        CompareRow row;
        row.mode = to_string(config.mode);
        const int init_evals = res.initial_data.size();
        row.total_plant_evals = res.run.total_plant_evals + init_evals;
        row.best_plant_value = res.run.best_plant_estimate;
        if (!config.is_reactor()) {
            const ProblemSpec prob =
                problem_by_name(config.problem, config.problem_noise_std);
            if (prob.has_oracle()) {
                int cum = init_evals;
                for (const IterationRecord& rec : res.run.trace) {
                    if (!row.iters_to_tol &&
                        prob.oracle_gradient(rec.x).norm() < tolerance) {
                        row.iters_to_tol = rec.k;
                        row.evals_to_tol = cum;
                    }
                    cum += rec.plant_evals_used;
                }
                if (!row.iters_to_tol &&
                    prob.oracle_gradient(res.run.final_x).norm() < tolerance) {
                    row.iters_to_tol = static_cast<int>(res.run.trace.size());
                    row.evals_to_tol = cum;
                }
            }
        }
        cmp.rows.push_back(std::move(row));
    }
    return cmp;
}

std::string Comparison::to_text() const {
    std::ostringstream out;
    out << "mode        plant_evals  best_value       iters_to_tol  "
           "evals_to_tol  (tol " << format_double(tolerance) << ")\n";
    for (const CompareRow& r : rows) {
        char line[160];
        std::snprintf(line, sizeof line, "%-10s  %11d  %-15s  %12s  %12s\n",
                      r.mode.c_str(), r.total_plant_evals,
                      format_double(r.best_plant_value).c_str(),
                      r.iters_to_tol ? std::to_string(*r.iters_to_tol).c_str()
                                     : "-",
                      r.evals_to_tol ? std::to_string(*r.evals_to_tol).c_str()
                                     : "-");
        out << line;
    }
    return out.str();
}

void Comparison::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot open " + path + " for writing");
    out << "mode,total_plant_evals,best_plant_value,iterations_to_tolerance,"
           "evals_to_tolerance\n";
    for (const CompareRow& r : rows) {
        out << r.mode << "," << r.total_plant_evals << ","
            << format_double(r.best_plant_value) << ","
            << (r.iters_to_tol ? std::to_string(*r.iters_to_tol) : "") << ","
            << (r.evals_to_tol ? std::to_string(*r.evals_to_tol) : "") << "\n";
    }
    if (!out) throw ArgumentError("failed while writing " + path);
}

}  // namespace gptr
