#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gptr/certification.hpp"
#include "gptr/local_model.hpp"
#include "gptr/reactor.hpp"
#include "gptr/trust_region.hpp"

namespace gptr {

enum class RunMode { gp, linear, quadratic };

std::string to_string(RunMode mode);
RunMode run_mode_from_string(const std::string& s);

/// Seeded initial design: `count` points uniform in a box around the
/// center (the model optimum for the reactor, the start point otherwise).
/// The half-width is box_fraction * max(1, |center|_inf).
struct InitDesign {
    int count = 20;
    double box_fraction = 0.1;
    std::optional<Vector> center;
};

/// Everything one experiment needs. Loadable from JSON; every field has a
/// default except the seed, which must be set explicitly (runs must never
/// depend on wall-clock state).
struct ExperimentConfig {
    std::string problem = "quadratic2"; // quadraticN | rosenbrock | sin | reactor
    double problem_noise_std = 0.0;     // analytic problems only
    ReactorParams reactor;              // problem == "reactor" only
    ReactorNoise reactor_noise;
    RunMode mode = RunMode::gp;
    TrConfig tr;
    FullLinearityConstants constants;   // reported, never enforced
    InitDesign init;
    std::optional<Vector> x0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string output_dir = "out";

    bool is_reactor() const { return problem == "reactor"; }
    /// Throws ArgumentError listing every violated field.
    void validate() const;
};

/// Canonical JSON with every field spelled out (optionals as null);
/// identical configs produce identical dumps.
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// FNV-1a 64-bit hash of the canonical dump, as 16 hex digits; embedded in
/// every output bundle for provenance.
std::string config_hash(const ExperimentConfig& config);

/// Per-batch view of a reactor run: the input applied in that batch, its
/// noiseless plant cost under the batch's scenario, and the cost the fixed
/// model-based input would have achieved.
struct ReactorBatchRow {
    int batch = 0;
    Scenario scenario = Scenario::I;
    Vector applied;              // normalized input run in this batch
    ArcInput recipe;             // decoded (t_m, t_s, F)
    double measured = 0.0;       // noisy cost of the trial input (NaN if none)
    double cost_noiseless = 0.0; // noiseless plant cost of `applied`
    double cost_model_input = 0.0; // same batch, fixed model-optimal input
    double cB = 0.0, cD = 0.0;   // terminal concentrations of `applied`
    double penalty = 0.0;
    bool accepted = false;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::string hash;
    TrRunResult run;
    Vector x0;                   // start actually used
    Dataset initial_data;        // empty for baseline modes
    std::vector<ReactorBatchRow> batches; // reactor runs only
    Vector model_optimum;        // reactor: nominal-model optimum (normalized)
    nlohmann::json summary;
    std::vector<std::string> files; // artifact paths written
};

/// Executes the configured run and writes the artifact bundle into
/// output_dir: config.json, trace.csv, summary.json, summary.txt,
/// dataset.csv, and for the reactor additionally batches.csv and
/// profiles.csv. Reruns with the same config are byte-identical.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// The plant-evaluated initial design for a config (also behind the
/// dataset-export CLI verb). Reactor designs are evaluated under the
/// batch-1 scenario.
Dataset build_initial_design(const ExperimentConfig& config);

/// The stock batch-to-batch reactor experiment: 22 batches, a direct GP on
/// the plant cost retrained every batch, trust region sized for the
/// normalized [0,1]^3 input space. (The classic radius settings assume
/// unnormalized inputs; delta0 is rescaled here accordingly.)
ExperimentConfig default_reactor_config(std::uint64_t seed = 1);

struct CompareRow {
    std::string mode;
    int total_plant_evals = 0;
    double best_plant_value = 0.0;
    std::optional<int> iters_to_tol;  // absent without an oracle
    std::optional<int> evals_to_tol;
};

struct Comparison {
    double tolerance = 1e-2;
    std::vector<CompareRow> rows;

    std::string to_text() const;
    void write_csv(const std::string& path) const;
};

/// Runs each config (they must agree on everything except mode and
/// output_dir) and tabulates plant-evaluation usage. "Reaching tolerance"
/// means the exact-oracle gradient norm at an iterate drops below
/// `tolerance`; the eval count includes initial-design and rebuild costs.
Comparison compare_modes(const std::vector<ExperimentConfig>& configs,
                         double tolerance = 1e-2);

}  // namespace gptr
