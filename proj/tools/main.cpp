// Command-line front end: run experiments, compare surrogate modes, certify
// models against exact oracles, and convert datasets.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gptr/ball_grid.hpp"
#include "gptr/experiment.hpp"

namespace {

using nlohmann::json;

void print_error(const std::string& type, const std::string& message) {
    std::cerr << json{{"error", {{"type", type}, {"message", message}}}}.dump()
              << "\n";
}

gptr::Vector parse_point(const std::string& text, int dim) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw gptr::ArgumentError("cannot parse coordinate \"" + item +
                                      "\"");
        }
    }
    if (static_cast<int>(values.size()) != dim)
        throw gptr::ArgumentError("expected " + std::to_string(dim) +
                                  " coordinates, got " +
                                  std::to_string(values.size()));
    gptr::Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = values[i];
    return v;
}

struct RunArgs {
    std::string config_path;
    std::string output_dir;
    std::optional<std::uint64_t> seed;
};

int cmd_run(const RunArgs& args) {
    gptr::ExperimentConfig config = gptr::load_config(args.config_path);
    if (!args.output_dir.empty()) config.output_dir = args.output_dir;
    if (args.seed) {
        config.seed = *args.seed;
        config.seed_set = true;
    }
    const gptr::ExperimentResult result = gptr::run_experiment(config);
    for (const std::string& f : result.files)
        std::cout << "wrote " << f << "\n";
    std::cout << "\n" << result.run.summary_text();
    if (!result.run.error.empty()) return 2;
    return 0;
}

struct CompareArgs {
    std::string config_path;
    std::vector<std::string> modes{"gp", "linear"};
    double tolerance = 1e-2;
    std::string out_csv;
};

int cmd_compare(const CompareArgs& args) {
    const gptr::ExperimentConfig base = gptr::load_config(args.config_path);
    std::vector<gptr::ExperimentConfig> configs;
    for (const std::string& mode : args.modes) {
        gptr::ExperimentConfig c = base;
        c.mode = gptr::run_mode_from_string(mode);
        c.output_dir = base.output_dir + "/" + mode;
        configs.push_back(std::move(c));
    }
    const gptr::Comparison cmp =
        gptr::compare_modes(configs, args.tolerance);
    std::cout << cmp.to_text();
    if (!args.out_csv.empty()) {
        cmp.write_csv(args.out_csv);
        std::cout << "wrote " << args.out_csv << "\n";
    }
    return 0;
}

struct CertifyArgs {
    std::string problem = "quadratic2";
    std::string center_text;
    double radius = 1.0;
    double kappa_ef = 1.0;
    double kappa_eg = 2.0;
    int grid = gptr::kDefaultCertifyGrid;
    int samples = 64;
    std::string dataset_path;
    double train_noise = 0.0;
    std::uint64_t seed = 0;
    std::string json_path;
};

int cmd_certify(const CertifyArgs& args) {
    const gptr::ProblemSpec problem = gptr::problem_by_name(args.problem, 0.0);
    if (!problem.has_oracle())
        throw gptr::ArgumentError("problem " + args.problem +
                                  " has no exact oracle");
    const gptr::Vector center =
        args.center_text.empty() ? gptr::Vector::Zero(problem.dim).eval()
                                 : parse_point(args.center_text, problem.dim);

    gptr::Dataset data;
    if (!args.dataset_path.empty()) {
        data = gptr::read_csv(args.dataset_path);
        if (data.dim() != problem.dim)
            throw gptr::ArgumentError("dataset dimension " +
                                      std::to_string(data.dim()) +
                                      " does not match problem dimension " +
                                      std::to_string(problem.dim));
    } else {
        for (const gptr::Vector& x :
             gptr::ball_grid(center, args.radius, args.samples))
            data.append(x, problem.oracle_value(x));
    }

    gptr::TrainOptions topts;
    topts.seed = args.seed;
    const gptr::Hyperparams theta =
        gptr::train(data, args.train_noise, topts);
    const gptr::GpSurrogate model(gptr::GpModel::fit(data, theta));
    const gptr::FunctionSurrogate oracle(problem.dim, problem.oracle_value,
                                         problem.oracle_gradient);

    const gptr::CertificationReport zeroth = gptr::certify_zeroth_order(
        model, oracle, center, args.radius, args.kappa_ef, args.grid);
    const gptr::CertificationReport first = gptr::certify_first_order(
        model, oracle, center, args.radius, args.kappa_eg, args.grid);

    std::cout << zeroth.to_text() << "\n" << first.to_text();
    const bool passed = zeroth.passed && first.passed;
    std::cout << "\noverall:       " << (passed ? "PASS" : "FAIL") << "\n";

    if (!args.json_path.empty()) {
        std::ofstream out(args.json_path);
        if (!out)
            throw gptr::ArgumentError("cannot open " + args.json_path +
                                      " for writing");
        out << json{{"zeroth", zeroth}, {"first", first}, {"passed", passed}}
                   .dump(2)
            << "\n";
        std::cout << "wrote " << args.json_path << "\n";
    }
    return passed ? 0 : 1;
}

struct DatasetArgs {
    std::string config_path;
    std::string in_path;
    std::string out_path;
};

int cmd_dataset_export(const DatasetArgs& args) {
    const gptr::ExperimentConfig config = gptr::load_config(args.config_path);
    const gptr::Dataset data = gptr::build_initial_design(config);
    gptr::write_csv(data, args.out_path);
    std::cout << "wrote " << args.out_path << " (" << data.size()
              << " points, dimension " << data.dim() << ")\n";
    return 0;
}

int cmd_dataset_import(const DatasetArgs& args) {
    const gptr::Dataset data = gptr::read_csv(args.in_path);
    std::cout << json{{"rows", data.size()}, {"dim", data.dim()}}.dump()
              << "\n";
    if (!args.out_path.empty()) {
        gptr::write_csv(data, args.out_path);
        std::cout << "wrote " << args.out_path << "\n";
    }
    return 0;
}

int cmd_defaults(bool reactor) {
    const gptr::ExperimentConfig config =
        reactor ? gptr::default_reactor_config() : gptr::ExperimentConfig{};
    std::cout << gptr::config_to_json(config).dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Derivative-free trust-region optimization with Gaussian-process "
        "surrogates"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Execute one experiment config");
    run->add_option("--config", run_args.config_path, "Experiment config JSON")
        ->required();
    run->add_option("--output-dir", run_args.output_dir,
                    "Override the config's output directory");
    std::uint64_t seed_override = 0;
    CLI::Option* seed_opt =
        run->add_option("--seed", seed_override, "Override the config's seed");

    CompareArgs cmp_args;
    CLI::App* compare = app.add_subcommand(
        "compare", "Run several surrogate modes on one config");
    compare->add_option("--config", cmp_args.config_path, "Base config JSON")
        ->required();
    compare->add_option("--modes", cmp_args.modes,
                        "Modes to compare (gp, linear, quadratic)")
        ->delimiter(',');
    compare->add_option("--tol", cmp_args.tolerance,
                        "Oracle gradient-norm tolerance");
    compare->add_option("--out", cmp_args.out_csv, "Comparison CSV path");

    CertifyArgs cert_args;
    CLI::App* certify = app.add_subcommand(
        "certify", "Check value/gradient mismatch bounds on a ball");
    certify->add_option("--problem", cert_args.problem,
                        "Oracle problem (quadraticN, rosenbrock, sin)");
    certify->add_option("--center", cert_args.center_text,
                        "Ball center, comma separated (default origin)");
    certify->add_option("--radius", cert_args.radius, "Ball radius");
    certify->add_option("--kappa-ef", cert_args.kappa_ef,
                        "Value mismatch constant");
    certify->add_option("--kappa-eg", cert_args.kappa_eg,
                        "Gradient mismatch constant");
    certify->add_option("--grid", cert_args.grid, "Certification grid size");
    certify->add_option("--samples", cert_args.samples,
                        "Training samples when no dataset is given");
    certify->add_option("--dataset", cert_args.dataset_path,
                        "Training data CSV (default: noiseless ball samples)");
    certify->add_option("--train-noise", cert_args.train_noise,
                        "GP noise level for training");
    certify->add_option("--seed", cert_args.seed, "Training seed");
    certify->add_option("--json", cert_args.json_path, "Report JSON path");

    DatasetArgs data_args;
    CLI::App* dataset =
        app.add_subcommand("dataset", "Import or export datasets");
    dataset->require_subcommand(1);
    CLI::App* dexport = dataset->add_subcommand(
        "export", "Write a config's initial design as CSV");
    dexport->add_option("--config", data_args.config_path, "Config JSON")
        ->required();
    dexport->add_option("--out", data_args.out_path, "CSV path")->required();
    CLI::App* dimport = dataset->add_subcommand(
        "import", "Validate a dataset CSV (optionally rewrite it)");
    dimport->add_option("--in", data_args.in_path, "CSV path")->required();
    dimport->add_option("--out", data_args.out_path,
                        "Rewrite the validated dataset here");

    bool defaults_reactor = false;
    CLI::App* defaults = app.add_subcommand(
        "defaults", "Print the reference config with every default");
    defaults->add_flag("--reactor", defaults_reactor,
                       "Print the stock reactor experiment config instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        print_error("usage", e.what());
        return 2;
    }

    try {
        if (app.got_subcommand(run)) {
            if (seed_opt->count() > 0) run_args.seed = seed_override;
            return cmd_run(run_args);
        }
        if (app.got_subcommand(compare)) return cmd_compare(cmp_args);
        if (app.got_subcommand(certify)) return cmd_certify(cert_args);
        if (app.got_subcommand(dataset)) {
            if (dataset->got_subcommand(dexport))
                return cmd_dataset_export(data_args);
            return cmd_dataset_import(data_args);
        }
        if (app.got_subcommand(defaults)) return cmd_defaults(defaults_reactor);
        print_error("usage", "no subcommand given");
        return 2;
    } catch (const gptr::ArgumentError& e) {
        print_error("argument", e.what());
        return 2;
    } catch (const gptr::EvaluationError& e) {
        print_error("evaluation", e.what());
        return 2;
    } catch (const std::exception& e) {
        print_error("runtime", e.what());
        return 2;
    }
}
