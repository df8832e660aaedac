#include <doctest.h>

#include <cmath>

#include "gptr/local_model.hpp"
#include "helpers.hpp"

using namespace gptr;

TEST_SUITE("local_model") {

TEST_CASE("evaluation arithmetic for a handmade quadratic model") {
    const Vector c = (Vector(2) << 1.0, -1.0).finished();
    const Vector g = (Vector(2) << 0.5, 2.0).finished();
    Matrix H(2, 2);
    H << 4.0, 1.0, 1.0, 6.0;
    const LocalModel m(LocalKind::quadratic, c, 0.5, 3.0, g, H);

    CHECK(m.value(c) == 3.0);
    CHECK(m.gradient(c) == g);
    const Vector x = (Vector(2) << 1.2, -0.9).finished();
    const Vector s = x - c;
    CHECK(m.value(x) ==
          doctest::Approx(3.0 + g.dot(s) + 0.5 * s.dot(H * s)).epsilon(1e-14));
    CHECK((m.gradient(x) - (g + H * s)).norm() < 1e-14);
    CHECK(m.coefficient_count() == 6);
    CHECK(m.dim() == 2);
    CHECK_THROWS_AS(m.value(Vector::Zero(3)), ArgumentError);
    CHECK_THROWS_AS(m.gradient(Vector::Zero(1)), ArgumentError);
}

TEST_CASE("linear model carries no curvature") {
    const Vector c = Vector::Zero(3);
    const Vector g = (Vector(3) << 1.0, 2.0, 3.0).finished();
    const LocalModel m(LocalKind::linear, c, 1.0, 0.5, g, Matrix(0, 0));
    CHECK(m.coefficient_count() == 4);
    const Vector x = (Vector(3) << 0.1, 0.2, 0.3).finished();
    CHECK(m.value(x) == doctest::Approx(0.5 + g.dot(x)).epsilon(1e-14));
    CHECK(m.gradient(x) == g);       // constant gradient everywhere
    CHECK(m.hessian().size() == 0);
}

TEST_CASE("constructor rejects malformed shapes") {
    const Vector c = Vector::Zero(2);
    const Vector g = Vector::Zero(2);
    CHECK_THROWS_AS(
        LocalModel(LocalKind::linear, Vector(0), 1.0, 0.0, Vector(0),
                   Matrix(0, 0)),
        ArgumentError);
    CHECK_THROWS_AS(
        LocalModel(LocalKind::linear, c, 0.0, 0.0, g, Matrix(0, 0)),
        ArgumentError);
    CHECK_THROWS_AS(
        LocalModel(LocalKind::linear, c, 1.0, 0.0, Vector::Zero(3),
                   Matrix(0, 0)),
        ArgumentError);
    CHECK_THROWS_AS(
        LocalModel(LocalKind::linear, c, 1.0, 0.0, g, Matrix::Zero(2, 2)),
        ArgumentError);
    CHECK_THROWS_AS(
        LocalModel(LocalKind::quadratic, c, 1.0, 0.0, g, Matrix::Zero(3, 3)),
        ArgumentError);
    CHECK_THROWS_AS(
        LocalModel(LocalKind::quadratic, c, 1.0, 0.0, g, Matrix(0, 0)),
        ArgumentError);
}

TEST_CASE("linear build interpolates a linear plant exactly") {
    const Vector g = (Vector(2) << -3.0, 0.5).finished();
    const auto f = [&](const Vector& x) { return 2.5 + g.dot(x); };
    const PlantFunction plant = noisy_plant(f, 0.0);
    const Vector center = (Vector(2) << 1.0, 2.0).finished();
    RngEngine rng(5);
    const LocalBuild built =
        build_local(LocalKind::linear, plant, center, 0.25, rng);

    CHECK(built.plant_evals_used == 3);  // center + one point per axis
    CHECK(built.design.rows() == 3);
    CHECK(built.design.row(0).transpose() == center);
    CHECK(built.model.kind() == LocalKind::linear);
    CHECK(built.model.intercept() == doctest::Approx(f(center)).epsilon(1e-12));
    CHECK((built.model.gradient_coeffs() - g).norm() < 1e-10);
    const Vector probe = (Vector(2) << 0.7, 2.4).finished();
    CHECK(built.model.value(probe) == doctest::Approx(f(probe)).epsilon(1e-10));
}

TEST_CASE("quadratic build recovers gradient and Hessian") {
    Matrix H(2, 2);
    H << 2.0, 0.5, 0.5, 3.0;
    const Vector g = (Vector(2) << 1.0, -2.0).finished();
    const auto f = [&](const Vector& x) {
        return 1.5 + g.dot(x) + 0.5 * x.dot(H * x);
    };
    const PlantFunction plant = noisy_plant(f, 0.0);
    const Vector center = (Vector(2) << 0.4, -0.3).finished();
    RngEngine rng(17);
    const LocalBuild built =
        build_local(LocalKind::quadratic, plant, center, 0.5, rng);

    CHECK(built.plant_evals_used == 8);  // ceil(1.2 * 6) samples in 2-D
    CHECK(built.values.size() == 8);
    CHECK(built.model.intercept() ==
          doctest::Approx(f(center)).epsilon(1e-8));
    const Vector grad_at_center = g + H * center;
    CHECK((built.model.gradient_coeffs() - grad_at_center).norm() < 1e-7);
    CHECK((built.model.hessian() - H).norm() < 1e-6);

    // 3-D sizing: 10 coefficients need ceil(1.2 * 10) = 12 samples.
    const auto f3 = [](const Vector& x) { return x.squaredNorm(); };
    RngEngine rng3(18);
    const LocalBuild built3 = build_local(
        LocalKind::quadratic, noisy_plant(f3, 0.0), Vector::Ones(3), 0.4,
        rng3);
    CHECK(built3.plant_evals_used == 12);
    CHECK(built3.model.coefficient_count() == 10);
}

TEST_CASE("an impossible conditioning budget raises PoisednessError") {
    const PlantFunction plant =
        noisy_plant([](const Vector& x) { return x.sum(); }, 0.0);
    RngEngine rng(1);
    CHECK_THROWS_AS(build_local(LocalKind::linear, plant, Vector::Zero(2),
                                1.0, rng, /*max_cond=*/1.0, /*redraws=*/2),
                    PoisednessError);
    RngEngine rng2(1);
    CHECK_THROWS_AS(build_local(LocalKind::linear, plant, Vector::Zero(2),
                                0.0, rng2),
                    ArgumentError);
    RngEngine rng3(1);
    CHECK_THROWS_AS(build_local(LocalKind::linear, plant, Vector::Zero(2),
                                1.0, rng3, 1e8, 0),
                    ArgumentError);
}

TEST_CASE("local loop accounts for every plant evaluation") {
    const ProblemSpec problem = make_quadratic(2, 0.05);
    TrConfig cfg;
    cfg.delta0 = 0.5;
    cfg.gamma_inc = 2.0;
    cfg.gamma_dec = 0.5;
    cfg.eta = 0.2;
    cfg.beta_dec = 0.3;
    cfg.rho_avg = 1;
    cfg.max_iters = 15;
    const Vector x0 = problem.default_start;
    const TrRunResult res =
        run_local_tr(problem, cfg, LocalKind::linear, x0, 42);
    REQUIRE(!res.trace.empty());
    CHECK(res.error.empty());

    int evals = 0;
    for (const IterationRecord& r : res.trace) {
        // Every iteration rebuilds the model (3 samples in 2-D); a passed
        // gate adds the two ratio-estimate measurements.
        const int rebuild = 3;
        if (r.rho) {
            CHECK(r.plant_evals_used == rebuild + 2 * cfg.rho_avg);
        } else {
            CHECK(r.plant_evals_used == rebuild);
        }
        evals += r.plant_evals_used;
    }
    CHECK(res.total_plant_evals == evals);
    // With rho_avg = 1 each evaluation lands in the collected dataset.
    CHECK(res.data.size() == res.total_plant_evals);
    CHECK(res.model.size() == 0);  // no GP in the baseline loop
}

TEST_CASE("local loop is deterministic in the seed") {
    const ProblemSpec problem = make_quadratic(2, 0.1);
    TrConfig cfg;
    cfg.delta0 = 0.5;
    cfg.gamma_dec = 0.5;
    cfg.eta = 0.2;
    cfg.beta_dec = 0.3;
    cfg.max_iters = 10;
    const Vector x0 = problem.default_start;
    const TrRunResult a =
        run_local_tr(problem, cfg, LocalKind::quadratic, x0, 7);
    const TrRunResult b =
        run_local_tr(problem, cfg, LocalKind::quadratic, x0, 7);
    REQUIRE(a.trace.size() == b.trace.size());
    CHECK(a.final_x == b.final_x);
    CHECK(a.total_plant_evals == b.total_plant_evals);
    CHECK(a.data.inputs == b.data.inputs);
    CHECK(a.data.outputs == b.data.outputs);

    const TrRunResult c =
        run_local_tr(problem, cfg, LocalKind::quadratic, x0, 8);
    CHECK(a.data.outputs != c.data.outputs);  // noise stream actually differs
}

TEST_CASE("local loop minimizes the noiseless quadratic") {
    const ProblemSpec problem = make_quadratic(2, 0.0);
    TrConfig cfg;
    cfg.delta0 = 0.5;
    cfg.gamma_inc = 2.0;
    cfg.gamma_dec = 0.5;
    cfg.eta = 0.2;
    cfg.beta_dec = 0.3;
    cfg.max_iters = 40;
    const Vector x0 = problem.default_start;
    const TrRunResult res =
        run_local_tr(problem, cfg, LocalKind::quadratic, x0, 3);
    CHECK(res.error.empty());
    CHECK(problem.oracle_value(res.final_x) < 1e-4);
    CHECK(problem.oracle_gradient(res.final_x).norm() < 0.05);
}

TEST_CASE("a throwing plant stops the local loop cleanly") {
    ProblemSpec problem = make_quadratic(2, 0.0);
    problem.evaluate = [](const Vector& x, RngEngine&) -> double {
        throw EvaluationError("sensor offline", x);
    };
    TrConfig cfg;
    cfg.eta = 0.2;
    cfg.beta_dec = 0.3;
    cfg.max_iters = 5;
    const TrRunResult res = run_local_tr(problem, cfg, LocalKind::linear,
                                         problem.default_start, 2);
    CHECK(res.stop_reason == "error");
    CHECK(res.error == "sensor offline");
    CHECK(res.total_plant_evals == 0);
    CHECK(res.trace.empty());
    CHECK(res.final_x == problem.default_start);
}

TEST_CASE("kind names round trip") {
    CHECK(to_string(LocalKind::linear) == "linear");
    CHECK(to_string(LocalKind::quadratic) == "quadratic");
    CHECK(local_kind_from_string("linear") == LocalKind::linear);
    CHECK(local_kind_from_string("quadratic") == LocalKind::quadratic);
    CHECK_THROWS_AS(local_kind_from_string("cubic"), ArgumentError);
}

}  // TEST_SUITE
