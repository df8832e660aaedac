#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "gptr/certification.hpp"
#include "gptr/ball_grid.hpp"
#include "helpers.hpp"

using namespace gptr;
using gptr::testing::random_dataset;

TEST_SUITE("certification") {

TEST_CASE("probability floor reproduces hand-derived fractions") {
    // Independently derived: (2, 0.5) -> 13/14 and (3, 0.9) -> 161/162.
    CHECK(alpha_lower_bound(2.0, 0.5) ==
          doctest::Approx(13.0 / 14.0).epsilon(1e-12));
    CHECK(alpha_lower_bound(3.0, 0.9) ==
          doctest::Approx(161.0 / 162.0).epsilon(1e-12));
}

TEST_CASE("probability floor stays in [1/2, 1)") {
    for (double gi : {1.1, 1.5, 2.0, 3.0, 5.0, 10.0})
        for (double gd : {0.05, 0.3, 0.5, 0.7, 0.9, 0.99}) {
            const double a = alpha_lower_bound(gi, gd);
            CHECK(a >= 0.5);
            CHECK(a < 1.0);
        }
    CHECK_THROWS_AS(alpha_lower_bound(1.0, 0.5), ArgumentError);
    CHECK_THROWS_AS(alpha_lower_bound(2.0, 1.0), ArgumentError);
    CHECK_THROWS_AS(alpha_lower_bound(2.0, 0.0), ArgumentError);
}

TEST_CASE("calibrated envelope scale equals the squared normal quantile") {
    CHECK(calibrated_beta_cap(0.05) ==
          doctest::Approx(3.8414588206941254).epsilon(1e-12));
    CHECK(calibrated_beta_cap(0.1) ==
          doctest::Approx(2.7055434540954129).epsilon(1e-12));
    CHECK_THROWS_AS(calibrated_beta_cap(0.0), ArgumentError);
    CHECK_THROWS_AS(calibrated_beta_cap(1.0), ArgumentError);
}

TEST_CASE("mismatch bound is the scaled posterior standard deviation") {
    const Hyperparams theta = Hyperparams::isotropic(2, 1.0, 1.0, 0.1);
    const GpModel m = GpModel::fit(
        random_dataset(3, 10, 2, [](const Vector& x) { return x.sum(); }),
        theta);
    FullLinearityConstants consts;
    consts.beta_cap = 2.5;
    RngEngine rng(8);
    for (int i = 0; i < 10; ++i) {
        const Vector q = rng.uniform_vector(2, -1.0, 1.0);
        CHECK(mismatch_bound(m, q, consts) ==
              doctest::Approx(std::sqrt(2.5 * m.posterior_var(q)))
                  .epsilon(1e-12));
    }
}

TEST_CASE("radius cap arithmetic and feasibility guard") {
    FullLinearityConstants c;
    c.gamma_lh = 2.0;
    c.kappa_eg = 10.0;
    c.kappa_ef = 1.0;
    c.kappa_bhh = 3.0;
    // (6/2) * (10 - 2 - 3) = 15.
    CHECK(theorem2_radius_cap(c) == doctest::Approx(15.0).epsilon(1e-15));

    c.kappa_eg = 5.0;  // gap exactly 0
    CHECK_THROWS_AS(theorem2_radius_cap(c), ArgumentError);
    c.kappa_eg = 1.0;  // gap negative
    CHECK_THROWS_AS(theorem2_radius_cap(c), ArgumentError);
}

TEST_CASE("constants validation names offending fields") {
    FullLinearityConstants c;
    CHECK_NOTHROW(c.validate());
    c.kappa_ef = 0.0;
    c.alpha = 1.5;
    try {
        c.validate();
        FAIL("expected ArgumentError");
    } catch (const ArgumentError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("kappa_ef") != std::string::npos);
        CHECK(msg.find("alpha") != std::string::npos);
    }
}

TEST_CASE("constants JSON round trip") {
    FullLinearityConstants c;
    c.kappa_ef = 0.4;
    c.kappa_eg = 3.5;
    c.delta = 0.2;
    nlohmann::json j = c;
    const auto back = j.get<FullLinearityConstants>();
    CHECK(back.kappa_ef == c.kappa_ef);
    CHECK(back.kappa_eg == c.kappa_eg);
    CHECK(back.delta == c.delta);
    CHECK(back.zeta == c.zeta);
}

TEST_CASE("value sweep flags a constant offset exactly") {
    const int dim = 2;
    const auto f = [](const Vector& x) { return x.squaredNorm(); };
    const FunctionSurrogate oracle(dim, f);
    const double offset = 0.02;
    const FunctionSurrogate model(dim, [&](const Vector& x) {
        return x.squaredNorm() + offset;
    });
    const Vector center = (Vector(2) << 0.5, -0.5).finished();

    // threshold = kappa_ef * radius^2 = 0.5 * 0.09 = 0.045 > 0.02: pass.
    auto rep = certify_zeroth_order(model, oracle, center, 0.3, 0.5, 64);
    CHECK(rep.passed);
    CHECK(rep.max_error == doctest::Approx(offset).epsilon(1e-12));
    CHECK(rep.threshold == doctest::Approx(0.045).epsilon(1e-12));
    CHECK(rep.ratio == doctest::Approx(offset / 0.045).epsilon(1e-12));
    CHECK(rep.order == 0);
    CHECK(rep.grid == 64);
    CHECK(rep.radius == 0.3);

    // Shrinking the radius to 0.1 drops the threshold to 0.005 < 0.02: fail.
    rep = certify_zeroth_order(model, oracle, center, 0.1, 0.5, 64);
    CHECK_FALSE(rep.passed);
    CHECK(rep.ratio > 1.0);
}

TEST_CASE("a ratio of exactly one passes") {
    const FunctionSurrogate oracle(1, [](const Vector&) { return 0.0; });
    const FunctionSurrogate model(1, [](const Vector&) { return 0.25; });
    // kappa_ef * radius^2 = 0.25 * 1 = 0.25 = |offset| exactly.
    const auto rep = certify_zeroth_order(model, oracle, Vector::Zero(1), 1.0,
                                          0.25, 16);
    CHECK(rep.ratio == 1.0);
    CHECK(rep.passed);
}

TEST_CASE("gradient sweep flags a linear perturbation exactly") {
    const int dim = 2;
    const Vector slope = (Vector(2) << 0.03, -0.04).finished();  // norm 0.05
    const auto f = [](const Vector& x) { return x.squaredNorm(); };
    const auto fg = [](const Vector& x) { return Vector(2.0 * x); };
    const FunctionSurrogate oracle(dim, f, fg);
    const FunctionSurrogate model(
        dim, [&](const Vector& x) { return x.squaredNorm() + slope.dot(x); },
        [&](const Vector& x) { return Vector(2.0 * x + slope); });
    const Vector center = Vector::Zero(2);

    // threshold = kappa_eg * radius = 0.2 * 0.5 = 0.1 > 0.05: pass.
    auto rep = certify_first_order(model, oracle, center, 0.5, 0.2, 64);
    CHECK(rep.passed);
    CHECK(rep.order == 1);
    CHECK(rep.max_error == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(rep.threshold == doctest::Approx(0.1).epsilon(1e-12));

    // radius 0.1: threshold 0.02 < 0.05: fail, worst point inside the ball.
    rep = certify_first_order(model, oracle, center, 0.1, 0.2, 64);
    CHECK_FALSE(rep.passed);
    CHECK((rep.worst_point - center).norm() <= 0.1 * (1.0 + 1e-12));
}

TEST_CASE("report serialization carries the verdict") {
    const FunctionSurrogate oracle(1, [](const Vector&) { return 0.0; });
    const FunctionSurrogate model(1, [](const Vector&) { return 1.0; });
    const auto rep =
        certify_zeroth_order(model, oracle, Vector::Zero(1), 0.5, 1.0, 8);
    CHECK_FALSE(rep.passed);
    nlohmann::json j = rep;
    CHECK(j.at("passed").get<bool>() == false);
    CHECK(j.at("order").get<int>() == 0);
    CHECK(j.at("max_error").get<double>() == rep.max_error);
    CHECK(rep.to_text().find("FAIL") != std::string::npos);
}

TEST_CASE("certification probability estimate is a deterministic fraction") {
    // Oracle: a smooth 1-D function; builder: GP trained on noisy samples
    // drawn inside the ball with the trial RNG.
    const auto f = [](const Vector& x) { return std::sin(x[0]); };
    const auto fg = [](const Vector& x) {
        return Vector(Vector::Constant(1, std::cos(x[0])));
    };
    const FunctionSurrogate oracle(1, f, fg);
    const Vector center = Vector::Zero(1);
    const double radius = 0.4;
    const double noise = 0.05;
    const Hyperparams theta = Hyperparams::isotropic(1, 1.0, 1.0, noise);

    const auto builder = [&](RngEngine& rng) {
        Dataset d;
        for (int i = 0; i < 12; ++i) {
            const Vector x = rng.ball_point(center, radius);
            d.append(x, f(x) + rng.normal(0.0, noise));
        }
        return GpModel::fit(std::move(d), theta);
    };

    FullLinearityConstants generous;
    generous.kappa_ef = 50.0;
    generous.kappa_eg = 50.0;
    const double a_generous =
        estimate_alpha(builder, oracle, center, radius, generous, 20, 5, 32);
    const double again =
        estimate_alpha(builder, oracle, center, radius, generous, 20, 5, 32);
    CHECK(a_generous == again);  // deterministic for a fixed seed
    CHECK(a_generous >= 0.0);
    CHECK(a_generous <= 1.0);
    // The estimate is an exact multiple of 1/trials.
    CHECK(std::abs(a_generous * 20.0 - std::round(a_generous * 20.0)) < 1e-12);
    CHECK(a_generous > 0.9);  // loose constants certify almost every draw

    FullLinearityConstants strict = generous;
    strict.kappa_ef = 1e-6;
    strict.kappa_eg = 1e-6;
    const double a_strict =
        estimate_alpha(builder, oracle, center, radius, strict, 20, 5, 32);
    CHECK(a_strict <= a_generous);
    CHECK(a_strict < 0.1);  // impossible constants certify almost nothing

    CHECK_THROWS_AS(estimate_alpha(builder, oracle, center, radius, generous,
                                   0, 5, 32),
                    ArgumentError);
}

}  // TEST_SUITE
