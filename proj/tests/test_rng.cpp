#include <doctest.h>

#include <cmath>

#include "gptr/direct_search.hpp"
#include "gptr/rng.hpp"

using namespace gptr;

TEST_SUITE("rng") {

TEST_CASE("identical seeds reproduce the stream exactly") {
    RngEngine a(1234), b(1234);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.uniform() == b.uniform());
        CHECK(a.normal() == b.normal());
    }
    RngEngine c(1235);
    bool all_equal = true;
    RngEngine a2(1234);
    for (int i = 0; i < 10; ++i)
        all_equal = all_equal && (a2.uniform() == c.uniform());
    CHECK_FALSE(all_equal);
}

TEST_CASE("uniform variates respect their bounds") {
    RngEngine rng(42);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double v = rng.uniform(-3.0, 5.0);
        CHECK(v >= -3.0);
        CHECK(v <= 5.0);
    }
    const Vector w = rng.uniform_vector(50, 2.0, 2.5);
    CHECK(w.minCoeff() >= 2.0);
    CHECK(w.maxCoeff() <= 2.5);
}

TEST_CASE("normal variates have sane moments") {
    RngEngine rng(7);
    const int n = 20000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 0.03);
    CHECK(std::abs(var - 1.0) < 0.05);
    CHECK(rng.normal(10.0, 0.0) == 10.0);
}

TEST_CASE("ball points stay inside the ball") {
    RngEngine rng(19);
    const Vector center = (Vector(3) << 1.0, -1.0, 0.5).finished();
    Vector first = rng.ball_point(center, 0.75);
    bool any_different = false;
    CHECK((first - center).norm() <= 0.75);
    for (int i = 0; i < 300; ++i) {
        const Vector p = rng.ball_point(center, 0.75);
        CHECK((p - center).norm() <= 0.75 * (1.0 + 1e-12));
        any_different = any_different || p != first;
    }
    CHECK(any_different);
}

TEST_CASE("derived seeds separate streams deterministically") {
    CHECK(derive_seed(1, 1) == derive_seed(1, 1));
    CHECK(derive_seed(1, 1) != derive_seed(1, 2));
    CHECK(derive_seed(1, 1) != derive_seed(2, 1));
    CHECK(derive_seed(0, 0) != 0);
}

}  // TEST_SUITE

TEST_SUITE("direct_search") {

TEST_CASE("finds the minimum of a smooth box-constrained quadratic") {
    const Vector target = (Vector(2) << 0.3, 0.7).finished();
    const auto f = [&](const Vector& x) { return (x - target).squaredNorm(); };
    DirectSearchOptions opts;
    opts.seed = 3;
    const DirectSearchResult res =
        direct_search(f, Vector::Zero(2), Vector::Ones(2), opts);
    CHECK(res.value < 1e-8);
    CHECK((res.x - target).norm() < 1e-3);
    CHECK(res.evals >= opts.samples);
}

TEST_CASE("honors the box even when the minimum lies outside") {
    const auto f = [](const Vector& x) { return (x.array() + 2.0).matrix().squaredNorm(); };
    const DirectSearchResult res =
        direct_search(f, Vector::Zero(2), Vector::Ones(2), {});
    CHECK(res.x == Vector::Zero(2));  // boundary point closest to the optimum
}

TEST_CASE("is deterministic for a fixed seed") {
    const auto f = [](const Vector& x) {
        return std::sin(5.0 * x[0]) + x[1] * x[1];
    };
    DirectSearchOptions opts;
    opts.seed = 11;
    const auto a = direct_search(f, Vector::Constant(2, -1.0),
                                 Vector::Ones(2), opts);
    const auto b = direct_search(f, Vector::Constant(2, -1.0),
                                 Vector::Ones(2), opts);
    CHECK(a.x == b.x);
    CHECK(a.value == b.value);
    CHECK(a.evals == b.evals);
}

TEST_CASE("argument validation") {
    const auto f = [](const Vector& x) { return x.squaredNorm(); };
    CHECK_THROWS_AS(direct_search(f, Vector::Ones(2), Vector::Zero(2), {}),
                    ArgumentError);
    DirectSearchOptions bad;
    bad.samples = 0;
    CHECK_THROWS_AS(direct_search(f, Vector::Zero(2), Vector::Ones(2), bad),
                    ArgumentError);
}

}  // TEST_SUITE
