#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gptr/ball_grid.hpp"
#include "gptr/types.hpp"

using namespace gptr;

namespace {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

}  // namespace

TEST_SUITE("ball_grid") {

TEST_CASE("van der Corput values in bases 2 and 3") {
    CHECK(halton(0, 2) == 0.0);
    CHECK(halton(1, 2) == 0.5);
    CHECK(halton(2, 2) == 0.25);
    CHECK(halton(3, 2) == 0.75);
    CHECK(halton(4, 2) == 0.125);
    CHECK(halton(1, 3) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(halton(2, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(halton(5, 3) == doctest::Approx(7.0 / 9.0).epsilon(1e-15));
    // All values stay in [0, 1).
    for (std::uint64_t i = 0; i < 200; ++i) {
        const double v = halton(i, 5);
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("inverse normal CDF hits reference quantiles") {
    CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(inverse_normal_cdf(0.95) ==
          doctest::Approx(1.6448536269514722).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.975) ==
          doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.999) ==
          doctest::Approx(3.0902323061678132).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.3) ==
          doctest::Approx(-0.52440051270804089).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.025) ==
          doctest::Approx(-1.959963984540054).epsilon(1e-12));
}

TEST_CASE("inverse normal CDF round-trips through the CDF") {
    for (double p = 0.001; p < 1.0; p += 0.013) {
        CHECK(normal_cdf(inverse_normal_cdf(p)) ==
              doctest::Approx(p).epsilon(1e-12));
    }
    CHECK_THROWS_AS(inverse_normal_cdf(0.0), ArgumentError);
    CHECK_THROWS_AS(inverse_normal_cdf(1.0), ArgumentError);
    CHECK_THROWS_AS(inverse_normal_cdf(-0.2), ArgumentError);
}

TEST_CASE("layout: center first, then axis boundary points") {
    const Vector center = (Vector(2) << 1.0, -2.0).finished();
    const double radius = 0.5;
    const auto pts = ball_grid(center, radius, 32);
    REQUIRE(pts.size() == 32);
    CHECK(pts[0] == center);
    CHECK(pts[1] == (Vector(2) << 1.5, -2.0).finished());
    CHECK(pts[2] == (Vector(2) << 0.5, -2.0).finished());
    CHECK(pts[3] == (Vector(2) << 1.0, -1.5).finished());
    CHECK(pts[4] == (Vector(2) << 1.0, -2.5).finished());
    // Axis points sit exactly on the boundary, the rest strictly inside.
    for (int i = 1; i <= 4; ++i)
        CHECK((pts[i] - center).norm() == doctest::Approx(radius).epsilon(1e-15));
    for (std::size_t i = 5; i < pts.size(); ++i)
        CHECK((pts[i] - center).norm() < radius);
}

TEST_CASE("every point lies in the closed ball") {
    const Vector center = (Vector(3) << 0.2, 0.0, -0.7).finished();
    for (const int count : {1, 2, 7, 64, 256}) {
        const auto pts = ball_grid(center, 1.3, count);
        REQUIRE(static_cast<int>(pts.size()) == count);
        for (const Vector& p : pts)
            CHECK((p - center).norm() <= 1.3 * (1.0 + 1e-12));
    }
}

TEST_CASE("prefixes are nested") {
    const Vector center = Vector::Zero(2);
    const auto small = ball_grid(center, 1.0, 16);
    const auto large = ball_grid(center, 1.0, 64);
    for (std::size_t i = 0; i < small.size(); ++i)
        CHECK(small[i] == large[i]);
}

TEST_CASE("truncated grids keep the layout prefix") {
    const Vector center = Vector::Zero(2);
    const auto pts = ball_grid(center, 1.0, 3);
    REQUIRE(pts.size() == 3);
    CHECK(pts[0] == center);
    CHECK(pts[1][0] == 1.0);
    CHECK(pts[2][0] == -1.0);
}

TEST_CASE("works in one dimension") {
    const auto pts = ball_grid(Vector::Zero(1), 2.0, 10);
    REQUIRE(pts.size() == 10);
    CHECK(pts[0][0] == 0.0);
    CHECK(pts[1][0] == 2.0);
    CHECK(pts[2][0] == -2.0);
    for (const Vector& p : pts) CHECK(std::abs(p[0]) <= 2.0);
}

TEST_CASE("interior points spread through the ball") {
    // Coarse uniformity check: with many points, both the inner half-ball
    // and the outer shell receive a sensible share.
    const auto pts = ball_grid(Vector::Zero(2), 1.0, 512);
    int inner = 0;
    for (const Vector& p : pts)
        if (p.norm() < 0.5) ++inner;
    // Area fraction of the half-radius disk is 25%.
    CHECK(inner > 512 / 8);
    CHECK(inner < 512 / 2);
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(ball_grid(Vector::Zero(2), 1.0, 0), ArgumentError);
    CHECK_THROWS_AS(ball_grid(Vector::Zero(2), 0.0, 8), ArgumentError);
    CHECK_THROWS_AS(ball_grid(Vector::Zero(2), -1.0, 8), ArgumentError);
    CHECK_THROWS_AS(ball_grid(Vector::Zero(0), 1.0, 8), ArgumentError);
}

}  // TEST_SUITE
