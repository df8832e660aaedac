#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "gptr/dataset.hpp"

using namespace gptr;

TEST_SUITE("dataset") {

TEST_CASE("append grows the set and fixes the dimension") {
    Dataset d;
    CHECK(d.empty());
    d.append((Vector(2) << 1.0, 2.0).finished(), 3.0);
    CHECK(d.size() == 1);
    CHECK(d.dim() == 2);
    d.append((Vector(2) << -1.0, 0.5).finished(), -0.25);
    CHECK(d.size() == 2);
    CHECK(d.point(1) == (Vector(2) << -1.0, 0.5).finished());
    CHECK(d.outputs[1] == -0.25);
    CHECK_THROWS_AS(d.append(Vector::Zero(3), 0.0), ArgumentError);
}

TEST_CASE("constructor rejects mismatched lengths") {
    CHECK_THROWS_AS(Dataset(Matrix::Zero(3, 2), Vector::Zero(2)),
                    ArgumentError);
    CHECK_NOTHROW(Dataset(Matrix::Zero(3, 2), Vector::Zero(3)));
}

TEST_CASE("deduplicated append respects the distance threshold") {
    Dataset d;
    const Vector a = (Vector(2) << 0.0, 0.0).finished();
    CHECK(try_add_point(d, a, 1.0, 0.5));  // empty set always accepts
    CHECK(d.size() == 1);

    const Vector near = (Vector(2) << 0.3, 0.0).finished();
    CHECK_FALSE(try_add_point(d, near, 2.0, 0.5));  // distance 0.3 < 0.5
    CHECK(d.size() == 1);

    const Vector far = (Vector(2) << 0.6, 0.0).finished();
    CHECK(try_add_point(d, far, 3.0, 0.5));  // distance 0.6 >= 0.5
    CHECK(d.size() == 2);

    // Zero threshold always appends, even exact duplicates.
    CHECK(try_add_point(d, a, 4.0, 0.0));
    CHECK(d.size() == 3);

    CHECK_THROWS_AS(try_add_point(d, a, 0.0, -1.0), ArgumentError);
}

TEST_CASE("shortest round-trip formatting") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-3.25) == "-3.25");
    // Round trip is bit exact for awkward values.
    for (const double v : {1.0 / 3.0, 0.1 + 0.2, 6.02214076e23, 1e-17,
                           3.141592653589793, -2.2250738585072014e-308}) {
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("CSV header names the coordinates and the response") {
    Dataset d;
    d.append((Vector(3) << 1.0, 2.0, 3.0).finished(), 4.0);
    std::ostringstream out;
    write_csv(d, out);
    const std::string text = out.str();
    CHECK(text.substr(0, text.find('\n')) == "x_1,x_2,x_3,z");
}

TEST_CASE("CSV round trip is bit exact") {
    Dataset d;
    d.append((Vector(2) << 1.0 / 3.0, -0.1).finished(), 0.1 + 0.2);
    d.append((Vector(2) << 6.02214076e23, 1e-17).finished(), -1.0);
    d.append((Vector(2) << 3.141592653589793, 2.718281828459045).finished(),
             -2.2250738585072014e-308);
    std::ostringstream out;
    write_csv(d, out);
    std::istringstream in(out.str());
    const Dataset back = read_csv(in);
    REQUIRE(back.size() == d.size());
    REQUIRE(back.dim() == d.dim());
    CHECK(back.inputs == d.inputs);
    CHECK(back.outputs == d.outputs);
}

TEST_CASE("CSV reader rejects malformed input") {
    {
        std::istringstream empty("");
        CHECK_THROWS_AS(read_csv(empty), ArgumentError);
    }
    {
        std::istringstream headerless("z\n1.0\n");
        CHECK_THROWS_AS(read_csv(headerless), ArgumentError);  // no x columns
    }
    {
        std::istringstream ragged("x_1,z\n1.0,2.0\n3.0\n");
        CHECK_THROWS_AS(read_csv(ragged), ArgumentError);
    }
}

TEST_CASE("file round trip") {
    Dataset d;
    d.append(Vector::Constant(1, 0.25), 1.5);
    const std::string path = "test_dataset_roundtrip.csv";
    write_csv(d, path);
    const Dataset back = read_csv(path);
    CHECK(back.inputs == d.inputs);
    CHECK(back.outputs == d.outputs);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_csv("does_not_exist_anywhere.csv"), ArgumentError);
}

}  // TEST_SUITE
