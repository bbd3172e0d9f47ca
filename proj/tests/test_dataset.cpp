#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "dncsc/dataset.hpp"

using namespace dncsc;

namespace {

std::string temp_file(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/dncsc_test_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

std::vector<std::uint32_t> class_sizes(const DataMatrix& data, std::uint32_t classes) {
    std::vector<std::uint32_t> sizes(classes, 0);
    for (const auto l : *data.labels) {
        REQUIRE(l < classes);
        ++sizes[l];
    }
    return sizes;
}

}  // namespace

TEST_CASE("two_moons with zero noise lies exactly on the arcs") {
    SyntheticSpec spec{Shape::kTwoMoons, 10, 0.0, {}, 7};
    const DataMatrix data = generate(spec);
    REQUIRE(data.n() == 10);
    REQUIRE(data.dim() == 2);
    REQUIRE(data.labels.has_value());

    const auto sizes = class_sizes(data, 2);
    CHECK(sizes[0] == 5);
    CHECK(sizes[1] == 5);

    for (std::size_t i = 0; i < data.n(); ++i) {
        const double x = data.points(i, 0);
        const double y = data.points(i, 1);
        if ((*data.labels)[i] == 0) {
            CHECK(std::fabs(x * x + y * y - 1.0) < 1e-12);
            CHECK(y >= -1e-12);
        } else {
            const double dx = x - 1.0;
            const double dy = y - 0.5;
            CHECK(std::fabs(dx * dx + dy * dy - 1.0) < 1e-12);
            CHECK(y <= 0.5 + 1e-12);
        }
    }
}

TEST_CASE("generation is a pure function of the spec") {
    SyntheticSpec spec{Shape::kTwoSpirals, 257, 0.03, {}, 99};
    const DataMatrix a = generate(spec);
    const DataMatrix b = generate(spec);
    CHECK(a.points == b.points);
    CHECK(*a.labels == *b.labels);
}

TEST_CASE("gaussian blobs honor blob params at scale") {
    SyntheticSpec spec;
    spec.shape = Shape::kGaussianBlobs;
    spec.n = 100000;
    spec.blobs = {1500, 0.2, -50.0, 50.0};
    spec.seed = 1;
    const DataMatrix data = generate(spec);
    REQUIRE(data.n() == 100000);
    const auto sizes = class_sizes(data, 1500);
    std::set<std::uint32_t> distinct(sizes.begin(), sizes.end());
    for (const auto s : sizes) CHECK(s >= 66);  // 100000 / 1500 balanced within 1
    for (const auto s : sizes) CHECK(s <= 67);
}

TEST_CASE("labels partition the index set with non-empty balanced classes") {
    for (const Shape shape :
         {Shape::kTwoMoons, Shape::kTwoSpirals, Shape::kThreeCircles, Shape::kGaussianBlobs}) {
        SyntheticSpec spec;
        spec.shape = shape;
        spec.n = 101;
        spec.noise = 0.01;
        spec.blobs.count = 7;
        spec.seed = 5;
        const DataMatrix data = generate(spec);
        REQUIRE(data.n() == 101);
        const std::uint32_t classes = class_count(spec);
        const auto sizes = class_sizes(data, classes);
        std::uint32_t lo = sizes[0], hi = sizes[0];
        for (const auto s : sizes) {
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        CHECK(lo >= 1);
        CHECK(hi - lo <= 1);
        if (shape != Shape::kGaussianBlobs) CHECK(data.dim() == 2);
    }
}

TEST_CASE("generate rejects invalid specs") {
    SyntheticSpec spec{Shape::kThreeCircles, 2, 0.0, {}, 0};
    CHECK_THROWS_AS(generate(spec), std::invalid_argument);
    spec.n = 10;
    spec.noise = -0.1;
    CHECK_THROWS_AS(generate(spec), std::invalid_argument);
}

TEST_CASE("load_csv reads plain numeric rows") {
    const auto path = temp_file("plain.csv", "1,2\n3,4\n5,6\n");
    const DataMatrix data = load_csv(path);
    REQUIRE(data.n() == 3);
    REQUIRE(data.dim() == 2);
    CHECK(data.points(0, 0) == 1.0);
    CHECK(data.points(2, 1) == 6.0);
    CHECK(!data.labels.has_value());
}

TEST_CASE("load_csv maps label column to dense first-occurrence ids") {
    const auto path = temp_file("labeled.csv", "1,2,a\n3,4,a\n5,6,b\n");
    const DataMatrix data = load_csv(path, 2);
    REQUIRE(data.n() == 3);
    REQUIRE(data.dim() == 2);
    REQUIRE(data.labels.has_value());
    CHECK((*data.labels) == std::vector<std::uint32_t>{0, 0, 1});
    CHECK(data.points(1, 1) == 4.0);
}

TEST_CASE("load_csv reports parse errors with row and column") {
    const auto path = temp_file("bad.csv", "1,x\n");
    try {
        load_csv(path);
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 1") != std::string::npos);
        CHECK(msg.find("column 2") != std::string::npos);
    }
}

TEST_CASE("load_csv detects headers and rejects ragged rows") {
    const auto with_header = temp_file("header.csv", "x,y\n1,2\n3,4\n");
    const DataMatrix data = load_csv(with_header);
    CHECK(data.n() == 2);

    const auto ragged = temp_file("ragged.csv", "1,2\n3\n");
    CHECK_THROWS_AS(load_csv(ragged), std::runtime_error);

    CHECK_THROWS_AS(load_csv("/nonexistent/nope.csv"), std::runtime_error);

    const auto labeled = temp_file("label_oob.csv", "1,2\n");
    CHECK_THROWS_AS(load_csv(labeled, 5), std::runtime_error);
}

TEST_CASE("write_csv then load_csv round-trips points and labels") {
    SyntheticSpec spec{Shape::kThreeCircles, 30, 0.02, {}, 3};
    const DataMatrix data = generate(spec);
    const auto path = temp_file("roundtrip.csv", "");
    write_csv(data, path);
    const DataMatrix back = load_csv(path, 2);
    REQUIRE(back.n() == data.n());
    REQUIRE(back.dim() == data.dim());
    CHECK(back.points == data.points);
    CHECK(*back.labels == *data.labels);
}
