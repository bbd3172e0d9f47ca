#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numeric>
#include <set>

#include "dncsc/kmeans.hpp"
#include "dncsc/landmark.hpp"
#include "dncsc/rng.hpp"

using namespace dncsc;

namespace {

Matrix blob_pair(std::size_t per_blob, double spread, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(2 * per_blob, 2);
    for (std::size_t i = 0; i < 2 * per_blob; ++i) {
        const double cx = i < per_blob ? 0.0 : 20.0;
        m(i, 0) = cx + spread * rng.normal();
        m(i, 1) = spread * rng.normal();
    }
    return m;
}

Matrix gaussian_blobs(std::size_t n, std::size_t blobs, double spread, std::uint64_t seed) {
    Rng rng(seed);
    Matrix centers(blobs, 2);
    for (std::size_t b = 0; b < blobs; ++b) {
        centers(b, 0) = rng.uniform_double() * 40.0 - 20.0;
        centers(b, 1) = rng.uniform_double() * 40.0 - 20.0;
    }
    Matrix m(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t b = i % blobs;
        m(i, 0) = centers(b, 0) + spread * rng.normal();
        m(i, 1) = centers(b, 1) + spread * rng.normal();
    }
    return m;
}

void check_landmark_invariants(MatrixView points, const LandmarkSet& lm) {
    const std::uint32_t p = lm.size();
    REQUIRE(lm.assignment.size() == points.rows());
    std::vector<std::uint32_t> counts(p, 0);
    for (const auto a : lm.assignment) {
        REQUIRE(a < p);
        ++counts[a];
    }
    if (lm.method != SelectionMethod::kRandom)
        for (const auto c : counts) CHECK(c >= 1);

    std::vector<double> rss(p, 0.0);
    for (std::size_t i = 0; i < points.rows(); ++i)
        rss[lm.assignment[i]] +=
            squared_distance(points.row(i), lm.centers.row(lm.assignment[i]));
    for (std::uint32_t s = 0; s < p; ++s)
        CHECK(lm.subset_rss[s] ==
              doctest::Approx(rss[s]).epsilon(1e-6).scale(std::max(1.0, rss[s])));
}

}  // namespace

TEST_CASE("allocate_counts follows the proportional rule") {
    CHECK(allocate_counts({3.0, 1.0}, 8, 100) == std::vector<std::uint32_t>{6, 2});
    CHECK(allocate_counts({1.0, 1.0}, 5, 10) == std::vector<std::uint32_t>{3, 2});
    CHECK(allocate_counts({9.0, 1.0}, 10, 5) == std::vector<std::uint32_t>{5, 1});
}

TEST_CASE("allocate_counts keeps the total at or below p") {
    // Minimum-1 seats can overshoot; seats come back from the biggest share.
    const auto c = allocate_counts({0.001, 0.001, 0.998}, 3, 50);
    CHECK(c == std::vector<std::uint32_t>{1, 1, 1});

    const auto u = allocate_counts({0.0, 0.0, 0.0}, 12, 50);
    CHECK(u == std::vector<std::uint32_t>{4, 4, 4});

    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> rss(1 + rng.uniform_below(20));
        for (auto& v : rss) v = rng.uniform_double() * 10.0;
        const std::uint32_t p =
            static_cast<std::uint32_t>(rss.size() + rng.uniform_below(40));
        const std::uint32_t alpha = 2 + static_cast<std::uint32_t>(rng.uniform_below(10));
        const auto counts = allocate_counts(rss, p, alpha);
        std::uint64_t sum = 0;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            CHECK(counts[i] >= 1);
            CHECK(counts[i] <= alpha);
            sum += counts[i];
        }
        CHECK(sum <= p);
    }
}

TEST_CASE("allocate_counts rejects bad input") {
    CHECK_THROWS_AS(allocate_counts({1.0, 1.0, 1.0}, 2, 10), std::invalid_argument);
    CHECK_THROWS_AS(allocate_counts({}, 2, 10), std::invalid_argument);
    CHECK_THROWS_AS(allocate_counts({1.0}, 2, 1), std::invalid_argument);
}

TEST_CASE("nine separated groups become nine landmarks in two dividing rounds") {
    // Nine tight pairs arranged as three well-separated triads of pairs;
    // alpha = 3 splits the triads apart first, the second round isolates
    // every pair, so each landmark is one pair midpoint.
    Matrix x(18, 2);
    const double base[9][2] = {{0, 0},   {20, 0},   {0, 20},   {500, 0},  {520, 0},
                               {500, 20}, {0, 500},  {20, 500}, {0, 520}};
    for (std::size_t g = 0; g < 9; ++g) {
        x(2 * g, 0) = base[g][0] - 0.1;
        x(2 * g, 1) = base[g][1];
        x(2 * g + 1, 0) = base[g][0] + 0.1;
        x(2 * g + 1, 1) = base[g][1];
    }
    const LandmarkSet lm = select_landmarks_dnc(x, 9, 3, 16, 5, 3);
    REQUIRE(lm.size() == 9);
    CHECK(lm.rounds == 2);
    std::set<std::pair<double, double>> found;
    for (std::uint32_t s = 0; s < 9; ++s) found.insert({lm.centers(s, 0), lm.centers(s, 1)});
    REQUIRE(found.size() == 9);
    for (std::size_t g = 0; g < 9; ++g) {
        CHECK(found.count({base[g][0], base[g][1]}) == 1);  // pair midpoint
        CHECK(lm.assignment[2 * g] == lm.assignment[2 * g + 1]);
    }
    for (const auto rss : lm.subset_rss) CHECK(rss == doctest::Approx(0.02).epsilon(1e-9));
    check_landmark_invariants(x, lm);
}

TEST_CASE("p >= N degenerates to identity landmarks") {
    const Matrix x = blob_pair(5, 0.5, 1);
    const LandmarkSet lm = select_landmarks_dnc(x, 10, 3, 16, 5, 0);
    REQUIRE(lm.size() == 10);
    CHECK(lm.centers == x);
    for (std::uint32_t i = 0; i < 10; ++i) CHECK(lm.assignment[i] == i);
    for (const auto rss : lm.subset_rss) CHECK(rss == 0.0);
}

TEST_CASE("two blobs with p = 2 finish in one round near the blob means") {
    const double spread = 0.5;
    const Matrix x = blob_pair(100, spread, 7);
    const LandmarkSet lm = select_landmarks_dnc(x, 2, 50, 200, 5, 11);
    REQUIRE(lm.size() == 2);
    CHECK(lm.rounds == 1);

    const KMeansResult reference = kmeans(x, 2, 20, 5);
    for (std::uint32_t s = 0; s < 2; ++s) {
        double best = 1e30;
        for (std::uint32_t r = 0; r < 2; ++r)
            best = std::min(best,
                            squared_distance(lm.centers.row(s), reference.centers.row(r)));
        CHECK(std::sqrt(best) < spread);
    }
    check_landmark_invariants(x, lm);
}

TEST_CASE("dnc reaches exactly p landmarks on generic data") {
    const Matrix x = gaussian_blobs(3000, 12, 0.8, 5);
    for (const std::uint32_t p : {7u, 50u, 128u}) {
        const LandmarkSet lm = select_landmarks_dnc(x, p, 5, 60, 5, 9);
        CHECK(lm.size() == p);
        CHECK(lm.requested == p);
        check_landmark_invariants(x, lm);
        // Round-count safety bound.
        const auto bound = static_cast<std::uint32_t>(
                               std::ceil(std::log(double(p)) / std::log(5.0))) +
                           p;
        CHECK(lm.rounds <= bound);
    }
}

TEST_CASE("dnc selection is deterministic in the seed") {
    const Matrix x = gaussian_blobs(800, 6, 0.5, 2);
    const LandmarkSet a = select_landmarks_dnc(x, 40, 4, 80, 5, 77);
    const LandmarkSet b = select_landmarks_dnc(x, 40, 4, 80, 5, 77);
    CHECK(a.centers == b.centers);
    CHECK(a.assignment == b.assignment);
}

TEST_CASE("dnc mean RSS beats random selection on blob data") {
    const Matrix x = gaussian_blobs(2000, 10, 0.6, 13);
    double dnc_total = 0.0, random_total = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        dnc_total += select_landmarks_dnc(x, 50, 8, 500, 5, seed).total_rss();
        random_total += select_landmarks_random(x, 50, seed).total_rss();
    }
    CHECK(dnc_total / 10.0 <= random_total / 10.0);
}

TEST_CASE("kmeans selection baseline handles the trivial sizes") {
    const Matrix x = blob_pair(10, 0.4, 3);
    const LandmarkSet one = select_landmarks_kmeans(x, 1, 5, 0);
    REQUIRE(one.size() == 1);
    for (std::size_t j = 0; j < 2; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) mean += x(i, j);
        mean /= static_cast<double>(x.rows());
        CHECK(one.centers(0, j) == doctest::Approx(mean).epsilon(1e-12));
    }

    const LandmarkSet all = select_landmarks_kmeans(x, 20, 5, 0);
    REQUIRE(all.size() == 20);
    CHECK(all.total_rss() == doctest::Approx(0.0));
    check_landmark_invariants(x, all);
}

TEST_CASE("random selection samples points deterministically") {
    const Matrix x = blob_pair(15, 0.4, 9);
    const LandmarkSet a = select_landmarks_random(x, 6, 21);
    const LandmarkSet b = select_landmarks_random(x, 6, 21);
    CHECK(a.centers == b.centers);
    check_landmark_invariants(x, a);

    // p = N returns a permutation of the points.
    const LandmarkSet all = select_landmarks_random(x, 30, 4);
    std::multiset<std::pair<double, double>> expect, got;
    for (std::size_t i = 0; i < 30; ++i) {
        expect.insert({x(i, 0), x(i, 1)});
        got.insert({all.centers(i, 0), all.centers(i, 1)});
    }
    CHECK(expect == got);

    // A single random landmark cannot beat the mean-centered solution.
    const LandmarkSet single = select_landmarks_random(x, 1, 5);
    const LandmarkSet mean_center = select_landmarks_kmeans(x, 1, 5, 0);
    CHECK(single.total_rss() >= mean_center.total_rss() - 1e-9);
}

TEST_CASE("selection rejects bad arguments") {
    const Matrix x = blob_pair(5, 0.3, 0);
    CHECK_THROWS_AS(select_landmarks_dnc(x, 5, 1, 16, 5, 0), std::invalid_argument);
    CHECK_THROWS_AS(select_landmarks_dnc(x, 5, 8, 4, 5, 0), std::invalid_argument);
    CHECK_THROWS_AS(select_landmarks_kmeans(x, 11, 5, 0), std::invalid_argument);
    CHECK_THROWS_AS(select_landmarks_random(x, 11, 0), std::invalid_argument);
}
