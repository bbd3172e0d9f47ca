#include <doctest.h>

#include <stdexcept>

#include <Eigen/Dense>
#include <cmath>

#include "dncsc/kmeans.hpp"
#include "dncsc/metrics.hpp"
#include "dncsc/partition.hpp"
#include "dncsc/rng.hpp"

using namespace dncsc;

namespace {

SparseAffinity affinity_from_dense(const std::vector<std::vector<double>>& rows) {
    SparseAffinity b;
    b.n = rows.size();
    b.p = rows.front().size();
    b.k = static_cast<std::uint32_t>(b.p);
    for (const auto& row : rows)
        for (std::size_t j = 0; j < row.size(); ++j) {
            b.cols.push_back(static_cast<std::uint32_t>(j));
            b.weights.push_back(row[j]);
        }
    b.sigma = 1.0;
    return b;
}

/// Random dense positive affinity; with all weights positive the bipartite
/// graph is connected.
SparseAffinity random_affinity(std::size_t n, std::size_t p, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> rows(n, std::vector<double>(p));
    for (auto& row : rows)
        for (auto& v : row) v = 0.05 + 0.95 * rng.uniform_double();
    return affinity_from_dense(rows);
}

double on_lambda_scale(const Matrix& m) {
    double norm = 1.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) norm = std::max(norm, std::fabs(m(i, j)));
    return norm;
}

}  // namespace

TEST_CASE("degrees sums rows and columns and flags empty columns") {
    const SparseAffinity ident = affinity_from_dense({{1.0, 0.0}, {0.0, 1.0}});
    const DegreePair d1 = degrees(ident);
    CHECK(d1.d_x == std::vector<double>{1.0, 1.0});
    CHECK(d1.d_r == std::vector<double>{1.0, 1.0});
    CHECK(d1.kept_landmarks.size() == 2);

    const SparseAffinity halves = affinity_from_dense({{0.5, 0.5}, {0.5, 0.5}});
    const DegreePair d2 = degrees(halves);
    CHECK(d2.d_x == std::vector<double>{1.0, 1.0});
    CHECK(d2.d_r == std::vector<double>{1.0, 1.0});

    const SparseAffinity dead_col =
        affinity_from_dense({{0.7, 0.0, 0.3}, {0.6, 0.0, 0.4}});
    const DegreePair d3 = degrees(dead_col);
    CHECK(d3.kept_landmarks == std::vector<std::uint32_t>{0, 2});

    SparseAffinity zero_row = affinity_from_dense({{0.0, 0.0}, {1.0, 0.0}});
    CHECK_THROWS_AS(degrees(zero_row), std::runtime_error);
}

TEST_CASE("reduced Laplacian matches hand computations") {
    const SparseAffinity ident = affinity_from_dense({{1.0, 0.0}, {0.0, 1.0}});
    const Matrix l1 = reduced_laplacian(ident, degrees(ident));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(l1(i, j) == doctest::Approx(0.0));

    const SparseAffinity halves = affinity_from_dense({{0.5, 0.5}, {0.5, 0.5}});
    const Matrix l2 = reduced_laplacian(halves, degrees(halves));
    CHECK(l2(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(l2(0, 1) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(l2(1, 0) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(l2(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("reduced Laplacian is exactly symmetric with zero row sums") {
    const SparseAffinity b = random_affinity(20, 6, 3);
    const DegreePair deg = degrees(b);
    const Matrix l = reduced_laplacian(b, deg);
    for (std::size_t i = 0; i < l.rows(); ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < l.cols(); ++j) {
            CHECK(std::fabs(l(i, j) - l(j, i)) < 1e-12);
            row_sum += l(i, j);
        }
        CHECK(std::fabs(row_sum) < 1e-10);
    }
}

TEST_CASE("pruned zero-degree columns flow through the whole stage") {
    // Column 1 carries only zero weights (as after kernel underflow); it is
    // pruned and the remaining 2-column problem must behave as if the dead
    // column never existed.
    const SparseAffinity padded = affinity_from_dense(
        {{0.7, 0.0, 0.3}, {0.6, 0.0, 0.4}, {0.5, 0.0, 0.5}});
    const SparseAffinity compact =
        affinity_from_dense({{0.7, 0.3}, {0.6, 0.4}, {0.5, 0.5}});

    const DegreePair deg_p = degrees(padded);
    const DegreePair deg_c = degrees(compact);
    REQUIRE(deg_p.kept_landmarks == std::vector<std::uint32_t>{0, 2});

    const Matrix l_p = reduced_laplacian(padded, deg_p);
    const Matrix l_c = reduced_laplacian(compact, deg_c);
    REQUIRE(l_p.rows() == 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(l_p(i, j) == l_c(i, j));

    const ReducedSpectrum spec_p = solve_reduced(l_p, deg_p.kept_d_r(), 2);
    const ReducedSpectrum spec_c = solve_reduced(l_c, deg_c.kept_d_r(), 2);
    const SpectralEmbedding emb_p = lift(padded, deg_p, spec_p);
    const SpectralEmbedding emb_c = lift(compact, deg_c, spec_c);
    CHECK(emb_p.u == emb_c.u);

    const BipartiteOracleResult oracle_p = full_bipartite_oracle(padded, 2, 3);
    const BipartiteOracleResult oracle_c = full_bipartite_oracle(compact, 2, 3);
    CHECK(oracle_p.gammas == oracle_c.gammas);
    CHECK(oracle_p.labels == oracle_c.labels);
}

TEST_CASE("solve_reduced handles the flat and the 2x2 case") {
    const Matrix zero(2, 2);
    const ReducedSpectrum flat = solve_reduced(zero, {1.0, 1.0}, 2);
    CHECK(flat.lambdas[0] == doctest::Approx(0.0));
    CHECK(flat.lambdas[1] == doctest::Approx(0.0));
    CHECK(flat.gammas[0] == doctest::Approx(0.0));

    const Matrix l = Matrix::from_rows({{0.5, -0.5}, {-0.5, 0.5}});
    const ReducedSpectrum spec = solve_reduced(l, {1.0, 1.0}, 2);
    CHECK(spec.lambdas[0] == doctest::Approx(0.0).scale(1.0));
    CHECK(spec.lambdas[1] == doctest::Approx(1.0 - 1e-9));  // clamped from 1
    // Bottom eigenvector is the constant direction.
    CHECK(spec.v(0, 0) == doctest::Approx(spec.v(1, 0)).epsilon(1e-9));
}

TEST_CASE("solve_reduced satisfies the generalized residual and D-orthonormality") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const SparseAffinity b = random_affinity(30, 8, seed + 10);
        const DegreePair deg = degrees(b);
        const Matrix l = reduced_laplacian(b, deg);
        const auto d_r = deg.kept_d_r();
        const std::uint32_t k = 4;
        const ReducedSpectrum spec = solve_reduced(l, d_r, k);

        const double scale = on_lambda_scale(l);
        for (std::uint32_t j = 0; j < k; ++j) {
            if (j) CHECK(spec.lambdas[j] >= spec.lambdas[j - 1]);
            CHECK(spec.lambdas[j] >= 0.0);
            CHECK(spec.lambdas[j] < 1.0);
            // lambda = gamma (2 - gamma) by construction of gamma.
            CHECK(spec.lambdas[j] ==
                  doctest::Approx(spec.gammas[j] * (2.0 - spec.gammas[j])).epsilon(1e-12));
            for (std::size_t i = 0; i < l.rows(); ++i) {
                double lv = 0.0;
                for (std::size_t m = 0; m < l.cols(); ++m) lv += l(i, m) * spec.v(m, j);
                CHECK(std::fabs(lv - spec.lambdas[j] * d_r[i] * spec.v(i, j)) <=
                      1e-8 * scale);
            }
            for (std::uint32_t j2 = 0; j2 <= j; ++j2) {
                double dot = 0.0;
                for (std::size_t i = 0; i < l.rows(); ++i)
                    dot += spec.v(i, j) * d_r[i] * spec.v(i, j2);
                CHECK(dot == doctest::Approx(j == j2 ? 1.0 : 0.0).epsilon(1e-8).scale(1.0));
            }
        }
        // Connected graph: lambda_1 ~ 0.
        CHECK(spec.lambdas[0] <= 1e-8);
    }
}

TEST_CASE("lift reproduces the hand examples") {
    const SparseAffinity ident = affinity_from_dense({{1.0, 0.0}, {0.0, 1.0}});
    const DegreePair deg = degrees(ident);
    ReducedSpectrum spec;
    spec.lambdas = {0.0};
    spec.gammas = {0.0};
    spec.v = Matrix::from_rows({{1.0}, {0.0}});
    const SpectralEmbedding emb = lift(ident, deg, spec);
    CHECK(emb.u(0, 0) == doctest::Approx(1.0));
    CHECK(emb.u(1, 0) == doctest::Approx(0.0));

    const SparseAffinity halves = affinity_from_dense({{0.5, 0.5}, {0.5, 0.5}});
    const DegreePair deg2 = degrees(halves);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    ReducedSpectrum spec2;
    spec2.lambdas = {0.0};
    spec2.gammas = {0.0};
    spec2.v = Matrix::from_rows({{inv_sqrt2}, {inv_sqrt2}});
    const SpectralEmbedding emb2 = lift(halves, deg2, spec2);
    CHECK(emb2.u(0, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
    CHECK(emb2.u(1, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
    // 1-norm normalized rows sum to one in absolute value.
    CHECK(std::fabs(emb2.u_normalized(0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("scaling an eigenvector scales u but not the normalized rows") {
    const SparseAffinity b = random_affinity(10, 4, 2);
    const DegreePair deg = degrees(b);
    const Matrix l = reduced_laplacian(b, deg);
    ReducedSpectrum spec = solve_reduced(l, deg.kept_d_r(), 2);

    const SpectralEmbedding base = lift(b, deg, spec);
    ReducedSpectrum scaled = spec;
    for (std::size_t i = 0; i < scaled.v.rows(); ++i)
        for (std::size_t j = 0; j < scaled.v.cols(); ++j) scaled.v(i, j) *= 3.0;
    const SpectralEmbedding big = lift(b, deg, scaled);
    for (std::size_t i = 0; i < base.u.rows(); ++i)
        for (std::size_t j = 0; j < base.u.cols(); ++j) {
            CHECK(big.u(i, j) == doctest::Approx(3.0 * base.u(i, j)).epsilon(1e-12));
            CHECK(big.u_normalized(i, j) ==
                  doctest::Approx(base.u_normalized(i, j)).epsilon(1e-12));
        }
}

TEST_CASE("cluster_embedding groups repeated rows and is deterministic") {
    SpectralEmbedding emb;
    emb.u = Matrix::from_rows(
        {{1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.0, 1.0}, {1.0, 0.0}});
    emb.u_normalized = emb.u;
    const auto labels = cluster_embedding(emb, 2, 5);
    CHECK(labels[0] == labels[1]);
    CHECK(labels[0] == labels[4]);
    CHECK(labels[2] == labels[3]);
    CHECK(labels[0] != labels[2]);

    const auto again = cluster_embedding(emb, 2, 5);
    CHECK(labels == again);

    const auto one = cluster_embedding(emb, 1, 0);
    for (const auto l : one) CHECK(l == 0);
}

TEST_CASE("oracle on the identity affinity sees two disconnected pairs") {
    const SparseAffinity ident = affinity_from_dense({{1.0, 0.0}, {0.0, 1.0}});
    const BipartiteOracleResult res = full_bipartite_oracle(ident, 2, 0);
    CHECK(res.gammas[0] == doctest::Approx(0.0).scale(1.0));
    CHECK(res.gammas[1] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("transfer cut and the full oracle agree on eigenvalues") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed + 500);
        const std::size_t n = 10 + rng.uniform_below(41);
        const std::size_t p = 3 + rng.uniform_below(6);
        const std::uint32_t k = std::min<std::uint32_t>(
            2 + static_cast<std::uint32_t>(rng.uniform_below(3)),
            static_cast<std::uint32_t>(p));
        const SparseAffinity b = random_affinity(n, p, seed);
        const DegreePair deg = degrees(b);
        const ReducedSpectrum spec =
            solve_reduced(reduced_laplacian(b, deg), deg.kept_d_r(), k);
        const BipartiteOracleResult oracle = full_bipartite_oracle(b, k, seed);
        for (std::uint32_t j = 0; j < k; ++j) {
            const double gamma = oracle.gammas[j];
            CHECK(std::fabs(spec.lambdas[j] - gamma * (2.0 - gamma)) <= 1e-8);
        }
    }
}

TEST_CASE("oracle labels match transfer-cut labels on a clean 2-blob instance") {
    // 40 points and 6 landmarks placed on two well-separated blobs.
    Rng rng(4);
    Matrix pts(40, 2);
    for (std::size_t i = 0; i < 40; ++i) {
        const double cx = i < 20 ? 0.0 : 30.0;
        pts(i, 0) = cx + rng.normal();
        pts(i, 1) = rng.normal();
    }
    Matrix centers(6, 2);
    for (std::size_t j = 0; j < 6; ++j) {
        centers(j, 0) = (j < 3 ? 0.0 : 30.0) + rng.normal();
        centers(j, 1) = rng.normal();
    }
    LandmarkSet lm;
    lm.method = SelectionMethod::kKmeans;
    lm.centers = centers;
    lm.assignment = assign_nearest(pts, centers);
    lm.subset_rss.assign(6, 0.0);

    const NeighborLists nn = exact_knn(pts, lm, 6);
    const SparseAffinity b = build_affinity(nn, estimate_bandwidth(nn, {}));
    const DegreePair deg = degrees(b);
    const ReducedSpectrum spec =
        solve_reduced(reduced_laplacian(b, deg), deg.kept_d_r(), 2);
    const auto labels = cluster_embedding(lift(b, deg, spec), 2, 7);
    const BipartiteOracleResult oracle = full_bipartite_oracle(b, 2, 7);

    CHECK(accuracy(labels, oracle.labels) == doctest::Approx(1.0));
    // Both split the blobs.
    CHECK(labels[0] != labels[39]);
}

TEST_CASE("lifted embedding spans the oracle's point-side eigenspace") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const std::size_t n = 25, p = 6;
        const std::uint32_t k = 3;
        const SparseAffinity b = random_affinity(n, p, seed + 40);
        const DegreePair deg = degrees(b);
        const ReducedSpectrum gap_probe =
            solve_reduced(reduced_laplacian(b, deg), deg.kept_d_r(), k + 1);
        double gap = 1.0;
        for (std::uint32_t j = 0; j + 1 <= k; ++j)
            gap = std::min(gap, gap_probe.lambdas[j + 1] - gap_probe.lambdas[j]);
        if (gap <= 1e-6) continue;  // skip near-degenerate spectra

        ReducedSpectrum spec = gap_probe;
        spec.lambdas.resize(k);
        spec.gammas.resize(k);
        Matrix v(p, k);
        for (std::size_t i = 0; i < p; ++i)
            for (std::uint32_t j = 0; j < k; ++j) v(i, j) = spec.v(i, j);
        spec.v = v;

        const SpectralEmbedding emb = lift(b, deg, spec);
        const BipartiteOracleResult oracle = full_bipartite_oracle(b, k, seed);

        Eigen::MatrixXd u1(n, k), u2(n, k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < k; ++j) {
                u1(i, j) = emb.u(i, j);
                u2(i, j) = oracle.u(i, j);
            }
        const Eigen::MatrixXd q1 =
            Eigen::HouseholderQR<Eigen::MatrixXd>(u1).householderQ() *
            Eigen::MatrixXd::Identity(n, k);
        const Eigen::MatrixXd q2 =
            Eigen::HouseholderQR<Eigen::MatrixXd>(u2).householderQ() *
            Eigen::MatrixXd::Identity(n, k);
        // Largest principal angle via the orthogonal-complement residual:
        // sin(theta_max) = || (I - Q1 Q1^T) Q2 ||_2.
        const Eigen::MatrixXd resid = q2 - q1 * (q1.transpose() * q2);
        const double sin_theta =
            resid.jacobiSvd().singularValues().maxCoeff();
        CHECK(sin_theta <= 1e-6);
    }
}

TEST_CASE("scaling the affinity leaves the spectrum and labels unchanged") {
    const SparseAffinity b = random_affinity(30, 7, 9);
    SparseAffinity scaled = b;
    for (auto& w : scaled.weights) w *= 3.7;

    const DegreePair deg_b = degrees(b);
    const DegreePair deg_s = degrees(scaled);
    const ReducedSpectrum spec_b =
        solve_reduced(reduced_laplacian(b, deg_b), deg_b.kept_d_r(), 3);
    const ReducedSpectrum spec_s =
        solve_reduced(reduced_laplacian(scaled, deg_s), deg_s.kept_d_r(), 3);
    for (std::uint32_t j = 0; j < 3; ++j) {
        CHECK(spec_b.lambdas[j] == doctest::Approx(spec_s.lambdas[j]).epsilon(1e-10));
        CHECK(spec_b.gammas[j] == doctest::Approx(spec_s.gammas[j]).epsilon(1e-10));
    }
    const auto labels_b = cluster_embedding(lift(b, deg_b, spec_b), 3, 2);
    const auto labels_s = cluster_embedding(lift(scaled, deg_s, spec_s), 3, 2);
    CHECK(labels_b == labels_s);
}

TEST_CASE("partition stage rejects invalid input") {
    const SparseAffinity b = random_affinity(5, 3, 1);
    const DegreePair deg = degrees(b);
    const Matrix l = reduced_laplacian(b, deg);
    CHECK_THROWS_AS(solve_reduced(l, deg.kept_d_r(), 9), std::invalid_argument);
    CHECK_THROWS_AS(solve_reduced(l, {1.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(solve_reduced(l, {1.0, 0.0, 1.0}, 1), std::invalid_argument);

    const SparseAffinity big = random_affinity(510, 4, 2);
    CHECK_THROWS_AS(full_bipartite_oracle(big, 2, 0), std::invalid_argument);
}
