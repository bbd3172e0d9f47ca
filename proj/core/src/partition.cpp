#include "dncsc/partition.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dncsc/kmeans.hpp"
#include "dncsc/sym_eigen.hpp"

namespace dncsc {

namespace {

constexpr double kLambdaCeil = 1.0 - 1e-9;

/// Row-wise 1-norm normalization; zero rows stay zero.
Matrix normalize_rows_l1(const Matrix& m) {
    Matrix out = m;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += std::fabs(m(i, j));
        if (s > 0.0) {
            auto r = out.row(i);
            for (auto& v : r) v /= s;
        }
    }
    return out;
}

/// Labels for an embedding whose zero rows are attached to the cluster of the
/// nearest nonzero row.
std::vector<std::uint32_t> cluster_rows(const Matrix& rows, std::uint32_t k,
                                        std::uint64_t seed) {
    auto labels = kmeans(rows, k, 100, seed).assignments;

    std::vector<std::size_t> zero_rows;
    for (std::size_t i = 0; i < rows.rows(); ++i) {
        bool all_zero = true;
        for (std::size_t j = 0; j < rows.cols(); ++j)
            if (rows(i, j) != 0.0) {
                all_zero = false;
                break;
            }
        if (all_zero) zero_rows.push_back(i);
    }
    if (zero_rows.empty() || zero_rows.size() == rows.rows()) return labels;

    std::vector<char> is_zero(rows.rows(), 0);
    for (const auto i : zero_rows) is_zero[i] = 1;
    for (const auto i : zero_rows) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t pick = rows.rows();
        for (std::size_t j = 0; j < rows.rows(); ++j) {
            if (is_zero[j]) continue;
            const double d = squared_distance(rows.row(i), rows.row(j));
            if (d < best) {
                best = d;
                pick = j;
            }
        }
        labels[i] = labels[pick];
    }
    return labels;
}

}  // namespace

std::vector<double> DegreePair::kept_d_r() const {
    std::vector<double> out;
    out.reserve(kept_landmarks.size());
    for (const auto j : kept_landmarks) out.push_back(d_r[j]);
    return out;
}

DegreePair degrees(const SparseAffinity& affinity) {
    DegreePair deg;
    deg.d_x.assign(affinity.n, 0.0);
    deg.d_r.assign(affinity.p, 0.0);
    for (std::size_t i = 0; i < affinity.n; ++i) {
        const auto cols = affinity.row_cols(i);
        const auto w = affinity.row_weights(i);
        double s = 0.0;
        for (std::uint32_t l = 0; l < affinity.k; ++l) {
            s += w[l];
            deg.d_r[cols[l]] += w[l];
        }
        if (!(s > 0.0))
            throw std::runtime_error("degrees: point row " + std::to_string(i) +
                                     " has zero degree (no neighbors)");
        deg.d_x[i] = s;
    }
    for (std::uint32_t j = 0; j < affinity.p; ++j)
        if (deg.d_r[j] > 0.0) deg.kept_landmarks.push_back(j);
    return deg;
}

Matrix reduced_laplacian(const SparseAffinity& affinity, const DegreePair& deg) {
    if (deg.d_x.size() != affinity.n || deg.d_r.size() != affinity.p)
        throw std::invalid_argument("reduced_laplacian: degree/affinity dimension mismatch");

    const std::size_t pr = deg.kept_landmarks.size();
    std::vector<std::uint32_t> col_to_kept(affinity.p, std::numeric_limits<std::uint32_t>::max());
    for (std::size_t s = 0; s < pr; ++s) col_to_kept[deg.kept_landmarks[s]] = s;

    Matrix l(pr, pr);
    for (std::size_t i = 0; i < affinity.n; ++i) {
        const auto cols = affinity.row_cols(i);
        const auto w = affinity.row_weights(i);
        const double inv = 1.0 / deg.d_x[i];
        for (std::uint32_t a = 0; a < affinity.k; ++a) {
            if (w[a] == 0.0) continue;  // zero weight = no edge; column may be pruned
            const std::uint32_t ka = col_to_kept[cols[a]];
            const double wa = w[a] * inv;
            for (std::uint32_t b = 0; b < affinity.k; ++b) {
                if (w[b] == 0.0) continue;
                l(ka, col_to_kept[cols[b]]) -= wa * w[b];
            }
        }
    }
    for (std::size_t s = 0; s < pr; ++s) l(s, s) += deg.d_r[deg.kept_landmarks[s]];
    return l;
}

ReducedSpectrum solve_reduced(const Matrix& l_r, const std::vector<double>& d_r,
                              std::uint32_t k) {
    const std::size_t pr = l_r.rows();
    if (l_r.cols() != pr) throw std::invalid_argument("solve_reduced: L_R must be square");
    if (d_r.size() != pr)
        throw std::invalid_argument("solve_reduced: degree vector size mismatch");
    if (k == 0 || k > pr)
        throw std::invalid_argument("solve_reduced: k out of range");
    for (const double v : d_r)
        if (!(v > 0.0))
            throw std::invalid_argument("solve_reduced: degrees must be strictly positive");

    // Symmetric-definite transform M = D^{-1/2} L D^{-1/2}.
    std::vector<double> inv_sqrt(pr);
    for (std::size_t i = 0; i < pr; ++i) inv_sqrt[i] = 1.0 / std::sqrt(d_r[i]);
    Matrix m(pr, pr);
    for (std::size_t i = 0; i < pr; ++i)
        for (std::size_t j = 0; j < pr; ++j) m(i, j) = l_r(i, j) * inv_sqrt[i] * inv_sqrt[j];

    const SymEigenResult eig = sym_eigen_decompose(std::move(m));

    ReducedSpectrum out;
    out.lambdas.resize(k);
    out.gammas.resize(k);
    out.v = Matrix(pr, k);
    for (std::uint32_t j = 0; j < k; ++j) {
        double lambda = eig.values[j];
        if (lambda < 0.0) lambda = 0.0;
        if (lambda > kLambdaCeil) lambda = kLambdaCeil;
        out.lambdas[j] = lambda;
        out.gammas[j] = 1.0 - std::sqrt(1.0 - lambda);
        // Back-transform v = D^{-1/2} w keeps D_R-orthonormality.
        for (std::size_t i = 0; i < pr; ++i) out.v(i, j) = eig.vectors(i, j) * inv_sqrt[i];
    }
    return out;
}

SpectralEmbedding lift(const SparseAffinity& affinity, const DegreePair& deg,
                       const ReducedSpectrum& spectrum) {
    const std::size_t n = affinity.n;
    const std::size_t k = spectrum.lambdas.size();
    for (const double g : spectrum.gammas)
        if (g >= 1.0 - 1e-9)
            throw std::runtime_error(
                "lift: eigenvalue at the disconnected-graph limit (gamma >= 1 - 1e-9)");

    std::vector<std::uint32_t> col_to_kept(affinity.p,
                                           std::numeric_limits<std::uint32_t>::max());
    for (std::size_t s = 0; s < deg.kept_landmarks.size(); ++s)
        col_to_kept[deg.kept_landmarks[s]] = s;

    SpectralEmbedding out;
    out.u = Matrix(n, k);
    std::vector<double> scale(k);
    for (std::size_t j = 0; j < k; ++j) scale[j] = 1.0 / (1.0 - spectrum.gammas[j]);

    for (std::size_t i = 0; i < n; ++i) {
        const auto cols = affinity.row_cols(i);
        const auto w = affinity.row_weights(i);
        const double inv_deg = 1.0 / deg.d_x[i];
        for (std::size_t j = 0; j < k; ++j) {
            double acc = 0.0;
            for (std::uint32_t l = 0; l < affinity.k; ++l)
                if (w[l] != 0.0) acc += w[l] * spectrum.v(col_to_kept[cols[l]], j);
            out.u(i, j) = acc * inv_deg * scale[j];
        }
    }
    out.u_normalized = normalize_rows_l1(out.u);
    return out;
}

std::vector<std::uint32_t> cluster_embedding(const SpectralEmbedding& embedding,
                                             std::uint32_t k, std::uint64_t seed) {
    return cluster_rows(embedding.u_normalized, k, seed);
}

BipartiteOracleResult full_bipartite_oracle(const SparseAffinity& affinity, std::uint32_t k,
                                            std::uint64_t seed) {
    const DegreePair deg = degrees(affinity);
    const std::size_t n = affinity.n;
    const std::size_t pr = deg.kept_landmarks.size();
    const std::size_t total = n + pr;
    if (total > 512)
        throw std::invalid_argument("full_bipartite_oracle: N + p exceeds the 512 test guard");
    if (k == 0 || k > total)
        throw std::invalid_argument("full_bipartite_oracle: k out of range");

    std::vector<std::uint32_t> col_to_kept(affinity.p,
                                           std::numeric_limits<std::uint32_t>::max());
    for (std::size_t s = 0; s < pr; ++s) col_to_kept[deg.kept_landmarks[s]] = s;

    // W = [[0, B], [B^T, 0]]; degree vector stacks d_x and d_r.
    Matrix w(total, total);
    for (std::size_t i = 0; i < n; ++i) {
        const auto cols = affinity.row_cols(i);
        const auto vals = affinity.row_weights(i);
        for (std::uint32_t l = 0; l < affinity.k; ++l) {
            if (vals[l] == 0.0) continue;
            const std::size_t j = n + col_to_kept[cols[l]];
            w(i, j) += vals[l];
            w(j, i) += vals[l];
        }
    }
    std::vector<double> d(total);
    for (std::size_t i = 0; i < n; ++i) d[i] = deg.d_x[i];
    for (std::size_t s = 0; s < pr; ++s) d[n + s] = deg.d_r[deg.kept_landmarks[s]];

    // M = D^{-1/2} (D - W) D^{-1/2}, then f = D^{-1/2} q per eigenvector q.
    std::vector<double> inv_sqrt(total);
    for (std::size_t i = 0; i < total; ++i) inv_sqrt[i] = 1.0 / std::sqrt(d[i]);
    Matrix m(total, total);
    for (std::size_t i = 0; i < total; ++i) {
        for (std::size_t j = 0; j < total; ++j)
            m(i, j) = -w(i, j) * inv_sqrt[i] * inv_sqrt[j];
        m(i, i) += 1.0;
    }

    const SymEigenResult eig = sym_eigen_decompose(std::move(m));

    BipartiteOracleResult out;
    out.gammas.resize(k);
    out.u = Matrix(n, k);
    for (std::uint32_t j = 0; j < k; ++j) {
        out.gammas[j] = std::max(0.0, eig.values[j]);
        for (std::size_t i = 0; i < n; ++i) out.u(i, j) = eig.vectors(i, j) * inv_sqrt[i];
    }
    out.labels = cluster_rows(normalize_rows_l1(out.u), k, seed);
    return out;
}

}  // namespace dncsc
