#pragma once

#include <cstdint>
#include <vector>

#include "dncsc/matrix.hpp"
#include "dncsc/similarity.hpp"

namespace dncsc {

/// Row (point-side) and column (landmark-side) degree sums of the bipartite
/// affinity; landmark columns with zero degree are listed for pruning.
struct DegreePair {
    std::vector<double> d_x;                  // length N, all strictly positive
    std::vector<double> d_r;                  // length p, original indexing
    std::vector<std::uint32_t> kept_landmarks;  // columns with d_r > 0, ascending

    std::vector<double> kept_d_r() const;
};

DegreePair degrees(const SparseAffinity& affinity);

/// Dense symmetric reduced Laplacian D_R - B^T D_X^{-1} B over the retained
/// landmark columns.
Matrix reduced_laplacian(const SparseAffinity& affinity, const DegreePair& deg);

/// Bottom-k eigenpairs of the reduced generalized problem.
struct ReducedSpectrum {
    std::vector<double> lambdas;  // ascending, clamped to [0, 1 - 1e-9]
    Matrix v;                     // p' x k, D_R-orthonormal generalized eigenvectors
    std::vector<double> gammas;   // 1 - sqrt(1 - lambda)
};

/// Solves L_R v = lambda D_R v through the symmetric-definite transform
/// M = D_R^{-1/2} L_R D_R^{-1/2} and a dense symmetric eigensolve.
ReducedSpectrum solve_reduced(const Matrix& l_r, const std::vector<double>& d_r,
                              std::uint32_t k);

/// Point-side embedding lifted from the landmark-side eigenvectors, plus a
/// copy with every nonzero row scaled to unit 1-norm.
struct SpectralEmbedding {
    Matrix u;             // N x k
    Matrix u_normalized;  // N x k
};

SpectralEmbedding lift(const SparseAffinity& affinity, const DegreePair& deg,
                       const ReducedSpectrum& spectrum);

/// Final discretization: k-means on the normalized embedding (100 Lloyd
/// iterations cap).
std::vector<std::uint32_t> cluster_embedding(const SpectralEmbedding& embedding,
                                             std::uint32_t k, std::uint64_t seed);

/// Test-scale reference path: assembles the full (N+p) x (N+p) bipartite
/// graph, solves the dense generalized Laplacian problem directly and
/// clusters the point-side eigenvector block. Guarded to N + p <= 512.
struct BipartiteOracleResult {
    std::vector<double> gammas;           // bottom-k eigenvalues of the full problem
    Matrix u;                             // N x k point-side eigenvector block
    std::vector<std::uint32_t> labels;
};

BipartiteOracleResult full_bipartite_oracle(const SparseAffinity& affinity, std::uint32_t k,
                                            std::uint64_t seed = 0);

}  // namespace dncsc
