#pragma once

#include <vector>

#include "dncsc/matrix.hpp"

namespace dncsc {

/// Full eigendecomposition of a real symmetric matrix.
struct SymEigenResult {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column j is the unit eigenvector of values[j]
};

/// Householder tridiagonalization followed by the implicit-shift QL
/// iteration, eigenvectors accumulated. Eigenvalues are returned ascending;
/// each eigenvector's sign is fixed so its largest-magnitude entry is
/// positive. Throws on non-convergence.
SymEigenResult sym_eigen_decompose(Matrix a);

}  // namespace dncsc
