#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dncsc {

/// Joint counts between two labelings; label values are mapped to dense ids
/// in first-occurrence order.
struct Contingency {
    std::size_t rows = 0;  // distinct truth labels
    std::size_t cols = 0;  // distinct predicted labels
    std::size_t n = 0;
    std::vector<std::int64_t> counts;        // rows * cols
    std::vector<std::int64_t> row_marginals;
    std::vector<std::int64_t> col_marginals;

    std::int64_t at(std::size_t r, std::size_t c) const { return counts[r * cols + c]; }
};

Contingency contingency(std::span<const std::uint32_t> truth,
                        std::span<const std::uint32_t> pred);

/// Clustering accuracy under the best one-to-one mapping between predicted
/// and true clusters (exact rectangular assignment).
double accuracy(std::span<const std::uint32_t> truth, std::span<const std::uint32_t> pred);

/// Mutual information normalized by the joint entropy, natural log. Two
/// single-cluster partitions give 1 (0/0 convention).
double nmi(std::span<const std::uint32_t> truth, std::span<const std::uint32_t> pred);

}  // namespace dncsc
