#pragma once

#include <cstdint>
#include <vector>

#include "dncsc/matrix.hpp"

namespace dncsc {

struct KMeansResult {
    std::vector<std::uint32_t> assignments;  // length n, values in [0, k)
    Matrix centers;                          // k x d
    double rss = 0.0;                        // sum of squared point-to-center distances
    std::uint32_t iterations = 0;            // Lloyd iterations actually run
    std::vector<double> rss_history;         // rss after each iteration, non-increasing
};

/// Lloyd's algorithm from k-means++ seeds. Stops at max_iter or when the
/// assignment is stable. Empty clusters are repaired by moving the point
/// farthest from its own center into the empty cluster, so every cluster is
/// non-empty whenever k <= n. Deterministic in the seed; ties break toward
/// the lower center index.
KMeansResult kmeans(MatrixView points, std::uint32_t k, std::uint32_t max_iter,
                    std::uint64_t seed);

/// k-means on a uniform sample of min(p_prime, n) points; the remaining
/// points are attached to their nearest resulting center. Centers are the
/// ones computed on the sample, rss covers all n points. With p_prime >= n
/// the sample is the whole set and the result equals kmeans() for the same
/// seed.
KMeansResult light_kmeans(MatrixView points, std::uint32_t k, std::uint32_t p_prime,
                          std::uint32_t max_iter, std::uint64_t seed);

/// Index of the Euclidean-nearest center for each point; ties break toward
/// the lower center index.
std::vector<std::uint32_t> assign_nearest(MatrixView points, MatrixView centers);

}  // namespace dncsc
