#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "dncsc/landmark.hpp"
#include "dncsc/matrix.hpp"

namespace dncsc {

enum class KnnMethod { kApprox, kExact };

/// Per-point nearest-landmark lists, row-major with a fixed width of k
/// entries sorted by ascending squared distance (ties toward the lower
/// landmark index).
struct NeighborLists {
    std::uint32_t k = 0;
    std::size_t n = 0;
    std::size_t p = 0;                   // landmark count the indices refer to
    std::vector<std::uint32_t> indices;  // n * k
    std::vector<double> sq_dists;        // n * k
    KnnMethod method = KnnMethod::kExact;

    std::span<const std::uint32_t> row_indices(std::size_t i) const {
        return {indices.data() + i * k, k};
    }
    std::span<const double> row_sq_dists(std::size_t i) const {
        return {sq_dists.data() + i * k, k};
    }
};

/// k_prime nearest landmarks of every landmark, the landmark itself first.
struct LandmarkKnnTable {
    std::uint32_t k_prime = 0;
    std::size_t p = 0;
    std::vector<std::uint32_t> neighbors;  // p * k_prime

    std::span<const std::uint32_t> row(std::size_t j) const {
        return {neighbors.data() + j * k_prime, k_prime};
    }
};

LandmarkKnnTable landmark_knn_table(const LandmarkSet& landmarks, std::uint32_t k_prime);

/// Approximate K-nearest landmarks: candidates for point x are the k_prime
/// nearest landmarks of the subset center x belongs to; the K nearest among
/// those candidates are kept with exact distances.
NeighborLists approx_knn(MatrixView points, const LandmarkSet& landmarks, std::uint32_t K,
                         std::uint32_t k_prime);

/// Exact K-nearest landmarks over all p landmarks.
NeighborLists exact_knn(MatrixView points, const LandmarkSet& landmarks, std::uint32_t K);

struct BandwidthPolicy {
    enum class Kind { kMeanKnn, kFixed };
    Kind kind = Kind::kMeanKnn;
    double value = 0.0;

    static BandwidthPolicy mean_knn() { return {Kind::kMeanKnn, 0.0}; }
    static BandwidthPolicy fixed(double v) { return {Kind::kFixed, v}; }
};

/// mean_knn: sigma^2 = mean of all stored squared distances (sigma = 1 when
/// they are all zero). fixed(v): sigma = v.
double estimate_bandwidth(const NeighborLists& neighbors, BandwidthPolicy policy);

/// Row-sparse N x p cross-affinity with at most k entries per row.
struct SparseAffinity {
    std::size_t n = 0;
    std::size_t p = 0;
    std::uint32_t k = 0;
    std::vector<std::uint32_t> cols;  // n * k
    std::vector<double> weights;      // n * k
    double sigma = 0.0;

    std::span<const std::uint32_t> row_cols(std::size_t i) const {
        return {cols.data() + i * k, k};
    }
    std::span<const double> row_weights(std::size_t i) const {
        return {weights.data() + i * k, k};
    }
};

/// Gaussian weights exp(-d^2 / (2 sigma^2)) on the stored neighbor pattern.
SparseAffinity build_affinity(const NeighborLists& neighbors, double sigma);

/// Debug dump, one "row col weight" line per stored entry, 17 significant
/// digits.
void write_coordinate_format(const SparseAffinity& affinity, std::ostream& out);

}  // namespace dncsc
