#include "dncsc/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "dncsc/counters.hpp"

namespace dncsc {

namespace {

struct Candidate {
    double sq_dist;
    std::uint32_t index;
};

/// Keeps the K smallest candidates sorted by (distance, index).
void select_k_smallest(std::vector<Candidate>& cands, std::uint32_t K) {
    auto cmp = [](const Candidate& a, const Candidate& b) {
        if (a.sq_dist != b.sq_dist) return a.sq_dist < b.sq_dist;
        return a.index < b.index;
    };
    if (cands.size() > K) {
        std::nth_element(cands.begin(), cands.begin() + K, cands.end(), cmp);
        cands.resize(K);
    }
    std::sort(cands.begin(), cands.end(), cmp);
}

}  // namespace

LandmarkKnnTable landmark_knn_table(const LandmarkSet& landmarks, std::uint32_t k_prime) {
    const std::size_t p = landmarks.size();
    if (k_prime == 0) throw std::invalid_argument("landmark_knn_table: k_prime must be positive");
    if (k_prime > p) throw std::invalid_argument("landmark_knn_table: k_prime exceeds p");

    LandmarkKnnTable table;
    table.k_prime = k_prime;
    table.p = p;
    table.neighbors.resize(p * k_prime);

    std::vector<Candidate> cands(p);
    for (std::size_t j = 0; j < p; ++j) {
        const auto rj = landmarks.centers.row(j);
        for (std::size_t l = 0; l < p; ++l)
            cands[l] = {squared_distance(rj, landmarks.centers.row(l)),
                        static_cast<std::uint32_t>(l)};
        // The landmark itself is the first entry even if another landmark
        // coincides with it.
        auto cmp = [j](const Candidate& a, const Candidate& b) {
            if (a.sq_dist != b.sq_dist) return a.sq_dist < b.sq_dist;
            const std::uint64_t ia = a.index == j ? 0 : a.index + 1ULL;
            const std::uint64_t ib = b.index == j ? 0 : b.index + 1ULL;
            return ia < ib;
        };
        std::nth_element(cands.begin(), cands.begin() + k_prime, cands.end(), cmp);
        std::sort(cands.begin(), cands.begin() + k_prime, cmp);
        for (std::uint32_t l = 0; l < k_prime; ++l)
            table.neighbors[j * k_prime + l] = cands[l].index;
    }
    detail::add_distance_evals(static_cast<std::uint64_t>(p) * p);
    return table;
}

NeighborLists approx_knn(MatrixView points, const LandmarkSet& landmarks, std::uint32_t K,
                         std::uint32_t k_prime) {
    const std::size_t n = points.rows();
    const std::size_t p = landmarks.size();
    if (K == 0) throw std::invalid_argument("approx_knn: K must be positive");
    if (K > k_prime) throw std::invalid_argument("approx_knn: K exceeds k_prime");
    if (landmarks.assignment.size() != n)
        throw std::invalid_argument("approx_knn: landmark assignment does not cover the points");

    const LandmarkKnnTable table = landmark_knn_table(landmarks, k_prime);

    NeighborLists out;
    out.k = K;
    out.n = n;
    out.p = p;
    out.method = KnnMethod::kApprox;
    out.indices.resize(n * K);
    out.sq_dists.resize(n * K);

    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = points.row(i);
        const auto candidates = table.row(landmarks.assignment[i]);
        cands.clear();
        for (const std::uint32_t j : candidates)
            cands.push_back({squared_distance(x, landmarks.centers.row(j)), j});
        select_k_smallest(cands, K);
        for (std::uint32_t l = 0; l < K; ++l) {
            out.indices[i * K + l] = cands[l].index;
            out.sq_dists[i * K + l] = cands[l].sq_dist;
        }
    }
    detail::add_distance_evals(static_cast<std::uint64_t>(n) * k_prime);
    return out;
}

NeighborLists exact_knn(MatrixView points, const LandmarkSet& landmarks, std::uint32_t K) {
    const std::size_t n = points.rows();
    const std::size_t p = landmarks.size();
    if (K == 0) throw std::invalid_argument("exact_knn: K must be positive");
    if (K > p) throw std::invalid_argument("exact_knn: K exceeds p");

    NeighborLists out;
    out.k = K;
    out.n = n;
    out.p = p;
    out.method = KnnMethod::kExact;
    out.indices.resize(n * K);
    out.sq_dists.resize(n * K);

    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = points.row(i);
        cands.clear();
        for (std::size_t j = 0; j < p; ++j)
            cands.push_back(
                {squared_distance(x, landmarks.centers.row(j)), static_cast<std::uint32_t>(j)});
        select_k_smallest(cands, K);
        for (std::uint32_t l = 0; l < K; ++l) {
            out.indices[i * K + l] = cands[l].index;
            out.sq_dists[i * K + l] = cands[l].sq_dist;
        }
    }
    detail::add_distance_evals(static_cast<std::uint64_t>(n) * p);
    return out;
}

double estimate_bandwidth(const NeighborLists& neighbors, BandwidthPolicy policy) {
    if (policy.kind == BandwidthPolicy::Kind::kFixed) {
        if (!(policy.value > 0.0))
            throw std::invalid_argument("estimate_bandwidth: fixed sigma must be positive");
        return policy.value;
    }
    if (neighbors.sq_dists.empty())
        throw std::invalid_argument("estimate_bandwidth: empty neighbor lists");
    double sum = 0.0;
    for (const double d : neighbors.sq_dists) sum += d;
    const double mean = sum / static_cast<double>(neighbors.sq_dists.size());
    return mean > 0.0 ? std::sqrt(mean) : 1.0;
}

SparseAffinity build_affinity(const NeighborLists& neighbors, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("build_affinity: sigma must be positive");

    SparseAffinity out;
    out.n = neighbors.n;
    out.p = neighbors.p;
    out.k = neighbors.k;
    out.sigma = sigma;
    out.cols = neighbors.indices;
    out.weights.resize(neighbors.sq_dists.size());
    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (std::size_t i = 0; i < neighbors.sq_dists.size(); ++i)
        out.weights[i] = std::exp(-neighbors.sq_dists[i] * inv);
    return out;
}

void write_coordinate_format(const SparseAffinity& affinity, std::ostream& out) {
    char buf[48];
    for (std::size_t i = 0; i < affinity.n; ++i) {
        const auto cols = affinity.row_cols(i);
        const auto w = affinity.row_weights(i);
        for (std::uint32_t l = 0; l < affinity.k; ++l) {
            std::snprintf(buf, sizeof buf, "%zu %u %.17g\n", i, cols[l], w[l]);
            out << buf;
        }
    }
}

}  // namespace dncsc
