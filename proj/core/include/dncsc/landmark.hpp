#pragma once

#include <cstdint>
#include <vector>

#include "dncsc/matrix.hpp"

namespace dncsc {

enum class SelectionMethod { kDnc, kKmeans, kRandom };

const char* selection_name(SelectionMethod method);

/// p landmarks given as subset centers, plus the subset each point belongs
/// to and the residual sum of squares of every subset.
struct LandmarkSet {
    Matrix centers;                           // p x d
    std::vector<std::uint32_t> assignment;    // length N, values in [0, p)
    std::vector<double> subset_rss;           // length p
    SelectionMethod method = SelectionMethod::kDnc;
    std::uint32_t requested = 0;  // landmarks asked for; centers.rows() can be
                                  // smaller on degenerate input
    std::uint32_t rounds = 0;     // dividing rounds performed (dnc only)

    std::uint32_t size() const { return static_cast<std::uint32_t>(centers.rows()); }
    double total_rss() const;
};

/// Per-subset dividing targets proportional to subset RSS, each capped at
/// alpha. Values are integerized by flooring (minimum 1) and handing the
/// remaining budget out by largest fractional remainder; no subset exceeds
/// alpha or the ceiling of its proportional share, so the total can fall
/// short of p when the caps bind.
std::vector<std::uint32_t> allocate_counts(const std::vector<double>& rss, std::uint32_t p,
                                           std::uint32_t alpha);

/// Divide-and-conquer selection: recursively split subsets, at most alpha
/// new parts per split, until p subsets exist. Splits of subsets larger than
/// p_prime run light-k-means, smaller ones plain k-means. Deterministic in
/// the seed regardless of dividing order.
LandmarkSet select_landmarks_dnc(MatrixView points, std::uint32_t p, std::uint32_t alpha,
                                 std::uint32_t p_prime, std::uint32_t max_iter,
                                 std::uint64_t seed);

/// Baseline: one k-means run with k = p.
LandmarkSet select_landmarks_kmeans(MatrixView points, std::uint32_t p,
                                    std::uint32_t max_iter, std::uint64_t seed);

/// Baseline: p points sampled without replacement; assignment by nearest
/// center.
LandmarkSet select_landmarks_random(MatrixView points, std::uint32_t p, std::uint64_t seed);

}  // namespace dncsc
