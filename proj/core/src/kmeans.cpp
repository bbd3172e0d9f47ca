#include "dncsc/kmeans.hpp"

#include <limits>
#include <stdexcept>

#include "dncsc/counters.hpp"
#include "dncsc/rng.hpp"

namespace dncsc {

namespace {

constexpr std::uint64_t kSampleStream = 0x6c69676874ULL;  // light_kmeans sample stage

/// One assignment pass: nearest center per point, distance to it, and the
/// number of points whose assignment changed.
std::size_t assign_pass(MatrixView points, const Matrix& centers,
                        std::vector<std::uint32_t>& assign, std::vector<double>& best_dist) {
    const std::size_t n = points.rows();
    const std::size_t k = centers.rows();
    std::size_t changed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = points.row(i);
        std::uint32_t best = 0;
        double bd = squared_distance(x, centers.row(0));
        for (std::size_t c = 1; c < k; ++c) {
            const double d = squared_distance(x, centers.row(c));
            if (d < bd) {
                bd = d;
                best = static_cast<std::uint32_t>(c);
            }
        }
        if (assign[i] != best) {
            assign[i] = best;
            ++changed;
        }
        best_dist[i] = bd;
    }
    detail::add_distance_evals(static_cast<std::uint64_t>(n) * k);
    return changed;
}

Matrix kmeanspp_seeds(MatrixView points, std::uint32_t k, Rng& rng) {
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    Matrix centers(k, d);
    std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());

    auto copy_point = [&](std::uint32_t c, std::size_t i) {
        const auto x = points.row(i);
        for (std::size_t j = 0; j < d; ++j) centers(c, j) = x[j];
    };

    copy_point(0, static_cast<std::size_t>(rng.uniform_below(n)));
    for (std::uint32_t c = 1; c <= k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dd = squared_distance(points.row(i), centers.row(c - 1));
            if (dd < min_dist[i]) min_dist[i] = dd;
            total += min_dist[i];
        }
        detail::add_distance_evals(n);
        if (c == k) break;
        std::size_t pick;
        if (total > 0.0) {
            // Sample proportionally to the squared distance to the nearest
            // chosen center.
            const double r = rng.uniform_double() * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += min_dist[i];
                if (acc > r) {
                    pick = i;
                    break;
                }
            }
        } else {
            // All points coincide with chosen centers; any point will do.
            pick = static_cast<std::size_t>(rng.uniform_below(n));
        }
        copy_point(c, pick);
    }
    return centers;
}

}  // namespace

KMeansResult kmeans(MatrixView points, std::uint32_t k, std::uint32_t max_iter,
                    std::uint64_t seed) {
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    if (k == 0) throw std::invalid_argument("kmeans: k must be positive");
    if (k > n) throw std::invalid_argument("kmeans: k exceeds the number of points");
    if (max_iter == 0) throw std::invalid_argument("kmeans: max_iter must be positive");

    Rng rng(seed);
    KMeansResult res;
    res.centers = kmeanspp_seeds(points, k, rng);
    res.assignments.assign(n, 0);
    std::vector<double> best_dist(n, 0.0);
    std::vector<std::uint32_t> counts(k, 0);

    for (std::uint32_t it = 1; it <= max_iter; ++it) {
        std::size_t changed = assign_pass(points, res.centers, res.assignments, best_dist);

        counts.assign(k, 0);
        for (std::size_t i = 0; i < n; ++i) ++counts[res.assignments[i]];

        // Repair: each empty cluster steals the point farthest from its own
        // center, taken from a cluster that keeps at least one member.
        for (std::uint32_t c = 0; c < k; ++c) {
            if (counts[c] != 0) continue;
            std::size_t donor = n;
            double worst = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[res.assignments[i]] < 2) continue;
                if (best_dist[i] > worst) {
                    worst = best_dist[i];
                    donor = i;
                }
            }
            if (donor == n) continue;  // unreachable for k <= n
            --counts[res.assignments[donor]];
            res.assignments[donor] = c;
            counts[c] = 1;
            best_dist[donor] = 0.0;
            ++changed;
        }

        if (changed == 0 && it > 1) break;

        // Center update: each center becomes the mean of its members.
        Matrix sums(k, d);
        for (std::size_t i = 0; i < n; ++i) {
            const auto x = points.row(i);
            auto s = sums.row(res.assignments[i]);
            for (std::size_t j = 0; j < d; ++j) s[j] += x[j];
        }
        for (std::uint32_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            const double inv = 1.0 / counts[c];
            for (std::size_t j = 0; j < d; ++j) res.centers(c, j) = sums(c, j) * inv;
        }

        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            rss += squared_distance(points.row(i), res.centers.row(res.assignments[i]));
        detail::add_distance_evals(n);
        res.rss = rss;
        res.rss_history.push_back(rss);
        res.iterations = it;
    }
    return res;
}

KMeansResult light_kmeans(MatrixView points, std::uint32_t k, std::uint32_t p_prime,
                          std::uint32_t max_iter, std::uint64_t seed) {
    const std::size_t n = points.rows();
    if (p_prime < k) throw std::invalid_argument("light_kmeans: p_prime below k");
    if (p_prime >= n) return kmeans(points, k, max_iter, seed);

    Rng sample_rng(mix_seed(seed, kSampleStream));
    const auto sample =
        sample_rng.sample_without_replacement(static_cast<std::uint32_t>(n), p_prime);

    const std::size_t d = points.cols();
    Matrix subset(p_prime, d);
    for (std::size_t s = 0; s < sample.size(); ++s) {
        const auto x = points.row(sample[s]);
        auto dst = subset.row(s);
        for (std::size_t j = 0; j < d; ++j) dst[j] = x[j];
    }

    const KMeansResult on_sample = kmeans(subset, k, max_iter, seed);

    KMeansResult res;
    res.centers = on_sample.centers;
    res.iterations = on_sample.iterations;
    res.rss_history = on_sample.rss_history;
    res.assignments.assign(n, 0);

    std::vector<char> in_sample(n, 0);
    for (std::size_t s = 0; s < sample.size(); ++s) {
        in_sample[sample[s]] = 1;
        res.assignments[sample[s]] = on_sample.assignments[s];
    }

    // Single pass attaching the complement to its nearest sample center.
    for (std::size_t i = 0; i < n; ++i) {
        if (in_sample[i]) continue;
        const auto x = points.row(i);
        std::uint32_t best = 0;
        double bd = squared_distance(x, res.centers.row(0));
        for (std::uint32_t c = 1; c < k; ++c) {
            const double dd = squared_distance(x, res.centers.row(c));
            if (dd < bd) {
                bd = dd;
                best = c;
            }
        }
        res.assignments[i] = best;
    }
    detail::add_distance_evals(static_cast<std::uint64_t>(n - p_prime) * k);

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        rss += squared_distance(points.row(i), res.centers.row(res.assignments[i]));
    detail::add_distance_evals(n);
    res.rss = rss;
    return res;
}

std::vector<std::uint32_t> assign_nearest(MatrixView points, MatrixView centers) {
    if (centers.rows() == 0) throw std::invalid_argument("assign_nearest: no centers");
    if (points.cols() != centers.cols())
        throw std::invalid_argument("assign_nearest: dimension mismatch");
    const std::size_t n = points.rows();
    const std::size_t k = centers.rows();
    std::vector<std::uint32_t> assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = points.row(i);
        std::uint32_t best = 0;
        double bd = squared_distance(x, centers.row(0));
        for (std::size_t c = 1; c < k; ++c) {
            const double d = squared_distance(x, centers.row(c));
            if (d < bd) {
                bd = d;
                best = static_cast<std::uint32_t>(c);
            }
        }
        assign[i] = best;
    }
    detail::add_distance_evals(static_cast<std::uint64_t>(n) * k);
    return assign;
}

}  // namespace dncsc
