#include "dncsc/landmark.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dncsc/counters.hpp"
#include "dncsc/kmeans.hpp"
#include "dncsc/rng.hpp"

namespace dncsc {

const char* selection_name(SelectionMethod method) {
    switch (method) {
        case SelectionMethod::kDnc: return "dnc";
        case SelectionMethod::kKmeans: return "kmeans";
        case SelectionMethod::kRandom: return "random";
    }
    return "unknown";
}

double LandmarkSet::total_rss() const {
    return std::accumulate(subset_rss.begin(), subset_rss.end(), 0.0);
}

std::vector<std::uint32_t> allocate_counts(const std::vector<double>& rss, std::uint32_t p,
                                           std::uint32_t alpha) {
    const std::size_t m = rss.size();
    if (m == 0) throw std::invalid_argument("allocate_counts: no subsets");
    if (p < m) throw std::invalid_argument("allocate_counts: p below the subset count");
    if (alpha < 2) throw std::invalid_argument("allocate_counts: alpha below 2");

    double total = 0.0;
    for (const double z : rss) {
        if (z < 0.0) throw std::invalid_argument("allocate_counts: negative rss");
        total += z;
    }

    // Proportional share capped at alpha; an all-zero rss vector degrades to
    // a uniform share.
    std::vector<double> capped(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double raw = total > 0.0 ? rss[i] / total * p : static_cast<double>(p) / m;
        capped[i] = std::min(raw, static_cast<double>(alpha));
    }

    std::vector<std::uint32_t> counts(m);
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < m; ++i) {
        counts[i] = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(capped[i]));
        assigned += counts[i];
    }

    // Order for handing out (or taking back) fractional seats: larger
    // remainder first, then larger rss, then lower index.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    auto frac = [&](std::size_t i) { return capped[i] - std::floor(capped[i]); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double fa = frac(a), fb = frac(b);
        if (fa != fb) return fa > fb;
        if (rss[a] != rss[b]) return rss[a] > rss[b];
        return a < b;
    });

    std::int64_t budget = static_cast<std::int64_t>(p) - assigned;
    if (budget > 0) {
        // One extra seat per subset at most, and never beyond alpha or the
        // ceiling of the proportional share.
        for (const std::size_t i : order) {
            if (budget == 0) break;
            if (frac(i) <= 0.0) continue;
            if (counts[i] >= alpha) continue;
            if (counts[i] + 1 > std::max(1.0, std::ceil(capped[i]))) continue;
            ++counts[i];
            --budget;
        }
    } else if (budget < 0) {
        // Minimum-1 seats pushed the total over p; take seats back from the
        // least-justified subsets that can spare them.
        for (auto it = order.rbegin(); it != order.rend() && budget < 0; ++it) {
            while (counts[*it] > 1 && budget < 0) {
                --counts[*it];
                ++budget;
            }
        }
    }
    return counts;
}

namespace {

struct Subset {
    std::vector<std::uint32_t> members;
    std::vector<double> center;
    double rss = 0.0;
    std::uint64_t stream;  // RNG stream id derived from the creation path
};

/// Splits `parent` into the clusters found by k-means (light variant when
/// the subset outgrows p_prime). Children keep creation order = cluster id.
std::vector<Subset> divide_subset(MatrixView points, const Subset& parent, std::uint32_t k,
                                  std::uint32_t p_prime, std::uint32_t max_iter) {
    const std::size_t sz = parent.members.size();
    const std::size_t d = points.cols();
    Matrix local(sz, d);
    for (std::size_t i = 0; i < sz; ++i) {
        const auto src = points.row(parent.members[i]);
        auto dst = local.row(i);
        for (std::size_t j = 0; j < d; ++j) dst[j] = src[j];
    }

    const std::uint64_t seed = mix_seed(parent.stream, 0);
    const KMeansResult km = sz > p_prime ? light_kmeans(local, k, p_prime, max_iter, seed)
                                         : kmeans(local, k, max_iter, seed);

    std::vector<Subset> children(k);
    for (std::uint32_t c = 0; c < k; ++c) {
        children[c].center.assign(km.centers.row(c).begin(), km.centers.row(c).end());
        children[c].stream = mix_seed(parent.stream, c + 1);
    }
    for (std::size_t i = 0; i < sz; ++i) {
        const std::uint32_t c = km.assignments[i];
        children[c].members.push_back(parent.members[i]);
        children[c].rss += squared_distance(local.row(i), km.centers.row(c));
    }
    detail::add_distance_evals(sz);

    // k-means repair guarantees non-empty clusters, but stay safe.
    std::erase_if(children, [](const Subset& s) { return s.members.empty(); });
    return children;
}

LandmarkSet finish(MatrixView points, std::vector<Subset> subsets, SelectionMethod method,
                   std::uint32_t requested, std::uint32_t rounds) {
    const std::size_t d = points.cols();
    LandmarkSet out;
    out.method = method;
    out.requested = requested;
    out.rounds = rounds;
    out.centers = Matrix(subsets.size(), d);
    out.subset_rss.resize(subsets.size());
    out.assignment.assign(points.rows(), 0);
    for (std::size_t s = 0; s < subsets.size(); ++s) {
        auto dst = out.centers.row(s);
        for (std::size_t j = 0; j < d; ++j) dst[j] = subsets[s].center[j];
        out.subset_rss[s] = subsets[s].rss;
        for (const std::uint32_t i : subsets[s].members)
            out.assignment[i] = static_cast<std::uint32_t>(s);
    }
    return out;
}

}  // namespace

LandmarkSet select_landmarks_dnc(MatrixView points, std::uint32_t p, std::uint32_t alpha,
                                 std::uint32_t p_prime, std::uint32_t max_iter,
                                 std::uint64_t seed) {
    const std::size_t n = points.rows();
    if (p == 0) throw std::invalid_argument("select_landmarks_dnc: p must be positive");
    if (alpha < 2) throw std::invalid_argument("select_landmarks_dnc: alpha below 2");
    if (p_prime < alpha)
        throw std::invalid_argument("select_landmarks_dnc: p_prime below alpha");
    if (n == 0) throw std::invalid_argument("select_landmarks_dnc: empty input");

    if (p >= n) {
        // Degenerate: every point is its own landmark.
        LandmarkSet out;
        out.method = SelectionMethod::kDnc;
        out.requested = p;
        out.centers = Matrix(n, points.cols());
        out.assignment.resize(n);
        out.subset_rss.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto src = points.row(i);
            auto dst = out.centers.row(i);
            for (std::size_t j = 0; j < points.cols(); ++j) dst[j] = src[j];
            out.assignment[i] = static_cast<std::uint32_t>(i);
        }
        return out;
    }

    std::vector<Subset> subsets(1);
    subsets[0].members.resize(n);
    std::iota(subsets[0].members.begin(), subsets[0].members.end(), 0);
    subsets[0].center.assign(points.cols(), 0.0);
    subsets[0].rss = 1.0;  // placeholder; round one always divides the root
    subsets[0].stream = mix_seed(seed, 0);

    // Termination safety bound on top of the expected ceil(log_alpha p).
    const std::uint32_t max_rounds =
        static_cast<std::uint32_t>(std::ceil(std::log(static_cast<double>(p)) /
                                             std::log(static_cast<double>(alpha)))) +
        p + 1;

    std::uint32_t rounds = 0;
    while (subsets.size() < p && rounds < max_rounds) {
        std::vector<double> rss(subsets.size());
        for (std::size_t i = 0; i < subsets.size(); ++i) rss[i] = subsets[i].rss;
        std::vector<std::uint32_t> targets = allocate_counts(rss, p, alpha);
        for (std::size_t i = 0; i < subsets.size(); ++i)
            targets[i] = std::min<std::uint32_t>(
                targets[i], static_cast<std::uint32_t>(subsets[i].members.size()));

        bool divisible = false;
        for (std::size_t i = 0; i < subsets.size(); ++i)
            if (targets[i] >= 2) divisible = true;

        if (!divisible) {
            // Proportional targets stalled; force-divide the worst divisible
            // subset so the round count keeps shrinking the gap to p.
            std::size_t pick = subsets.size();
            for (std::size_t i = 0; i < subsets.size(); ++i) {
                if (subsets[i].members.size() < 2) continue;
                if (pick == subsets.size() || subsets[i].rss > subsets[pick].rss) pick = i;
            }
            if (pick == subsets.size()) break;  // nothing left to divide
            const auto budget =
                static_cast<std::uint32_t>(p - subsets.size() + 1);
            targets[pick] = std::min<std::uint32_t>(
                {alpha, static_cast<std::uint32_t>(subsets[pick].members.size()), budget});
        }

        std::vector<Subset> next;
        next.reserve(p);
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            if (targets[i] >= 2 && subsets[i].members.size() >= 2) {
                auto children =
                    divide_subset(points, subsets[i], targets[i], p_prime, max_iter);
                for (auto& ch : children) next.push_back(std::move(ch));
            } else {
                next.push_back(std::move(subsets[i]));
            }
        }
        ++rounds;

#ifndef NDEBUG
        // Subsets partition the index set after every round.
        {
            std::vector<char> seen(n, 0);
            std::size_t covered = 0;
            for (const auto& s : next) {
                assert(!s.members.empty());
                for (const auto m : s.members) {
                    assert(!seen[m]);
                    seen[m] = 1;
                    ++covered;
                }
            }
            assert(covered == n);
        }
#endif

        if (next.size() == subsets.size()) {
            subsets = std::move(next);
            break;  // no growth possible; return what exists
        }
        subsets = std::move(next);
    }

    // Root rss was a placeholder; recompute the trivial single-subset case.
    if (subsets.size() == 1) {
        auto& s = subsets[0];
        s.center.assign(points.cols(), 0.0);
        for (const auto i : s.members) {
            const auto x = points.row(i);
            for (std::size_t j = 0; j < points.cols(); ++j) s.center[j] += x[j];
        }
        for (auto& v : s.center) v /= static_cast<double>(n);
        s.rss = 0.0;
        for (const auto i : s.members)
            s.rss += squared_distance(points.row(i), std::span<const double>(s.center));
    }

    return finish(points, std::move(subsets), SelectionMethod::kDnc, p, rounds);
}

LandmarkSet select_landmarks_kmeans(MatrixView points, std::uint32_t p,
                                    std::uint32_t max_iter, std::uint64_t seed) {
    if (p > points.rows())
        throw std::invalid_argument("select_landmarks_kmeans: p exceeds the point count");
    const KMeansResult km = kmeans(points, p, max_iter, seed);

    LandmarkSet out;
    out.method = SelectionMethod::kKmeans;
    out.requested = p;
    out.centers = km.centers;
    out.assignment = km.assignments;
    out.subset_rss.assign(p, 0.0);
    for (std::size_t i = 0; i < points.rows(); ++i)
        out.subset_rss[km.assignments[i]] +=
            squared_distance(points.row(i), km.centers.row(km.assignments[i]));
    detail::add_distance_evals(points.rows());
    return out;
}

LandmarkSet select_landmarks_random(MatrixView points, std::uint32_t p, std::uint64_t seed) {
    const std::size_t n = points.rows();
    if (p == 0) throw std::invalid_argument("select_landmarks_random: p must be positive");
    if (p > n) throw std::invalid_argument("select_landmarks_random: p exceeds the point count");

    Rng rng(seed);
    const auto chosen = rng.sample_without_replacement(static_cast<std::uint32_t>(n), p);

    LandmarkSet out;
    out.method = SelectionMethod::kRandom;
    out.requested = p;
    out.centers = Matrix(p, points.cols());
    for (std::size_t s = 0; s < chosen.size(); ++s) {
        const auto src = points.row(chosen[s]);
        auto dst = out.centers.row(s);
        for (std::size_t j = 0; j < points.cols(); ++j) dst[j] = src[j];
    }
    out.assignment = assign_nearest(points, out.centers);
    out.subset_rss.assign(p, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        out.subset_rss[out.assignment[i]] +=
            squared_distance(points.row(i), out.centers.row(out.assignment[i]));
    detail::add_distance_evals(n);
    return out;
}

}  // namespace dncsc
