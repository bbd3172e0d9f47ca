#include "dncsc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace dncsc {

namespace {

std::vector<std::uint32_t> dense_ids(std::span<const std::uint32_t> labels,
                                     std::size_t& distinct) {
    std::unordered_map<std::uint32_t, std::uint32_t> map;
    std::vector<std::uint32_t> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto [it, inserted] =
            map.try_emplace(labels[i], static_cast<std::uint32_t>(map.size()));
        out[i] = it->second;
    }
    distinct = map.size();
    return out;
}

/// Minimum-cost perfect assignment on a square cost matrix (Jonker-style
/// potentials, O(dim^3)). Returns col_of_row.
std::vector<std::size_t> min_cost_assignment(const std::vector<std::int64_t>& cost,
                                             std::size_t dim) {
    const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
    std::vector<std::int64_t> u(dim + 1, 0), v(dim + 1, 0);
    std::vector<std::size_t> p(dim + 1, 0), way(dim + 1, 0);
    for (std::size_t i = 1; i <= dim; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<std::int64_t> minv(dim + 1, inf);
        std::vector<char> used(dim + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            std::int64_t delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= dim; ++j) {
                if (used[j]) continue;
                const std::int64_t cur = cost[(i0 - 1) * dim + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= dim; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<std::size_t> col_of_row(dim, 0);
    for (std::size_t j = 1; j <= dim; ++j)
        if (p[j] != 0) col_of_row[p[j] - 1] = j - 1;
    return col_of_row;
}

}  // namespace

Contingency contingency(std::span<const std::uint32_t> truth,
                        std::span<const std::uint32_t> pred) {
    if (truth.size() != pred.size())
        throw std::invalid_argument("contingency: label vectors differ in length");
    if (truth.empty()) throw std::invalid_argument("contingency: empty labels");

    Contingency c;
    c.n = truth.size();
    const auto t = dense_ids(truth, c.rows);
    const auto q = dense_ids(pred, c.cols);
    c.counts.assign(c.rows * c.cols, 0);
    c.row_marginals.assign(c.rows, 0);
    c.col_marginals.assign(c.cols, 0);
    for (std::size_t i = 0; i < c.n; ++i) {
        ++c.counts[t[i] * c.cols + q[i]];
        ++c.row_marginals[t[i]];
        ++c.col_marginals[q[i]];
    }
    return c;
}

double accuracy(std::span<const std::uint32_t> truth, std::span<const std::uint32_t> pred) {
    const Contingency c = contingency(truth, pred);
    const std::size_t dim = std::max(c.rows, c.cols);

    // Max-weight matching as min-cost: cost = max_count - count, dummies 0.
    std::int64_t max_count = 0;
    for (const auto v : c.counts) max_count = std::max(max_count, v);
    std::vector<std::int64_t> cost(dim * dim, max_count);
    for (std::size_t r = 0; r < c.rows; ++r)
        for (std::size_t q = 0; q < c.cols; ++q)
            cost[r * dim + q] = max_count - c.at(r, q);

    const auto col_of_row = min_cost_assignment(cost, dim);
    std::int64_t matched = 0;
    for (std::size_t r = 0; r < c.rows; ++r)
        if (col_of_row[r] < c.cols) matched += c.at(r, col_of_row[r]);
    return static_cast<double>(matched) / static_cast<double>(c.n);
}

double nmi(std::span<const std::uint32_t> truth, std::span<const std::uint32_t> pred) {
    const Contingency c = contingency(truth, pred);
    const double n = static_cast<double>(c.n);

    double mi = 0.0;
    double joint_entropy = 0.0;
    for (std::size_t r = 0; r < c.rows; ++r) {
        for (std::size_t q = 0; q < c.cols; ++q) {
            const std::int64_t cnt = c.at(r, q);
            if (cnt == 0) continue;  // 0 ln 0 = 0
            const double joint = cnt / n;
            const double pt = c.row_marginals[r] / n;
            const double pc = c.col_marginals[q] / n;
            mi += joint * std::log(joint / (pt * pc));
            joint_entropy -= joint * std::log(joint);
        }
    }
    if (joint_entropy <= 0.0) return 1.0;  // both partitions are one cluster
    const double value = mi / joint_entropy;
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace dncsc
