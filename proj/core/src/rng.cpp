#include "dncsc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

namespace dncsc {

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller; u1 is kept away from 0 so log() stays finite.
    double u1 = uniform_double();
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
    const double u2 = uniform_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::vector<std::uint32_t> Rng::sample_without_replacement(std::uint32_t n, std::uint32_t m) {
    if (m > n) throw std::invalid_argument("sample_without_replacement: m > n");
    // Floyd's algorithm: O(m) memory regardless of n.
    std::unordered_set<std::uint32_t> chosen;
    chosen.reserve(m * 2);
    for (std::uint32_t j = n - m; j < n; ++j) {
        const auto t = static_cast<std::uint32_t>(uniform_below(j + 1));
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::uint32_t> out(chosen.begin(), chosen.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace dncsc
