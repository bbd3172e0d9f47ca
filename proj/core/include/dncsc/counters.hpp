#pragma once

#include <atomic>
#include <cstdint>

namespace dncsc {

/// Process-wide count of point-to-point squared-distance evaluations.
/// Tests use it to pin the cost contracts of light-k-means and the
/// approximate neighbor search; it has no effect on results.
std::uint64_t distance_evals();
void reset_distance_evals();

namespace detail {
void add_distance_evals(std::uint64_t n);
}

}  // namespace dncsc
