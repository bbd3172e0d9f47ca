#include "dncsc/counters.hpp"

namespace dncsc {

namespace {
std::atomic<std::uint64_t> g_distance_evals{0};
}

std::uint64_t distance_evals() { return g_distance_evals.load(std::memory_order_relaxed); }

void reset_distance_evals() { g_distance_evals.store(0, std::memory_order_relaxed); }

namespace detail {
void add_distance_evals(std::uint64_t n) {
    g_distance_evals.fetch_add(n, std::memory_order_relaxed);
}
}  // namespace detail

}  // namespace dncsc
