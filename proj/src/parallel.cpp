#include "epidd/parallel.hpp"

#include <atomic>

#include <omp.h>

namespace epidd::par {

namespace {
std::atomic<bool> g_deterministic{false};
}

int max_threads() { return omp_get_max_threads(); }

int num_procs() { return omp_get_num_procs(); }

void set_threads(int n)
{
    if (n > 0) omp_set_num_threads(n);
}

bool deterministic() { return g_deterministic.load(std::memory_order_relaxed); }

void set_deterministic(bool on) { g_deterministic.store(on, std::memory_order_relaxed); }

}  // namespace epidd::par
