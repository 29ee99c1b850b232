#pragma once

#include <cstddef>

namespace epidd::par {

int max_threads();
int num_procs();
void set_threads(int n);

// Deterministic mode evaluates every reduction over a fixed block layout and
// combines the blocks in order, so results do not depend on the thread count.
bool deterministic();
void set_deterministic(bool on);

inline constexpr std::size_t reduction_block = 4096;

}  // namespace epidd::par
