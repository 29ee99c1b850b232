#pragma once

#include "epidd/output.hpp"
#include "epidd/scenario.hpp"

#include <string>
#include <vector>

namespace epidd {

struct BenchPlan {
    std::string mode = "strong";  // strong | weak
    std::vector<int> threads{1};
    // Fine-mesh cells per side. Strong mode uses the first entry; weak mode
    // pairs entries with thread counts, or scales the first entry by sqrt(threads).
    std::vector<Index> mesh_sizes{200};
    int steps = 10;
    int repetitions = 1;

    void validate() const;
};

// Runs the scenario once per configuration and reports medians over repetitions.
std::vector<BenchRow> bench_run(const BenchPlan& plan, const Scenario& scenario);

}  // namespace epidd
