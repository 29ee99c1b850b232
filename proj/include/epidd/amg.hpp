#pragma once

#include "epidd/csr.hpp"
#include "epidd/lu.hpp"

#include <string>
#include <vector>

namespace epidd {

struct AmgConfig {
    double theta = 0.08;
    int max_levels = 10;
    Index coarse_size = 64;
    int pre_sweeps = 1;
    int post_sweeps = 1;
    double omega = 2.0 / 3.0;
};

struct AmgLevel {
    CsrMatrix a;
    CsrMatrix p;  // to the next coarser level; empty on the coarsest
    CsrMatrix r;  // transpose of p
    Vector inv_diag;
};

// Smoothed-aggregation hierarchy. Read-only after setup, so V-cycles for
// different right-hand sides may run concurrently.
class AmgHierarchy {
public:
    std::vector<AmgLevel> levels;
    SparseLu coarsest;
    AmgConfig config;
    std::vector<std::string> warnings;

    int num_levels() const { return static_cast<int>(levels.size()); }
    // One V(pre, post) cycle from a zero initial guess.
    void vcycle(const Vector& r, Vector& z) const;
    Vector vcycle(const Vector& r) const;

private:
    void cycle(int level, const Vector& b, Vector& x) const;
};

// Strong couplings: |a_ij| >= theta * sqrt(|a_ii a_jj|), i != j.
std::vector<std::vector<Index>> strength_graph(const CsrMatrix& a, double theta);
// Greedy aggregation; returns aggregate id per node and the aggregate count.
std::vector<Index> aggregate(const std::vector<std::vector<Index>>& strong, Index& n_aggregates);

AmgHierarchy amg_setup(const CsrMatrix& a, const AmgConfig& cfg = {});

}  // namespace epidd
