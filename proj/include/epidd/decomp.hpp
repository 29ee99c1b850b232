#pragma once

#include "epidd/csr.hpp"
#include "epidd/mesh.hpp"

#include <vector>

namespace epidd {

struct Decomposition {
    int n_sub = 0;
    // Sorted vertex indices per subdomain, overlap included.
    std::vector<std::vector<Index>> subdomain_dofs;
    std::vector<int> owner;
    int overlap_layers = 0;

    Index num_dofs() const { return static_cast<Index>(owner.size()); }
};

// Recursive coordinate bisection: split the longest bounding-box axis at the
// count-weighted median; ties go to the lower subdomain id.
Decomposition partition(const Mesh& mesh, int n_sub);

// Grows every subdomain by `layers` rings of adjacent vertices. Ownership is unchanged.
Decomposition add_overlap(const Decomposition& d, const Mesh& mesh, int layers);

struct Restrictions {
    // R_i selects subdomain dofs (n_i x n).
    std::vector<CsrMatrix> r;
    // Diagonal of D_i: 1 where subdomain i owns the local dof, else 0.
    std::vector<std::vector<double>> d;
};

Restrictions build_restrictions(const Decomposition& d, Index n);

struct CoarseSpace {
    CsrMatrix z;   // n x n_c interpolation
    CsrMatrix r0;  // transpose of z
};

CoarseSpace build_coarse_space(const NestedMeshPair& pair);

// True when the subdomain's vertex set induces a connected subgraph.
bool is_connected(const std::vector<Index>& dofs, const std::vector<std::vector<Index>>& adjacency);

}  // namespace epidd
