#pragma once

#include "epidd/csr.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace epidd {

class MeshError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Point = std::array<double, 2>;

// A boundary facet is an edge (2D) or a single vertex (1D, second entry -1).
struct BoundaryFacet {
    std::array<Index, 2> v{-1, -1};
    int label = 0;
    bool operator==(const BoundaryFacet&) const = default;
};

// 1D interval or 2D triangle mesh. Coordinates are in km; in 1D the second
// coordinate is zero. Cells store 2 (1D) or 3 (2D) vertex indices; unused
// slots are -1. Triangles are counter-clockwise.
struct Mesh {
    int dim = 2;
    std::vector<Point> vertices;
    std::vector<std::array<Index, 3>> cells;
    std::vector<BoundaryFacet> boundary_facets;

    Index num_vertices() const { return static_cast<Index>(vertices.size()); }
    Index num_cells() const { return static_cast<Index>(cells.size()); }
    int verts_per_cell() const { return dim + 1; }
    // Signed area (2D) or length (1D).
    double cell_measure(Index c) const;
    double total_measure() const;
    std::array<Point, 2> bounding_box() const;
    // Throws MeshError when an invariant is violated.
    void validate() const;

    bool operator==(const Mesh&) const = default;
};

struct ParentEntry {
    Index cell = -1;
    std::array<double, 3> bary{0.0, 0.0, 0.0};
};

struct NestedMeshPair {
    Mesh coarse;
    Mesh fine;
    // Per fine vertex: containing coarse cell and barycentric weights of its corners.
    std::vector<ParentEntry> parent_map;
};

// Labels: left=1, right=2, top=3, bottom=4.
Mesh rectangle_mesh(Index nx, Index ny, double lx, double ly);
Mesh unit_square_mesh(Index n);
// Labels: left=1, right=2.
Mesh interval_mesh(Index n, double length);

// Red refinement: coarse vertices keep their numbers, then one midpoint per
// coarse edge in sorted (min, max) edge order.
NestedMeshPair refine_uniform(const Mesh& coarse);

Mesh read_mesh(const std::string& path);
Mesh parse_mesh(const std::string& text);
void write_mesh(const Mesh& mesh, const std::string& path);
std::string format_mesh(const Mesh& mesh);

// Sorted neighbor lists over mesh edges.
std::vector<std::vector<Index>> vertex_adjacency(const Mesh& mesh);

}  // namespace epidd
