#pragma once

#include "epidd/csr.hpp"
#include "epidd/mesh.hpp"
#include "epidd/model.hpp"

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace epidd {

class AlleeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// (compartment, x, y, t) -> value.
using CompartmentFunction = std::function<double(int, double, double, double)>;

struct Forcing {
    CompartmentFunction fn;
    // Interpolate the source as a P1 field (true) or evaluate it at quadrature points.
    bool nodal = true;
};

struct BoundaryCondition {
    enum class Kind { dirichlet, neumann };
    Kind kind = Kind::neumann;
    int label = 0;
    // Dirichlet: prescribed value. Neumann: total flux N nu du/dn.
    CompartmentFunction value;
    std::array<bool, n_compartments> active{true, true, true, true, false};
};

// P1 space with a fixed sparsity pattern and quadrature: three edge midpoints
// per triangle, three Gauss points per segment.
class FeSpace {
public:
    static constexpr int max_q = 3;

    explicit FeSpace(const Mesh& mesh);

    const Mesh& mesh() const { return mesh_; }
    Index num_dofs() const { return mesh_.num_vertices(); }
    int verts_per_cell() const { return k_; }
    const CsrMatrix& pattern() const { return pattern_; }

    double measure(Index c) const { return measure_[c]; }
    // Basis value of local vertex a at quadrature point q.
    double phi(int q, int a) const { return phi_[q][a]; }
    double weight(int q) const { return wref_[q]; }
    Point quad_point(Index c, int q) const;
    // Gradient of local basis a on cell c.
    const std::array<double, 2>& grad(Index c, int a) const { return grad_[static_cast<std::size_t>(c) * 3 + a]; }

    CsrMatrix mass_matrix() const;
    CsrMatrix stiffness_matrix() const;

    // Gathers per-cell local matrices (k*k per cell) and vectors (k per cell)
    // into global storage, in cell order for every entry.
    void gather_matrix(const std::vector<double>& local, CsrMatrix& out) const;
    void gather_vector(const std::vector<double>& local, Vector& out) const;
    // Reference scatter in cell order on the calling thread.
    void scatter_matrix_serial(const std::vector<double>& local, CsrMatrix& out) const;
    void scatter_vector_serial(const std::vector<double>& local, Vector& out) const;

    Vector interpolate(const std::function<double(double, double)>& f) const;

private:
    const Mesh& mesh_;
    int k_;
    std::vector<double> measure_;
    std::vector<std::array<double, 2>> grad_;
    std::array<std::array<double, 3>, max_q> phi_{};
    std::array<double, max_q> wref_{};
    CsrMatrix pattern_;
    // For each nonzero: positions in the local matrix array, ascending by cell.
    std::vector<Index> mat_ptr_;
    std::vector<std::int64_t> mat_src_;
    std::vector<Index> vec_ptr_;
    std::vector<std::int64_t> vec_src_;
    std::vector<std::int64_t> scatter_pos_;
};

struct LinearSystem {
    CsrMatrix a;
    Vector b;
};

struct AssemblyDiagnostics {
    int allee_clamps = 0;
};

struct AssemblyInput {
    Compartment c = Compartment::s;
    const ModelParameters* params = nullptr;
    const StateFields* prev_time = nullptr;   // u^n
    const StateFields* prev_iter = nullptr;   // u^{n+1,k}
    const StateFields* sweep = nullptr;       // compartments already updated this sweep, others at k
    double t = 0.0;                           // t^{n+1}
    double dt = 0.0;
    const Forcing* forcing = nullptr;
    const std::vector<BoundaryCondition>* bcs = nullptr;
};

// Backward-Euler system for one compartment with Picard-frozen coefficients.
LinearSystem assemble_compartment(const FeSpace& space, const AssemblyInput& in, AssemblyDiagnostics* diag = nullptr,
                                  bool serial = false);

// Integral of a P1 field.
double integrate_field(const Vector& field, const Mesh& mesh);

// Vertex indices touched by facets with the given label.
std::vector<Index> boundary_vertices(const Mesh& mesh, int label);

}  // namespace epidd
