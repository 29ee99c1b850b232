#include "epidd/assembly.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

namespace epidd {

FeSpace::FeSpace(const Mesh& mesh) : mesh_(mesh), k_(mesh.verts_per_cell())
{
    mesh.validate();
    const Index nc = mesh.num_cells();
    measure_.resize(nc);
    grad_.assign(static_cast<std::size_t>(nc) * 3, {0.0, 0.0});
    for (Index c = 0; c < nc; ++c) {
        const auto& v = mesh.cells[c];
        measure_[c] = mesh.cell_measure(c);
        if (mesh.dim == 1) {
            const double h = measure_[c];
            grad_[c * 3 + 0] = {-1.0 / h, 0.0};
            grad_[c * 3 + 1] = {1.0 / h, 0.0};
        } else {
            const Point& p0 = mesh.vertices[v[0]];
            const Point& p1 = mesh.vertices[v[1]];
            const Point& p2 = mesh.vertices[v[2]];
            const double s = 1.0 / (2.0 * measure_[c]);
            grad_[c * 3 + 0] = {(p1[1] - p2[1]) * s, (p2[0] - p1[0]) * s};
            grad_[c * 3 + 1] = {(p2[1] - p0[1]) * s, (p0[0] - p2[0]) * s};
            grad_[c * 3 + 2] = {(p0[1] - p1[1]) * s, (p1[0] - p0[0]) * s};
        }
    }
    if (mesh.dim == 1) {
        const double r = std::sqrt(15.0) / 10.0;
        const std::array<double, 3> xi{0.5 - r, 0.5, 0.5 + r};
        wref_ = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
        for (int q = 0; q < 3; ++q) phi_[q] = {1.0 - xi[q], xi[q], 0.0};
    } else {
        wref_ = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
        for (int q = 0; q < 3; ++q) {
            phi_[q] = {0.0, 0.0, 0.0};
            phi_[q][q] = 0.5;
            phi_[q][(q + 1) % 3] = 0.5;
        }
    }

    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(nc) * k_ * k_);
    for (const auto& v : mesh.cells)
        for (int a = 0; a < k_; ++a)
            for (int b = 0; b < k_; ++b) t.push_back({v[a], v[b], 0.0});
    pattern_ = CsrMatrix::from_triplets(mesh.num_vertices(), mesh.num_vertices(), std::move(t));

    const std::size_t kk = static_cast<std::size_t>(k_) * k_;
    scatter_pos_.resize(static_cast<std::size_t>(nc) * kk);
    mat_ptr_.assign(pattern_.nnz() + 1, 0);
    for (Index c = 0; c < nc; ++c) {
        const auto& v = mesh.cells[c];
        for (int a = 0; a < k_; ++a) {
            const auto first = pattern_.col_idx.begin() + pattern_.row_ptr[v[a]];
            const auto last = pattern_.col_idx.begin() + pattern_.row_ptr[v[a] + 1];
            for (int b = 0; b < k_; ++b) {
                const auto pos = std::lower_bound(first, last, v[b]) - pattern_.col_idx.begin();
                scatter_pos_[c * kk + a * k_ + b] = pos;
                ++mat_ptr_[pos + 1];
            }
        }
    }
    for (std::size_t p = 0; p < pattern_.nnz(); ++p) mat_ptr_[p + 1] += mat_ptr_[p];
    mat_src_.resize(scatter_pos_.size());
    {
        std::vector<Index> next(mat_ptr_.begin(), mat_ptr_.end() - 1);
        for (std::size_t s = 0; s < scatter_pos_.size(); ++s) mat_src_[next[scatter_pos_[s]]++] = static_cast<std::int64_t>(s);
    }
    vec_ptr_.assign(static_cast<std::size_t>(mesh.num_vertices()) + 1, 0);
    for (const auto& v : mesh.cells)
        for (int a = 0; a < k_; ++a) ++vec_ptr_[v[a] + 1];
    for (Index i = 0; i < mesh.num_vertices(); ++i) vec_ptr_[i + 1] += vec_ptr_[i];
    vec_src_.resize(static_cast<std::size_t>(nc) * k_);
    {
        std::vector<Index> next(vec_ptr_.begin(), vec_ptr_.end() - 1);
        for (Index c = 0; c < nc; ++c)
            for (int a = 0; a < k_; ++a) vec_src_[next[mesh.cells[c][a]]++] = static_cast<std::int64_t>(c) * k_ + a;
    }
}

Point FeSpace::quad_point(Index c, int q) const
{
    const auto& v = mesh_.cells[c];
    Point p{0.0, 0.0};
    for (int a = 0; a < k_; ++a) {
        p[0] += phi_[q][a] * mesh_.vertices[v[a]][0];
        p[1] += phi_[q][a] * mesh_.vertices[v[a]][1];
    }
    return p;
}

void FeSpace::gather_matrix(const std::vector<double>& local, CsrMatrix& out) const
{
    if (out.nnz() != pattern_.nnz()) out = pattern_;
    const std::int64_t nnz = static_cast<std::int64_t>(pattern_.nnz());
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < nnz; ++p) {
        double acc = 0.0;
        for (Index s = mat_ptr_[p]; s < mat_ptr_[p + 1]; ++s) acc += local[mat_src_[s]];
        out.values[p] = acc;
    }
}

void FeSpace::gather_vector(const std::vector<double>& local, Vector& out) const
{
    const Index n = num_dofs();
    out.resize(n);
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (Index s = vec_ptr_[i]; s < vec_ptr_[i + 1]; ++s) acc += local[vec_src_[s]];
        out[i] = acc;
    }
}

void FeSpace::scatter_matrix_serial(const std::vector<double>& local, CsrMatrix& out) const
{
    out = pattern_;
    for (std::size_t s = 0; s < scatter_pos_.size(); ++s) out.values[scatter_pos_[s]] += local[s];
}

void FeSpace::scatter_vector_serial(const std::vector<double>& local, Vector& out) const
{
    out.assign(num_dofs(), 0.0);
    for (Index c = 0; c < mesh_.num_cells(); ++c)
        for (int a = 0; a < k_; ++a) out[mesh_.cells[c][a]] += local[static_cast<std::size_t>(c) * k_ + a];
}

CsrMatrix FeSpace::mass_matrix() const
{
    const Index nc = mesh_.num_cells();
    std::vector<double> local(static_cast<std::size_t>(nc) * k_ * k_, 0.0);
    for (Index c = 0; c < nc; ++c)
        for (int a = 0; a < k_; ++a)
            for (int b = 0; b < k_; ++b) {
                double m = 0.0;
                for (int q = 0; q < 3; ++q) m += wref_[q] * phi_[q][a] * phi_[q][b];
                local[(c * k_ + a) * k_ + b] = m * measure_[c];
            }
    CsrMatrix out;
    gather_matrix(local, out);
    return out;
}

CsrMatrix FeSpace::stiffness_matrix() const
{
    const Index nc = mesh_.num_cells();
    std::vector<double> local(static_cast<std::size_t>(nc) * k_ * k_, 0.0);
    for (Index c = 0; c < nc; ++c)
        for (int a = 0; a < k_; ++a)
            for (int b = 0; b < k_; ++b) {
                const auto& ga = grad(c, a);
                const auto& gb = grad(c, b);
                local[(c * k_ + a) * k_ + b] = measure_[c] * (ga[0] * gb[0] + ga[1] * gb[1]);
            }
    CsrMatrix out;
    gather_matrix(local, out);
    return out;
}

Vector FeSpace::interpolate(const std::function<double(double, double)>& f) const
{
    Vector v(num_dofs());
    for (Index i = 0; i < num_dofs(); ++i) v[i] = f(mesh_.vertices[i][0], mesh_.vertices[i][1]);
    return v;
}

std::vector<Index> boundary_vertices(const Mesh& mesh, int label)
{
    std::vector<Index> out;
    for (const auto& f : mesh.boundary_facets)
        if (f.label == label)
            for (int j = 0; j < mesh.dim; ++j) out.push_back(f.v[j]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

void apply_neumann(const FeSpace& space, const AssemblyInput& in, const BoundaryCondition& bc, Vector& b)
{
    const Mesh& mesh = space.mesh();
    const int c = static_cast<int>(in.c);
    for (const auto& f : mesh.boundary_facets) {
        if (f.label != bc.label) continue;
        if (mesh.dim == 1) {
            const Point& p = mesh.vertices[f.v[0]];
            b[f.v[0]] += in.dt * bc.value(c, p[0], p[1], in.t);
            continue;
        }
        const Point& p0 = mesh.vertices[f.v[0]];
        const Point& p1 = mesh.vertices[f.v[1]];
        const double len = std::hypot(p1[0] - p0[0], p1[1] - p0[1]);
        const double r = std::sqrt(15.0) / 10.0;
        const std::array<double, 3> xi{0.5 - r, 0.5, 0.5 + r};
        const std::array<double, 3> w{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
        for (int g = 0; g < 3; ++g) {
            const double x = p0[0] + xi[g] * (p1[0] - p0[0]);
            const double y = p0[1] + xi[g] * (p1[1] - p0[1]);
            const double flux = in.dt * len * w[g] * bc.value(c, x, y, in.t);
            b[f.v[0]] += (1.0 - xi[g]) * flux;
            b[f.v[1]] += xi[g] * flux;
        }
    }
}

void apply_dirichlet(const Mesh& mesh, const AssemblyInput& in, const std::vector<const BoundaryCondition*>& bcs,
                     LinearSystem& sys)
{
    const Index n = mesh.num_vertices();
    std::vector<char> fixed(n, 0);
    Vector g(n, 0.0);
    const int c = static_cast<int>(in.c);
    for (const auto* bc : bcs)
        for (Index v : boundary_vertices(mesh, bc->label)) {
            fixed[v] = 1;
            g[v] = bc->value(c, mesh.vertices[v][0], mesh.vertices[v][1], in.t);
        }
    CsrMatrix& a = sys.a;
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) {
        if (fixed[i]) {
            double diag = 0.0;
            for (Index k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
                if (a.col_idx[k] == i)
                    diag = a.values[k];
                else
                    a.values[k] = 0.0;
            }
            if (diag == 0.0) diag = 1.0;
            for (Index k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
                if (a.col_idx[k] == i) a.values[k] = diag;
            sys.b[i] = diag * g[i];
            continue;
        }
        for (Index k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            const Index j = a.col_idx[k];
            if (fixed[j]) {
                sys.b[i] -= a.values[k] * g[j];
                a.values[k] = 0.0;
            }
        }
    }
}

}  // namespace

LinearSystem assemble_compartment(const FeSpace& space, const AssemblyInput& in, AssemblyDiagnostics* diag,
                                  bool serial)
{
    const ModelParameters& p = *in.params;
    const StateFields& un = *in.prev_time;
    const StateFields& uk = *in.prev_iter;
    const StateFields& us = *in.sweep;
    const Mesh& mesh = space.mesh();
    const Index nc = mesh.num_cells();
    const int k = space.verts_per_cell();
    const int ci = static_cast<int>(in.c);
    const double dt = in.dt;
    const double t = in.t;
    const double nu = p.nu(in.c);
    const double allee = p.allee;
    const double floor_n = std::max(allee * 1e-6, 1e-12);

    const Vector n_k = uk.total();
    Vector forcing_nodal;
    if (in.forcing && in.forcing->nodal) {
        forcing_nodal.resize(mesh.num_vertices());
        for (Index v = 0; v < mesh.num_vertices(); ++v)
            forcing_nodal[v] = in.forcing->fn(ci, mesh.vertices[v][0], mesh.vertices[v][1], t);
    }

    std::vector<double> lmat(static_cast<std::size_t>(nc) * k * k);
    std::vector<double> lvec(static_cast<std::size_t>(nc) * k);
    int clamps = 0;
    std::atomic<Index> bad_cell{-1};

    auto cell_kernel = [&](Index c, int& local_clamps) {
        const auto& v = mesh.cells[c];
        const double meas = space.measure(c);
        std::array<double, 3> kappa{}, rho{}, src{}, uprev{};
        for (int q = 0; q < 3; ++q) {
            auto at = [&](const Vector& f) {
                double s = 0.0;
                for (int a = 0; a < k; ++a) s += space.phi(q, a) * f[v[a]];
                return s;
            };
            const double n_q = at(n_k);
            double factor = 1.0;
            if (allee != 0.0) {
                double n_eff = n_q;
                if (!(n_q > 0.0)) {
                    Index expected = -1;
                    bad_cell.compare_exchange_strong(expected, c);
                    n_eff = floor_n;
                } else if (n_q < floor_n) {
                    n_eff = floor_n;
                    ++local_clamps;
                }
                factor = 1.0 - allee / n_eff;
            }
            const Point x = space.quad_point(c, q);
            kappa[q] = nu * n_q;
            uprev[q] = at(un[ci]);
            switch (in.c) {
            case Compartment::s:
                rho[q] = factor * (p.beta_i(x[0], x[1], t) * at(uk[Compartment::i]) +
                                   p.beta_e(x[0], x[1], t) * at(uk[Compartment::e]));
                src[q] = 0.0;
                break;
            case Compartment::e: {
                const double s_new = at(us[Compartment::s]);
                rho[q] = -factor * p.beta_e(x[0], x[1], t) * s_new + p.sigma + p.gamma_e;
                src[q] = factor * p.beta_i(x[0], x[1], t) * s_new * at(uk[Compartment::i]);
                break;
            }
            case Compartment::i:
                rho[q] = p.gamma_d + p.gamma_r;
                src[q] = p.sigma * at(us[Compartment::e]);
                break;
            case Compartment::r:
                rho[q] = 0.0;
                src[q] = p.gamma_r * at(us[Compartment::i]) + p.gamma_e * at(us[Compartment::e]);
                break;
            case Compartment::d:
                rho[q] = 0.0;
                src[q] = p.gamma_d * at(us[Compartment::i]);
                break;
            }
            if (in.forcing) src[q] += in.forcing->nodal ? at(forcing_nodal) : in.forcing->fn(ci, x[0], x[1], t);
        }
        double kbar = 0.0;
        for (int q = 0; q < 3; ++q) kbar += space.weight(q) * kappa[q];
        kbar *= meas;
        for (int a = 0; a < k; ++a) {
            double rhs = 0.0;
            for (int q = 0; q < 3; ++q) rhs += space.weight(q) * space.phi(q, a) * (uprev[q] + dt * src[q]);
            lvec[static_cast<std::size_t>(c) * k + a] = meas * rhs;
            const auto& ga = space.grad(c, a);
            for (int b = 0; b < k; ++b) {
                double m = 0.0;
                for (int q = 0; q < 3; ++q)
                    m += space.weight(q) * space.phi(q, a) * space.phi(q, b) * (1.0 + dt * rho[q]);
                const auto& gb = space.grad(c, b);
                lmat[(static_cast<std::size_t>(c) * k + a) * k + b] =
                    meas * m + dt * kbar * (ga[0] * gb[0] + ga[1] * gb[1]);
            }
        }
    };

    if (serial) {
        for (Index c = 0; c < nc; ++c) cell_kernel(c, clamps);
    } else {
#pragma omp parallel for schedule(static) reduction(+ : clamps)
        for (Index c = 0; c < nc; ++c) cell_kernel(c, clamps);
    }
    if (const Index bc = bad_cell.load(); bc >= 0) {
        const auto& v = mesh.cells[bc];
        Index node = v[0];
        for (int a = 1; a < k; ++a)
            if (n_k[v[a]] < n_k[node]) node = v[a];
        std::ostringstream msg;
        msg << "nonpositive total population N = " << n_k[node] << " at node " << node
            << " where the Allee factor is needed (cell " << bc << ")";
        throw AlleeError(msg.str());
    }
    if (diag) diag->allee_clamps += clamps;

    LinearSystem sys;
    if (serial) {
        space.scatter_matrix_serial(lmat, sys.a);
        space.scatter_vector_serial(lvec, sys.b);
    } else {
        space.gather_matrix(lmat, sys.a);
        space.gather_vector(lvec, sys.b);
    }

    if (in.bcs) {
        std::vector<const BoundaryCondition*> dirichlet;
        for (const auto& bc : *in.bcs) {
            if (!bc.active[ci]) continue;
            if (bc.kind == BoundaryCondition::Kind::neumann)
                apply_neumann(space, in, bc, sys.b);
            else
                dirichlet.push_back(&bc);
        }
        if (!dirichlet.empty()) apply_dirichlet(mesh, in, dirichlet, sys);
    }
    return sys;
}

double integrate_field(const Vector& field, const Mesh& mesh)
{
    if (static_cast<Index>(field.size()) != mesh.num_vertices()) throw DimensionError("field does not match mesh");
    const int k = mesh.verts_per_cell();
    double total = 0.0;
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        double s = 0.0;
        for (int a = 0; a < k; ++a) s += field[mesh.cells[c][a]];
        total += mesh.cell_measure(c) * s / k;
    }
    return total;
}

}  // namespace epidd
