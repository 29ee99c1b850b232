#include "epidd/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace epidd {

namespace {

void bisect(const Mesh& mesh, std::vector<Index>& ids, std::size_t lo, std::size_t hi, int first_sub, int n_sub,
            std::vector<int>& owner)
{
    if (n_sub == 1) {
        for (std::size_t k = lo; k < hi; ++k) owner[ids[k]] = first_sub;
        return;
    }
    Point bmin{INFINITY, INFINITY}, bmax{-INFINITY, -INFINITY};
    for (std::size_t k = lo; k < hi; ++k) {
        const Point& p = mesh.vertices[ids[k]];
        for (int d = 0; d < 2; ++d) {
            bmin[d] = std::min(bmin[d], p[d]);
            bmax[d] = std::max(bmax[d], p[d]);
        }
    }
    const int axis = (bmax[1] - bmin[1]) > (bmax[0] - bmin[0]) ? 1 : 0;
    std::sort(ids.begin() + static_cast<std::ptrdiff_t>(lo), ids.begin() + static_cast<std::ptrdiff_t>(hi),
              [&](Index a, Index b) {
                  const double ca = mesh.vertices[a][axis], cb = mesh.vertices[b][axis];
                  return ca != cb ? ca < cb : a < b;
              });
    const int left = n_sub / 2;
    const std::size_t count = hi - lo;
    const std::size_t split = lo + count * static_cast<std::size_t>(left) / static_cast<std::size_t>(n_sub);
    bisect(mesh, ids, lo, split, first_sub, left, owner);
    bisect(mesh, ids, split, hi, first_sub + left, n_sub - left, owner);
}

// Moves every connected component except the largest of each subdomain into
// the neighboring subdomain it shares the most edges with.
void merge_stray_components(const Mesh& mesh, int n_sub, std::vector<int>& owner)
{
    const auto adj = vertex_adjacency(mesh);
    const Index nv = mesh.num_vertices();
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<int> comp(nv, -1);
        std::vector<std::vector<Index>> comps;
        for (Index seed = 0; seed < nv; ++seed) {
            if (comp[seed] >= 0) continue;
            const int id = static_cast<int>(comps.size());
            comps.push_back({seed});
            comp[seed] = id;
            for (std::size_t k = 0; k < comps[id].size(); ++k)
                for (Index w : adj[comps[id][k]])
                    if (comp[w] < 0 && owner[w] == owner[seed]) {
                        comp[w] = id;
                        comps[id].push_back(w);
                    }
        }
        std::vector<int> largest(n_sub, -1);
        for (int c = 0; c < static_cast<int>(comps.size()); ++c) {
            int& l = largest[owner[comps[c][0]]];
            if (l < 0 || comps[c].size() > comps[l].size()) l = c;
        }
        for (int c = 0; c < static_cast<int>(comps.size()); ++c) {
            const int s = owner[comps[c][0]];
            if (largest[s] == c) continue;
            std::vector<int> votes(n_sub, 0);
            for (Index v : comps[c])
                for (Index w : adj[v])
                    if (owner[w] != s) ++votes[owner[w]];
            const int target = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
            if (votes[target] == 0) continue;
            for (Index v : comps[c]) owner[v] = target;
            changed = true;
            break;
        }
    }
}

}  // namespace

Decomposition partition(const Mesh& mesh, int n_sub)
{
    const Index nv = mesh.num_vertices();
    if (n_sub < 1 || n_sub > nv)
        throw std::invalid_argument("partition: subdomain count " + std::to_string(n_sub) +
                                    " must lie in [1, " + std::to_string(nv) + "]");
    Decomposition d;
    d.n_sub = n_sub;
    d.owner.assign(nv, -1);
    std::vector<Index> ids(nv);
    std::iota(ids.begin(), ids.end(), 0);
    bisect(mesh, ids, 0, ids.size(), 0, n_sub, d.owner);
    merge_stray_components(mesh, n_sub, d.owner);
    d.subdomain_dofs.assign(n_sub, {});
    for (Index v = 0; v < nv; ++v) d.subdomain_dofs[d.owner[v]].push_back(v);
    d.overlap_layers = 0;
    return d;
}

Decomposition add_overlap(const Decomposition& d, const Mesh& mesh, int layers)
{
    if (layers < 0) throw std::invalid_argument("overlap layers must be >= 0");
    const auto adj = vertex_adjacency(mesh);
    Decomposition out = d;
    out.overlap_layers = d.overlap_layers + layers;
    std::vector<int> mark(mesh.num_vertices(), -1);
    for (int s = 0; s < d.n_sub; ++s) {
        auto& set = out.subdomain_dofs[s];
        for (Index v : set) mark[v] = s;
        std::vector<Index> frontier = set;
        for (int l = 0; l < layers && !frontier.empty(); ++l) {
            std::vector<Index> next;
            for (Index v : frontier)
                for (Index w : adj[v])
                    if (mark[w] != s) {
                        mark[w] = s;
                        next.push_back(w);
                    }
            set.insert(set.end(), next.begin(), next.end());
            frontier = std::move(next);
        }
        std::sort(set.begin(), set.end());
    }
    return out;
}

Restrictions build_restrictions(const Decomposition& d, Index n)
{
    if (d.num_dofs() != n) throw DimensionError("decomposition does not match the dof count");
    Restrictions out;
    for (int s = 0; s < d.n_sub; ++s) {
        const auto& dofs = d.subdomain_dofs[s];
        CsrMatrix r;
        r.n_rows = static_cast<Index>(dofs.size());
        r.n_cols = n;
        r.row_ptr.resize(dofs.size() + 1);
        std::iota(r.row_ptr.begin(), r.row_ptr.end(), 0);
        r.col_idx = dofs;
        r.values.assign(dofs.size(), 1.0);
        out.r.push_back(std::move(r));
        std::vector<double> diag(dofs.size());
        for (std::size_t k = 0; k < dofs.size(); ++k) diag[k] = d.owner[dofs[k]] == s ? 1.0 : 0.0;
        out.d.push_back(std::move(diag));
    }
    return out;
}

CoarseSpace build_coarse_space(const NestedMeshPair& pair)
{
    const Index n = pair.fine.num_vertices();
    const Index nc = pair.coarse.num_vertices();
    if (static_cast<Index>(pair.parent_map.size()) != n) throw DimensionError("parent map does not match fine mesh");
    std::vector<Triplet> t;
    for (Index v = 0; v < n; ++v) {
        const auto& pe = pair.parent_map[v];
        const auto& cell = pair.coarse.cells[pe.cell];
        for (int k = 0; k < pair.coarse.verts_per_cell(); ++k)
            if (pe.bary[k] != 0.0) t.push_back({v, cell[k], pe.bary[k]});
    }
    CoarseSpace cs;
    cs.z = CsrMatrix::from_triplets(n, nc, std::move(t));
    cs.r0 = transpose(cs.z);
    return cs;
}

bool is_connected(const std::vector<Index>& dofs, const std::vector<std::vector<Index>>& adjacency)
{
    if (dofs.empty()) return true;
    std::vector<char> in(adjacency.size(), 0), seen(adjacency.size(), 0);
    for (Index v : dofs) in[v] = 1;
    std::queue<Index> q;
    q.push(dofs.front());
    seen[dofs.front()] = 1;
    std::size_t reached = 1;
    while (!q.empty()) {
        const Index v = q.front();
        q.pop();
        for (Index w : adjacency[v])
            if (in[w] && !seen[w]) {
                seen[w] = 1;
                ++reached;
                q.push(w);
            }
    }
    return reached == dofs.size();
}

}  // namespace epidd
