#include "epidd/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace epidd {

namespace {

using Edge = std::pair<Index, Index>;

Edge make_edge(Index a, Index b) { return a < b ? Edge{a, b} : Edge{b, a}; }

double triangle_area(const Point& a, const Point& b, const Point& c)
{
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

// Edges with exactly one incident triangle, sorted.
std::vector<Edge> topological_boundary(const Mesh& m)
{
    std::map<Edge, int> count;
    for (const auto& c : m.cells)
        for (int k = 0; k < 3; ++k) ++count[make_edge(c[k], c[(k + 1) % 3])];
    std::vector<Edge> out;
    for (const auto& [e, n] : count)
        if (n == 1) out.push_back(e);
    return out;
}

}  // namespace

double Mesh::cell_measure(Index c) const
{
    const auto& cell = cells[c];
    if (dim == 1) return vertices[cell[1]][0] - vertices[cell[0]][0];
    return triangle_area(vertices[cell[0]], vertices[cell[1]], vertices[cell[2]]);
}

double Mesh::total_measure() const
{
    double s = 0.0;
    for (Index c = 0; c < num_cells(); ++c) s += std::abs(cell_measure(c));
    return s;
}

std::array<Point, 2> Mesh::bounding_box() const
{
    Point lo{INFINITY, INFINITY}, hi{-INFINITY, -INFINITY};
    for (const auto& p : vertices) {
        for (int d = 0; d < 2; ++d) {
            lo[d] = std::min(lo[d], p[d]);
            hi[d] = std::max(hi[d], p[d]);
        }
    }
    return {lo, hi};
}

void Mesh::validate() const
{
    if (dim != 1 && dim != 2) throw MeshError("mesh dimension must be 1 or 2");
    const Index nv = num_vertices();
    const int k = verts_per_cell();
    for (Index c = 0; c < num_cells(); ++c) {
        for (int j = 0; j < k; ++j)
            if (cells[c][j] < 0 || cells[c][j] >= nv)
                throw MeshError("cell " + std::to_string(c) + ": index out of range");
        const double meas = cell_measure(c);
        if (meas == 0.0 || !std::isfinite(meas)) throw MeshError("cell " + std::to_string(c) + ": degenerate cell");
        if (meas < 0.0)
            throw MeshError("cell " + std::to_string(c) +
                            (dim == 2 ? ": clockwise triangle" : ": segment with decreasing coordinate"));
    }
    for (const auto& f : boundary_facets)
        for (int j = 0; j < dim; ++j)
            if (f.v[j] < 0 || f.v[j] >= nv) throw MeshError("boundary facet: index out of range");

    if (dim == 2) {
        std::vector<Edge> given;
        for (const auto& f : boundary_facets) given.push_back(make_edge(f.v[0], f.v[1]));
        std::sort(given.begin(), given.end());
        if (given != topological_boundary(*this))
            throw MeshError("boundary facets do not cover the mesh boundary exactly once");
    } else {
        std::vector<int> deg(nv, 0);
        for (const auto& c : cells) {
            ++deg[c[0]];
            ++deg[c[1]];
        }
        std::vector<Index> ends, given;
        for (Index v = 0; v < nv; ++v)
            if (deg[v] == 1) ends.push_back(v);
        for (const auto& f : boundary_facets) given.push_back(f.v[0]);
        std::sort(given.begin(), given.end());
        if (given != ends) throw MeshError("boundary facets do not cover the mesh boundary exactly once");
    }
}

Mesh rectangle_mesh(Index nx, Index ny, double lx, double ly)
{
    if (nx < 1 || ny < 1) throw MeshError("rectangle mesh needs at least one cell per side");
    if (!(lx > 0.0) || !(ly > 0.0)) throw MeshError("rectangle side lengths must be positive");
    Mesh m;
    m.dim = 2;
    const Index sx = nx + 1;
    m.vertices.reserve(static_cast<std::size_t>(sx) * (ny + 1));
    for (Index j = 0; j <= ny; ++j)
        for (Index i = 0; i <= nx; ++i)
            m.vertices.push_back({lx * static_cast<double>(i) / nx, ly * static_cast<double>(j) / ny});
    auto id = [sx](Index i, Index j) { return j * sx + i; };
    m.cells.reserve(2 * static_cast<std::size_t>(nx) * ny);
    for (Index j = 0; j < ny; ++j) {
        for (Index i = 0; i < nx; ++i) {
            m.cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            m.cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    for (Index i = 0; i < nx; ++i) m.boundary_facets.push_back({{id(i, 0), id(i + 1, 0)}, 4});
    for (Index j = 0; j < ny; ++j) m.boundary_facets.push_back({{id(nx, j), id(nx, j + 1)}, 2});
    for (Index i = nx; i > 0; --i) m.boundary_facets.push_back({{id(i, ny), id(i - 1, ny)}, 3});
    for (Index j = ny; j > 0; --j) m.boundary_facets.push_back({{id(0, j), id(0, j - 1)}, 1});
    return m;
}

Mesh unit_square_mesh(Index n)
{
    if (n < 1) throw MeshError("unit square mesh needs n >= 1");
    return rectangle_mesh(n, n, 1.0, 1.0);
}

Mesh interval_mesh(Index n, double length)
{
    if (n < 1) throw MeshError("interval mesh needs n >= 1");
    if (!(length > 0.0)) throw MeshError("interval length must be positive");
    Mesh m;
    m.dim = 1;
    for (Index i = 0; i <= n; ++i) m.vertices.push_back({length * static_cast<double>(i) / n, 0.0});
    for (Index i = 0; i < n; ++i) m.cells.push_back({i, i + 1, -1});
    m.boundary_facets.push_back({{0, -1}, 1});
    m.boundary_facets.push_back({{n, -1}, 2});
    return m;
}

NestedMeshPair refine_uniform(const Mesh& coarse)
{
    coarse.validate();
    NestedMeshPair pair;
    pair.coarse = coarse;
    Mesh& fine = pair.fine;
    fine.dim = coarse.dim;
    fine.vertices = coarse.vertices;

    const Index nv = coarse.num_vertices();
    pair.parent_map.assign(nv, ParentEntry{});
    for (Index c = 0; c < coarse.num_cells(); ++c) {
        for (int k = 0; k < coarse.verts_per_cell(); ++k) {
            auto& pe = pair.parent_map[coarse.cells[c][k]];
            if (pe.cell < 0) {
                pe.cell = c;
                pe.bary[k] = 1.0;
            }
        }
    }

    // Edge -> (first cell, local corners) for midpoint parents.
    struct EdgeInfo {
        Index cell;
        int a, b;
    };
    std::map<Edge, EdgeInfo> edges;
    const int nloc = coarse.dim == 2 ? 3 : 1;
    for (Index c = 0; c < coarse.num_cells(); ++c) {
        for (int k = 0; k < nloc; ++k) {
            const int a = k, b = (k + 1) % coarse.verts_per_cell();
            edges.try_emplace(make_edge(coarse.cells[c][a], coarse.cells[c][b]), EdgeInfo{c, a, b});
        }
    }
    std::map<Edge, Index> midpoint;
    for (const auto& [e, info] : edges) {
        const Index id = static_cast<Index>(fine.vertices.size());
        midpoint[e] = id;
        const Point& p = coarse.vertices[e.first];
        const Point& q = coarse.vertices[e.second];
        fine.vertices.push_back({0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])});
        ParentEntry pe;
        pe.cell = info.cell;
        pe.bary[info.a] = 0.5;
        pe.bary[info.b] = 0.5;
        pair.parent_map.push_back(pe);
    }

    auto mid = [&](Index a, Index b) { return midpoint.at(make_edge(a, b)); };
    for (const auto& c : coarse.cells) {
        if (coarse.dim == 1) {
            const Index m = mid(c[0], c[1]);
            fine.cells.push_back({c[0], m, -1});
            fine.cells.push_back({m, c[1], -1});
        } else {
            const Index mab = mid(c[0], c[1]), mbc = mid(c[1], c[2]), mca = mid(c[2], c[0]);
            fine.cells.push_back({c[0], mab, mca});
            fine.cells.push_back({mab, c[1], mbc});
            fine.cells.push_back({mca, mbc, c[2]});
            fine.cells.push_back({mab, mbc, mca});
        }
    }
    for (const auto& f : coarse.boundary_facets) {
        if (coarse.dim == 1) {
            fine.boundary_facets.push_back(f);
        } else {
            const Index m = mid(f.v[0], f.v[1]);
            fine.boundary_facets.push_back({{f.v[0], m}, f.label});
            fine.boundary_facets.push_back({{m, f.v[1]}, f.label});
        }
    }
    return pair;
}

namespace {

struct LineReader {
    std::istringstream in;
    int line_no = 0;

    explicit LineReader(const std::string& text) : in(text) {}

    // Next non-empty line with comments stripped, split into tokens.
    bool next(std::vector<std::string>& tokens)
    {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
            std::istringstream ls(line);
            tokens.clear();
            std::string tok;
            while (ls >> tok) tokens.push_back(tok);
            if (!tokens.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw MeshError("line " + std::to_string(line_no) + ": " + what);
    }
};

template <class T>
T parse_number(const std::string& s, const LineReader& r, const char* what)
{
    T v{};
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) r.fail(std::string("malformed ") + what + " '" + s + "'");
    return v;
}

}  // namespace

Mesh parse_mesh(const std::string& text)
{
    LineReader r(text);
    std::vector<std::string> tok;
    if (!r.next(tok)) throw MeshError("line 1: malformed header (empty file)");
    if (tok.size() != 4) r.fail("malformed header, expected 'dim nv nc nb'");
    Mesh m;
    m.dim = parse_number<int>(tok[0], r, "header");
    const long nv = parse_number<long>(tok[1], r, "header");
    const long nc = parse_number<long>(tok[2], r, "header");
    const long nb = parse_number<long>(tok[3], r, "header");
    if ((m.dim != 1 && m.dim != 2) || nv < 0 || nc < 0 || nb < 0) r.fail("malformed header");

    for (long k = 0; k < nv; ++k) {
        if (!r.next(tok)) r.fail("unexpected end of file in vertex block");
        if (static_cast<int>(tok.size()) != m.dim) r.fail("expected " + std::to_string(m.dim) + " coordinates");
        Point p{0.0, 0.0};
        for (int d = 0; d < m.dim; ++d) p[d] = parse_number<double>(tok[d], r, "coordinate");
        m.vertices.push_back(p);
    }
    const int k_cell = m.dim + 1;
    for (long k = 0; k < nc; ++k) {
        if (!r.next(tok)) r.fail("unexpected end of file in cell block");
        if (static_cast<int>(tok.size()) != k_cell) r.fail("expected " + std::to_string(k_cell) + " vertex indices");
        std::array<Index, 3> c{-1, -1, -1};
        for (int j = 0; j < k_cell; ++j) {
            const long idx = parse_number<long>(tok[j], r, "index");
            if (idx < 1 || idx > nv) r.fail("index out of range (" + tok[j] + " of " + std::to_string(nv) + ")");
            c[j] = static_cast<Index>(idx - 1);
        }
        m.cells.push_back(c);
        const double meas = m.cell_measure(m.num_cells() - 1);
        if (meas == 0.0) r.fail("degenerate cell");
        if (meas < 0.0) r.fail("cell is not counter-clockwise");
    }
    for (long k = 0; k < nb; ++k) {
        if (!r.next(tok)) r.fail("unexpected end of file in boundary block");
        if (static_cast<int>(tok.size()) != m.dim + 1) r.fail("expected facet indices and a label");
        BoundaryFacet f;
        for (int j = 0; j < m.dim; ++j) {
            const long idx = parse_number<long>(tok[j], r, "index");
            if (idx < 1 || idx > nv) r.fail("index out of range (" + tok[j] + " of " + std::to_string(nv) + ")");
            f.v[j] = static_cast<Index>(idx - 1);
        }
        f.label = parse_number<int>(tok[m.dim], r, "label");
        m.boundary_facets.push_back(f);
    }
    if (r.next(tok)) r.fail("trailing content after boundary block");
    m.validate();
    return m;
}

Mesh read_mesh(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open mesh file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_mesh(ss.str());
    } catch (const MeshError& e) {
        throw MeshError(path + ": " + e.what());
    }
}

std::string format_mesh(const Mesh& m)
{
    std::ostringstream out;
    out.precision(17);
    out << m.dim << ' ' << m.num_vertices() << ' ' << m.num_cells() << ' ' << m.boundary_facets.size() << '\n';
    for (const auto& p : m.vertices) {
        out << p[0];
        if (m.dim == 2) out << ' ' << p[1];
        out << '\n';
    }
    for (const auto& c : m.cells) {
        for (int j = 0; j < m.verts_per_cell(); ++j) out << (j ? " " : "") << c[j] + 1;
        out << '\n';
    }
    for (const auto& f : m.boundary_facets) {
        for (int j = 0; j < m.dim; ++j) out << f.v[j] + 1 << ' ';
        out << f.label << '\n';
    }
    return out.str();
}

void write_mesh(const Mesh& mesh, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw MeshError("cannot write mesh file '" + path + "'");
    out << format_mesh(mesh);
    if (!out) throw MeshError("write failed for '" + path + "'");
}

std::vector<std::vector<Index>> vertex_adjacency(const Mesh& mesh)
{
    std::vector<std::vector<Index>> adj(mesh.num_vertices());
    const int k = mesh.verts_per_cell();
    for (const auto& c : mesh.cells)
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b)
                if (a != b) adj[c[a]].push_back(c[b]);
    for (auto& l : adj) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    return adj;
}

}  // namespace epidd
