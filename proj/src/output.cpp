#include "epidd/output.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace epidd {

TimeseriesRow to_row(const StepReport& report)
{
    TimeseriesRow row;
    row.t = report.t;
    row.integrals = report.integrals;
    row.picard_iters = report.picard_iterations;
    row.krylov_sum = report.krylov_sum;
    row.setup_s = report.pc_setup_seconds;
    row.solve_s = report.solve_seconds;
    return row;
}

void write_timeseries_header(std::ostream& out) { out << timeseries_header << '\n'; }

void write_timeseries_row(std::ostream& out, const TimeseriesRow& row)
{
    out << std::setprecision(17) << row.t;
    for (double v : row.integrals) out << ',' << v;
    out << ',' << row.picard_iters << ',' << row.krylov_sum << ',' << row.setup_s << ',' << row.solve_s << '\n';
}

std::vector<TimeseriesRow> parse_timeseries(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != timeseries_header)
        throw OutputError("timeseries: missing or unexpected header");
    std::vector<TimeseriesRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 10)
            throw OutputError("timeseries line " + std::to_string(lineno) + ": expected 10 columns, got " +
                              std::to_string(cells.size()));
        try {
            TimeseriesRow r;
            r.t = std::stod(cells[0]);
            for (int c = 0; c < n_compartments; ++c) r.integrals[c] = std::stod(cells[1 + c]);
            r.picard_iters = std::stoi(cells[6]);
            r.krylov_sum = std::stoi(cells[7]);
            r.setup_s = std::stod(cells[8]);
            r.solve_s = std::stod(cells[9]);
            rows.push_back(r);
        } catch (const std::logic_error&) {
            throw OutputError("timeseries line " + std::to_string(lineno) + ": non-numeric value");
        }
    }
    return rows;
}

void write_vtk(std::ostream& out, const Mesh& mesh, const StateFields& u)
{
    if (u.size() != mesh.num_vertices()) throw OutputError("vtk: field size does not match the mesh");
    const int nvc = mesh.dim == 2 ? 3 : 2;
    out << "# vtk DataFile Version 3.0\nSEIRD fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.num_vertices() << " double\n" << std::setprecision(17);
    for (const auto& p : mesh.vertices) out << p[0] << ' ' << (mesh.dim == 2 ? p[1] : 0.0) << " 0\n";
    out << "CELLS " << mesh.cells.size() << ' ' << mesh.cells.size() * (nvc + 1) << '\n';
    for (const auto& c : mesh.cells) {
        out << nvc;
        for (int k = 0; k < nvc; ++k) out << ' ' << c[k];
        out << '\n';
    }
    out << "CELL_TYPES " << mesh.cells.size() << '\n';
    for (std::size_t k = 0; k < mesh.cells.size(); ++k) out << (mesh.dim == 2 ? 5 : 3) << '\n';
    out << "POINT_DATA " << mesh.num_vertices() << '\n';
    for (int c = 0; c < n_compartments; ++c) {
        out << "SCALARS " << compartment_names[c] << " double 1\nLOOKUP_TABLE default\n";
        for (double v : u[c]) out << v << '\n';
    }
}

void write_vtk_file(const std::string& path, const Mesh& mesh, const StateFields& u)
{
    std::ofstream out(path);
    if (!out) throw OutputError("cannot open '" + path + "' for writing");
    write_vtk(out, mesh, u);
}

std::string vtk_filename(int step)
{
    std::ostringstream s;
    s << "fields_" << std::setw(5) << std::setfill('0') << step << ".vtk";
    return s.str();
}

void write_bench_header(std::ostream& out) { out << bench_header << '\n'; }

void write_bench_row(std::ostream& out, const BenchRow& r)
{
    out << r.mode << ',' << r.threads << ',' << r.pc << ',' << r.subdomains << ',' << r.vertices << ','
        << 5 * static_cast<long long>(r.vertices) << ',' << std::setprecision(6) << r.avg_picard << ',' << r.avg_krylov
        << ',' << r.setup_s << ',' << r.solve_s << ',' << (r.failed ? 1 : 0) << '\n';
}

std::ofstream open_output(const std::string& dir, const std::string& name)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw OutputError("cannot create output directory '" + dir + "': " + ec.message());
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path);
    if (!out) throw OutputError("cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace epidd
