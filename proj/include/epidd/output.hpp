#pragma once

#include "epidd/mesh.hpp"
#include "epidd/model.hpp"
#include "epidd/timestep.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace epidd {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One row of timeseries.csv.
struct TimeseriesRow {
    double t = 0.0;
    std::array<double, n_compartments> integrals{};
    int picard_iters = 0;
    int krylov_sum = 0;
    double setup_s = 0.0;
    double solve_s = 0.0;
};

inline constexpr const char* timeseries_header = "t,S_int,E_int,I_int,R_int,D_int,picard_iters,krylov_sum,setup_s,solve_s";

TimeseriesRow to_row(const StepReport& report);
void write_timeseries_header(std::ostream& out);
void write_timeseries_row(std::ostream& out, const TimeseriesRow& row);
std::vector<TimeseriesRow> parse_timeseries(std::istream& in);

// Legacy ASCII VTK unstructured grid with S, E, I, R, D as point data.
void write_vtk(std::ostream& out, const Mesh& mesh, const StateFields& u);
void write_vtk_file(const std::string& path, const Mesh& mesh, const StateFields& u);
std::string vtk_filename(int step);

// One row of bench.csv.
struct BenchRow {
    std::string mode;
    int threads = 1;
    std::string pc;
    int subdomains = 1;
    Index vertices = 0;
    double avg_picard = 0.0;
    double avg_krylov = 0.0;
    double setup_s = 0.0;
    double solve_s = 0.0;
    bool failed = false;
};

inline constexpr const char* bench_header =
    "mode,threads,pc,subdomains,vertices,dofs,avg_picard,avg_krylov,setup_s,solve_s,failed";

void write_bench_header(std::ostream& out);
void write_bench_row(std::ostream& out, const BenchRow& row);

// Creates the directory if needed and opens `dir/name` for writing.
std::ofstream open_output(const std::string& dir, const std::string& name);

}  // namespace epidd
