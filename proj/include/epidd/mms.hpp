#pragma once

#include "epidd/assembly.hpp"
#include "epidd/mesh.hpp"
#include "epidd/model.hpp"
#include "epidd/timestep.hpp"

#include <array>
#include <vector>

namespace epidd {

// Every compartment is B sin(theta) + A_c with theta = 10x + 0.2t (1D) or
// 10xy + 0.2t (2D).
class ManufacturedSolution {
public:
    int dim = 1;
    double amplitude = 25.0;
    std::array<double, n_compartments> offsets{500.0, 300.0, 200.0, 100.0, 80.0};

    static ManufacturedSolution one_d() { return ManufacturedSolution{}; }
    static ManufacturedSolution two_d();

    double value(int c, double x, double y, double t) const;
    std::array<double, 2> gradient(int c, double x, double y, double t) const;
    // Source making the fields an exact solution of the model with `p`.
    double forcing(int c, double x, double y, double t, const ModelParameters& p) const;
    // Total flux N nu grad(u).n for an outward normal n.
    double flux(int c, double x, double y, double t, const std::array<double, 2>& normal,
                const ModelParameters& p) const;

    StateFields interpolate(const Mesh& mesh, double t) const;
    // Sum over compartments of ||u - u_h|| / ||u|| in L2.
    double relative_error(const Mesh& mesh, const StateFields& uh, double t) const;
};

// Parameter table of the one-dimensional verification model.
ModelParameters mms_parameters_1d();
// Unit-square parameters with A = 100.
ModelParameters mms_parameters_2d();

struct ConvergenceRow {
    double step = 0.0;  // h or dt
    double error = 0.0;
    double order = 0.0;  // NaN for the first row or when undefined
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    bool monotone = true;
};

// p = log(E1/E2) / log(r); NaN when either error is not positive.
double observed_order(double e1, double e2, double ratio);
ConvergenceResult make_convergence(const std::vector<double>& steps, const std::vector<double>& errors);

struct Mms1dOptions {
    bool nodal_forcing = true;
    int picard_iters = 1;
    double picard_tol = 1e-10;
};

// Error at t_end for one mesh / step pair.
double mms1d_error(Index cells, double dt, double t_end, const Mms1dOptions& opt = {});
ConvergenceResult mms_convergence_spatial_1d(const std::vector<double>& h, double dt = 1e-5, double t_eval = 0.002,
                                             const Mms1dOptions& opt = {});
ConvergenceResult mms_convergence_temporal_1d(const std::vector<double>& dt, double h = 2e-4, double t_eval = 5.0,
                                              const Mms1dOptions& opt = {});

struct Mms2dOptions {
    Index n = 115;
    double dt = 0.01;
    int steps = 5000;
    int subdomains = 4;
    double picard_tol = 1e-10;
    int record_every = 1;
};

struct Mms2dTrace {
    std::vector<double> t;
    std::vector<double> error;
    int picard_failures = 0;
    int linear_failures = 0;
};

Mms2dTrace mms_run_2d(const Mms2dOptions& opt, const StepObserver& observer = {});

}  // namespace epidd
