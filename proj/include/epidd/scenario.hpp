#pragma once

#include "epidd/assembly.hpp"
#include "epidd/config.hpp"
#include "epidd/mesh.hpp"
#include "epidd/model.hpp"
#include "epidd/timestep.hpp"

#include <optional>
#include <string>
#include <vector>

namespace epidd {

// amplitude * exp(-|x - center|^2 / (2 radius^2))
struct GaussianPulse {
    Point center{0.0, 0.0};
    double amplitude = 0.0;
    double radius = 1.0;
};

Vector gaussian_ic(const Mesh& mesh, const GaussianPulse& pulse);
Vector multi_gaussian_ic(const Mesh& mesh, const std::vector<GaussianPulse>& pulses);
// Amplitude giving the pulse a prescribed integral over the axis-aligned box.
double gaussian_amplitude_for_total(const Point& center, double radius, double total, const std::array<Point, 2>& box);

// A population center with per-compartment head counts.
struct PopulationCenter {
    Point center{0.0, 0.0};
    double radius = 0.05;
    std::array<double, n_compartments> totals{};
};

struct MeshSpec {
    std::string source = "square";  // square | rectangle | interval | file
    Index nx = 32;
    Index ny = 32;
    double lx = 1.0;
    double ly = 1.0;
    std::string file;
    // Uniform refinements applied to the base mesh. The last one yields the
    // nested pair used by two-grid preconditioners.
    int refine = 1;
};

struct Discretization {
    Mesh mesh;
    std::optional<NestedMeshPair> pair;
};

Discretization build_mesh(const MeshSpec& spec);

struct InitialCondition {
    std::string type = "center_gaussian";  // center_gaussian | multi_gaussian | uniform
    double population = 2000.0;
    double infected_fraction = 0.1;
    double exponent = 10.0;  // infected = fraction * N * exp(-exponent r^2)
    Point center{0.5, 0.5};
    std::vector<PopulationCenter> centers;
    double background = 0.0;  // density added to S everywhere for multi_gaussian
};

StateFields initial_state(const InitialCondition& ic, const Mesh& mesh);

struct OutputSpec {
    std::string dir = ".";
    int vtk_every = 0;  // 0 disables snapshots
    bool timeseries = true;
};

struct Scenario {
    std::string name = "square";
    MeshSpec mesh;
    ModelParameters params = ModelParameters::square_domain();
    InitialCondition ic;
    std::vector<BoundaryCondition> bcs;
    SolverSettings solver;
    PicardConfig picard;
    int steps = 10;
    OutputSpec output;
};

// Defaults: unit square, table parameters, centered Gaussian infection.
Scenario square_scenario();
// Synthetic provincial analogue: rectangle, regional beta, several population centers.
Scenario ontario_scenario();

Scenario scenario_from_config(const Config& cfg);

struct SimulationResult {
    std::vector<StepReport> reports;
    StateFields final_state;
    std::array<double, n_compartments> initial_integrals{};
};

SimulationResult run_scenario(const Scenario& sc, const Discretization& disc, const StepObserver& observer = {});

}  // namespace epidd
