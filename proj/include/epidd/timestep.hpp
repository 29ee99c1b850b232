#pragma once

#include "epidd/assembly.hpp"
#include "epidd/decomp.hpp"
#include "epidd/krylov.hpp"
#include "epidd/model.hpp"
#include "epidd/schwarz.hpp"

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace epidd {

struct PicardConfig {
    double tol = 1e-8;
    int max_iters = 50;
    double dt = 0.1;
    // Start each Krylov solve from the current Picard iterate instead of zero.
    bool warm_start = false;

    void validate() const;
};

struct SolverSettings {
    PcKind pc = PcKind::ras1;
    KrylovConfig krylov;
    AmgConfig amg;
    int subdomains = 1;
    int overlap = 1;
};

// Decompositions and coarse space shared by every solve on one mesh.
class SolverContext {
public:
    // `pair` is required for two-grid preconditioners; its fine mesh must be `mesh`.
    SolverContext(const Mesh& mesh, const SolverSettings& settings, const NestedMeshPair* pair = nullptr);

    const SolverSettings& settings() const { return settings_; }
    const Decomposition& decomposition() const { return fine_; }
    PcContext pc_context() const;

private:
    SolverSettings settings_;
    Decomposition fine_;
    Decomposition coarse_;
    std::optional<CoarseSpace> coarse_space_;
};

struct StepReport {
    int step = 0;
    double t = 0.0;
    int picard_iterations = 0;
    bool picard_converged = false;
    std::vector<double> picard_eps;
    std::array<int, n_compartments> krylov{};
    int krylov_sum = 0;
    int linear_failures = 0;
    double pc_setup_seconds = 0.0;
    double solve_seconds = 0.0;
    double assembly_seconds = 0.0;
    // Relative change of the integral of N over the step.
    double drift = 0.0;
    std::array<double, n_compartments> integrals{};
    std::vector<int> coarse_inner_iterations;
    int coarse_not_converged = 0;
    int allee_clamps = 0;
    bool negativity_warning = false;
};

struct ModelProblem {
    const FeSpace* space = nullptr;
    ModelParameters params;
    std::vector<BoundaryCondition> bcs;
    std::optional<Forcing> forcing;
};

// One backward-Euler step from state u^n at time t_new - dt, Picard iterations
// sweeping S, E, I, R, D.
StateFields picard_step(const ModelProblem& problem, const SolverContext& ctx, const StateFields& un, double t_new,
                        const PicardConfig& cfg, StepReport& report);

using StepObserver = std::function<void(const StepReport&, const StateFields&)>;

std::vector<StepReport> run_simulation(const ModelProblem& problem, const SolverContext& ctx, StateFields& state,
                                       double t0, int steps, const PicardConfig& cfg,
                                       const StepObserver& observer = {});

std::array<double, n_compartments> integrate_state(const StateFields& u, const Mesh& mesh);

}  // namespace epidd
