#include "epidd/scenario.hpp"

#include <cmath>
#include <sstream>

namespace epidd {

Vector gaussian_ic(const Mesh& mesh, const GaussianPulse& pulse)
{
    if (!(pulse.radius > 0.0)) throw std::invalid_argument("Gaussian radius must be positive");
    Vector f(mesh.num_vertices());
    const double inv = 1.0 / (2.0 * pulse.radius * pulse.radius);
    for (Index v = 0; v < mesh.num_vertices(); ++v) {
        const double dx = mesh.vertices[v][0] - pulse.center[0];
        const double dy = mesh.vertices[v][1] - pulse.center[1];
        f[v] = pulse.amplitude * std::exp(-(dx * dx + dy * dy) * inv);
    }
    return f;
}

Vector multi_gaussian_ic(const Mesh& mesh, const std::vector<GaussianPulse>& pulses)
{
    Vector f(mesh.num_vertices(), 0.0);
    for (const auto& p : pulses) {
        const Vector g = gaussian_ic(mesh, p);
        for (std::size_t k = 0; k < f.size(); ++k) f[k] += g[k];
    }
    return f;
}

double gaussian_amplitude_for_total(const Point& center, double radius, double total, const std::array<Point, 2>& box)
{
    if (!(total > 0.0)) throw std::invalid_argument("requested population total must be positive");
    if (!(radius > 0.0)) throw std::invalid_argument("Gaussian radius must be positive");
    const double s = std::sqrt(2.0) * radius;
    const double pi = std::acos(-1.0);
    double mass = 2.0 * pi * radius * radius;
    for (int d = 0; d < 2; ++d) {
        if (box[1][d] == box[0][d]) continue;
        mass *= 0.5 * (std::erf((box[1][d] - center[d]) / s) - std::erf((box[0][d] - center[d]) / s));
    }
    return total / mass;
}

Discretization build_mesh(const MeshSpec& spec)
{
    Mesh base;
    if (spec.source == "square")
        base = unit_square_mesh(spec.nx);
    else if (spec.source == "rectangle")
        base = rectangle_mesh(spec.nx, spec.ny, spec.lx, spec.ly);
    else if (spec.source == "interval")
        base = interval_mesh(spec.nx, spec.lx);
    else if (spec.source == "file")
        base = read_mesh(spec.file);
    else
        throw std::invalid_argument("unknown mesh source '" + spec.source + "'");
    if (spec.refine < 0) throw std::invalid_argument("mesh.refine must be >= 0");
    Discretization d;
    if (spec.refine == 0) {
        d.mesh = std::move(base);
        return d;
    }
    for (int k = 0; k + 1 < spec.refine; ++k) base = refine_uniform(base).fine;
    d.pair = refine_uniform(base);
    d.mesh = d.pair->fine;
    return d;
}

StateFields initial_state(const InitialCondition& ic, const Mesh& mesh)
{
    StateFields u(mesh.num_vertices());
    if (ic.type == "uniform") {
        for (Index v = 0; v < mesh.num_vertices(); ++v) {
            u[Compartment::i][v] = ic.infected_fraction * ic.population;
            u[Compartment::s][v] = ic.population - u[Compartment::i][v];
        }
    } else if (ic.type == "center_gaussian") {
        const GaussianPulse p{ic.center, ic.infected_fraction * ic.population, std::sqrt(0.5 / ic.exponent)};
        u[Compartment::i] = gaussian_ic(mesh, p);
        for (Index v = 0; v < mesh.num_vertices(); ++v) u[Compartment::s][v] = ic.population - u[Compartment::i][v];
    } else if (ic.type == "multi_gaussian") {
        const auto box = mesh.bounding_box();
        for (int c = 0; c < n_compartments; ++c) {
            std::vector<GaussianPulse> pulses;
            for (const auto& pc : ic.centers) {
                if (pc.totals[c] <= 0.0) continue;
                pulses.push_back({pc.center, gaussian_amplitude_for_total(pc.center, pc.radius, pc.totals[c], box),
                                  pc.radius});
            }
            u[c] = multi_gaussian_ic(mesh, pulses);
        }
        for (double& s : u[Compartment::s]) s += ic.background;
    } else {
        throw std::invalid_argument("unknown initial condition type '" + ic.type + "'");
    }
    return u;
}

Scenario square_scenario()
{
    Scenario sc;
    sc.name = "square";
    sc.mesh.source = "square";
    sc.mesh.nx = sc.mesh.ny = 16;
    sc.mesh.refine = 1;
    sc.params = ModelParameters::square_domain();
    sc.ic.type = "center_gaussian";
    sc.ic.population = 2000.0;
    sc.ic.infected_fraction = 0.1;
    sc.ic.exponent = 10.0;
    sc.solver.pc = PcKind::ras2_v3;
    sc.solver.subdomains = 4;
    return sc;
}

Scenario ontario_scenario()
{
    Scenario sc;
    sc.name = "ontario";
    sc.mesh.source = "rectangle";
    sc.mesh.nx = 64;
    sc.mesh.ny = 32;
    sc.mesh.lx = 800.0;
    sc.mesh.ly = 400.0;
    sc.mesh.refine = 1;
    RegionalBeta beta;
    beta.beta_central = 3.0e-3;
    beta.beta_eastern = 2.5e-3;
    beta.beta_western = 2.5e-3;
    beta.x_eastern = 600.0;
    beta.x_western = 300.0;
    sc.params = ModelParameters::ontario(beta);
    sc.ic.type = "multi_gaussian";
    sc.ic.background = 1.0;
    sc.ic.centers = {
        {{480.0, 160.0}, 40.0, {6.0e6, 3000.0, 1500.0, 20000.0, 800.0}},
        {{420.0, 130.0}, 25.0, {1.5e6, 600.0, 300.0, 4000.0, 150.0}},
        {{700.0, 260.0}, 30.0, {1.0e6, 300.0, 150.0, 2000.0, 60.0}},
        {{180.0, 90.0}, 25.0, {5.0e5, 150.0, 80.0, 900.0, 30.0}},
        {{320.0, 220.0}, 20.0, {3.0e5, 60.0, 30.0, 400.0, 10.0}},
    };
    sc.solver.pc = PcKind::ras2_v3;
    sc.solver.subdomains = 8;
    sc.picard.dt = 0.1;
    return sc;
}

namespace {

std::vector<PopulationCenter> parse_centers(const std::string& text)
{
    std::vector<PopulationCenter> out;
    std::istringstream groups(text);
    std::string group;
    while (std::getline(groups, group, ';')) {
        std::istringstream in(group);
        std::vector<double> v;
        double x = 0.0;
        while (in >> x) v.push_back(x);
        if (in.fail() && !in.eof()) throw ConfigError("ic.centers: non-numeric entry in '" + group + "'");
        if (v.empty()) continue;
        if (v.size() != 8)
            throw ConfigError("ic.centers: each center needs 'x y radius S E I R D', got '" + group + "'");
        PopulationCenter pc;
        pc.center = {v[0], v[1]};
        pc.radius = v[2];
        for (int c = 0; c < n_compartments; ++c) pc.totals[c] = v[3 + c];
        out.push_back(pc);
    }
    return out;
}

}  // namespace

Scenario scenario_from_config(const Config& cfg)
{
    static const std::set<std::string> known{
        "scenario",         "mesh.source",       "mesh.n",           "mesh.nx",          "mesh.ny",
        "mesh.lx",          "mesh.ly",           "mesh.file",        "mesh.refine",      "model.A",
        "model.beta",       "model.beta_i",      "model.beta_e",     "model.beta_mode",  "model.beta_central",
        "model.beta_eastern", "model.beta_western", "model.x_eastern", "model.x_western", "model.nu",
        "model.nu_s",       "model.nu_e",        "model.nu_i",       "model.nu_r",       "model.gamma_r",
        "model.gamma_d",    "model.gamma_e",     "model.sigma",      "model.alpha",      "model.mu",
        "ic.type",          "ic.population",     "ic.infected_fraction", "ic.exponent",  "ic.center",
        "ic.background",    "ic.centers",        "time.dt",          "time.steps",       "time.t_final",
        "solver.pc",        "solver.subdomains", "solver.overlap",   "solver.rtol",      "solver.atol",
        "solver.dtol",      "solver.max_outer",  "solver.max_inner", "solver.restart",   "picard.tol",
        "picard.max_iters", "picard.warm_start", "amg.theta",        "amg.max_levels",   "amg.coarse_size",
        "output.dir",       "output.vtk_every",  "output.timeseries"};
    cfg.check_keys(known, {"bc."});

    const std::string preset = cfg.get_string("scenario", "square");
    Scenario sc;
    if (preset == "square")
        sc = square_scenario();
    else if (preset == "ontario")
        sc = ontario_scenario();
    else
        throw ConfigError("unknown scenario preset '" + preset + "' (expected square or ontario)");

    sc.mesh.source = cfg.get_string("mesh.source", sc.mesh.source);
    if (cfg.has("mesh.n")) sc.mesh.nx = sc.mesh.ny = cfg.get_int("mesh.n", 0);
    sc.mesh.nx = cfg.get_int("mesh.nx", sc.mesh.nx);
    sc.mesh.ny = cfg.get_int("mesh.ny", sc.mesh.ny);
    sc.mesh.lx = cfg.get_double("mesh.lx", sc.mesh.lx);
    sc.mesh.ly = cfg.get_double("mesh.ly", sc.mesh.ly);
    sc.mesh.file = cfg.get_string("mesh.file", sc.mesh.file);
    sc.mesh.refine = cfg.get_int("mesh.refine", sc.mesh.refine);
    if (sc.mesh.source == "file" && sc.mesh.file.empty()) throw ConfigError("mesh.source = file needs mesh.file");

    ModelParameters& p = sc.params;
    p.allee = cfg.get_double("model.A", p.allee);
    const std::string beta_mode = cfg.get_string("model.beta_mode", cfg.has("model.beta_central") ? "regional" : "");
    if (beta_mode == "regional") {
        RegionalBeta rb;
        rb.beta_central = cfg.get_double("model.beta_central", 0.0);
        rb.beta_eastern = cfg.get_double("model.beta_eastern", rb.beta_central);
        rb.beta_western = cfg.get_double("model.beta_western", rb.beta_central);
        rb.x_eastern = cfg.get_double("model.x_eastern", 0.0);
        rb.x_western = cfg.get_double("model.x_western", 0.0);
        auto f = [rb](double x, double, double t) { return rb(x, t); };
        p.beta_i = p.beta_e = f;
    } else if (!beta_mode.empty() && beta_mode != "constant") {
        throw ConfigError("model.beta_mode must be 'constant' or 'regional', got '" + beta_mode + "'");
    }
    if (cfg.has("model.beta")) p.beta_i = p.beta_e = constant_function(cfg.get_double("model.beta", 0.0));
    if (cfg.has("model.beta_i")) p.beta_i = constant_function(cfg.get_double("model.beta_i", 0.0));
    if (cfg.has("model.beta_e")) p.beta_e = constant_function(cfg.get_double("model.beta_e", 0.0));
    if (cfg.has("model.nu")) p.nu_s = p.nu_e = p.nu_i = p.nu_r = cfg.get_double("model.nu", 0.0);
    p.nu_s = cfg.get_double("model.nu_s", p.nu_s);
    p.nu_e = cfg.get_double("model.nu_e", p.nu_e);
    p.nu_i = cfg.get_double("model.nu_i", p.nu_i);
    p.nu_r = cfg.get_double("model.nu_r", p.nu_r);
    p.gamma_r = cfg.get_double("model.gamma_r", p.gamma_r);
    p.gamma_d = cfg.get_double("model.gamma_d", p.gamma_d);
    p.gamma_e = cfg.get_double("model.gamma_e", p.gamma_e);
    p.sigma = cfg.get_double("model.sigma", p.sigma);
    p.alpha = cfg.get_double("model.alpha", p.alpha);
    p.mu = cfg.get_double("model.mu", p.mu);
    p.validate();

    InitialCondition& ic = sc.ic;
    ic.type = cfg.get_string("ic.type", ic.type);
    ic.population = cfg.get_double("ic.population", ic.population);
    ic.infected_fraction = cfg.get_double("ic.infected_fraction", ic.infected_fraction);
    ic.exponent = cfg.get_double("ic.exponent", ic.exponent);
    ic.background = cfg.get_double("ic.background", ic.background);
    if (cfg.has("ic.center")) {
        const auto c = cfg.get_doubles("ic.center");
        if (c.size() != 2) throw ConfigError("ic.center expects two numbers 'x, y'");
        ic.center = {c[0], c[1]};
    }
    if (cfg.has("ic.centers")) ic.centers = parse_centers(cfg.get_string("ic.centers", ""));

    sc.picard.dt = cfg.get_double("time.dt", sc.picard.dt);
    sc.steps = cfg.get_int("time.steps", sc.steps);
    if (cfg.has("time.t_final")) sc.steps = static_cast<int>(std::lround(cfg.get_double("time.t_final", 0.0) / sc.picard.dt));
    sc.picard.tol = cfg.get_double("picard.tol", sc.picard.tol);
    sc.picard.max_iters = cfg.get_int("picard.max_iters", sc.picard.max_iters);
    sc.picard.warm_start = cfg.get_bool("picard.warm_start", sc.picard.warm_start);
    sc.picard.validate();

    if (cfg.has("solver.pc")) {
        try {
            sc.solver.pc = parse_pc_kind(cfg.get_string("solver.pc", ""));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    sc.solver.subdomains = cfg.get_int("solver.subdomains", sc.solver.subdomains);
    sc.solver.overlap = cfg.get_int("solver.overlap", sc.solver.overlap);
    sc.solver.krylov.rtol = cfg.get_double("solver.rtol", sc.solver.krylov.rtol);
    sc.solver.krylov.atol = cfg.get_double("solver.atol", sc.solver.krylov.atol);
    sc.solver.krylov.dtol = cfg.get_double("solver.dtol", sc.solver.krylov.dtol);
    sc.solver.krylov.max_outer = cfg.get_int("solver.max_outer", sc.solver.krylov.max_outer);
    sc.solver.krylov.max_inner = cfg.get_int("solver.max_inner", sc.solver.krylov.max_inner);
    sc.solver.krylov.restart = cfg.get_int("solver.restart", sc.solver.krylov.restart);
    sc.solver.krylov.validate();
    sc.solver.amg.theta = cfg.get_double("amg.theta", sc.solver.amg.theta);
    sc.solver.amg.max_levels = cfg.get_int("amg.max_levels", sc.solver.amg.max_levels);
    sc.solver.amg.coarse_size = cfg.get_int("amg.coarse_size", sc.solver.amg.coarse_size);

    sc.output.dir = cfg.get_string("output.dir", sc.output.dir);
    sc.output.vtk_every = cfg.get_int("output.vtk_every", sc.output.vtk_every);
    sc.output.timeseries = cfg.get_bool("output.timeseries", sc.output.timeseries);

    for (const auto& key : cfg.keys()) {
        if (key.rfind("bc.", 0) != 0) continue;
        BoundaryCondition bc;
        try {
            bc.label = std::stoi(key.substr(3));
        } catch (const std::exception&) {
            throw ConfigError("boundary key '" + key + "' must be bc.<integer label>");
        }
        const std::string v = cfg.get_string(key, "");
        if (v == "neumann") {
            bc.kind = BoundaryCondition::Kind::neumann;
            bc.value = [](int, double, double, double) { return 0.0; };
        } else if (v.rfind("dirichlet", 0) == 0) {
            bc.kind = BoundaryCondition::Kind::dirichlet;
            double g = 0.0;
            if (const auto colon = v.find(':'); colon != std::string::npos) {
                Config tmp;
                tmp.set("v", v.substr(colon + 1));
                g = tmp.get_double("v", 0.0);
            }
            bc.value = [g](int, double, double, double) { return g; };
        } else {
            throw ConfigError("boundary '" + key + "' must be 'neumann' or 'dirichlet[:value]', got '" + v + "'");
        }
        sc.bcs.push_back(bc);
    }
    return sc;
}

SimulationResult run_scenario(const Scenario& sc, const Discretization& disc, const StepObserver& observer)
{
    const FeSpace space(disc.mesh);
    for (const auto& bc : sc.bcs)
        if (boundary_vertices(disc.mesh, bc.label).empty())
            throw std::invalid_argument("boundary label " + std::to_string(bc.label) + " does not exist in the mesh");
    if (sc.ic.type == "multi_gaussian") {
        const auto box = disc.mesh.bounding_box();
        for (const auto& c : sc.ic.centers)
            for (int d = 0; d < 2; ++d)
                if (c.center[d] < box[0][d] || c.center[d] > box[1][d])
                    throw std::invalid_argument("population center lies outside the mesh bounding box");
    }
    ModelProblem prob;
    prob.space = &space;
    prob.params = sc.params;
    prob.bcs = sc.bcs;
    const SolverContext ctx(disc.mesh, sc.solver, disc.pair ? &*disc.pair : nullptr);

    SimulationResult res;
    res.final_state = initial_state(sc.ic, disc.mesh);
    res.initial_integrals = integrate_state(res.final_state, disc.mesh);
    res.reports = run_simulation(prob, ctx, res.final_state, 0.0, sc.steps, sc.picard, observer);
    return res;
}

}  // namespace epidd
