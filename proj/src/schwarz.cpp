#include "epidd/schwarz.hpp"
#include "epidd/kernels.hpp"

#include <chrono>
#include <stdexcept>

namespace epidd {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

OneLevelSchwarz::OneLevelSchwarz(const CsrMatrix& a, const Decomposition& d, SchwarzVariant variant)
    : variant_(variant), n_(a.n_rows), dofs_(d.subdomain_dofs)
{
    if (d.num_dofs() != a.n_rows) throw DimensionError("Schwarz: decomposition does not match the matrix");
    const auto t0 = std::chrono::steady_clock::now();
    const int ns = static_cast<int>(dofs_.size());
    owned_.resize(ns);
    local_.resize(ns);
    std::vector<std::string> errors(ns);
#pragma omp parallel for schedule(dynamic, 1)
    for (int s = 0; s < ns; ++s) {
        owned_[s].resize(dofs_[s].size());
        for (std::size_t k = 0; k < dofs_[s].size(); ++k) owned_[s][k] = d.owner[dofs_[s][k]] == s;
        try {
            local_[s].factorize(principal_submatrix(a, dofs_[s]));
        } catch (const std::exception& e) {
            errors[s] = e.what();
        }
    }
    for (int s = 0; s < ns; ++s)
        if (!errors[s].empty())
            throw SingularMatrixError("subdomain " + std::to_string(s) + ": local block is singular (" + errors[s] + ")");
    setup_seconds_ = seconds_since(t0);
}

void OneLevelSchwarz::apply(const Vector& r, Vector& z) const
{
    z.assign(n_, 0.0);
    const int ns = num_subdomains();
    if (variant_ == SchwarzVariant::ras) {
#pragma omp parallel
        {
            Vector buf;
#pragma omp for schedule(dynamic, 1)
            for (int s = 0; s < ns; ++s) {
                const auto& dofs = dofs_[s];
                buf.resize(dofs.size());
                for (std::size_t k = 0; k < dofs.size(); ++k) buf[k] = r[dofs[k]];
                local_[s].solve(buf.data(), buf.data());
                for (std::size_t k = 0; k < dofs.size(); ++k)
                    if (owned_[s][k]) z[dofs[k]] = buf[k];
            }
        }
        return;
    }
    std::vector<Vector> sol(ns);
#pragma omp parallel for schedule(dynamic, 1)
    for (int s = 0; s < ns; ++s) {
        const auto& dofs = dofs_[s];
        sol[s].resize(dofs.size());
        for (std::size_t k = 0; k < dofs.size(); ++k) sol[s][k] = r[dofs[k]];
        local_[s].solve(sol[s].data(), sol[s].data());
    }
    for (int s = 0; s < ns; ++s)
        for (std::size_t k = 0; k < dofs_[s].size(); ++k) z[dofs_[s][k]] += sol[s][k];
}

void OneLevelSchwarz::apply_serial(const Vector& r, Vector& z) const
{
    z.assign(n_, 0.0);
    Vector buf;
    for (int s = 0; s < num_subdomains(); ++s) {
        const auto& dofs = dofs_[s];
        buf.resize(dofs.size());
        for (std::size_t k = 0; k < dofs.size(); ++k) buf[k] = r[dofs[k]];
        local_[s].solve(buf.data(), buf.data());
        for (std::size_t k = 0; k < dofs.size(); ++k) {
            if (variant_ == SchwarzVariant::asm_)
                z[dofs[k]] += buf[k];
            else if (owned_[s][k])
                z[dofs[k]] = buf[k];
        }
    }
}

CoarseCorrection::CoarseCorrection(const CsrMatrix& a, const CoarseSpace& cs, const CoarseOptions& opt)
    : cs_(cs), opt_(opt)
{
    const auto t0 = std::chrono::steady_clock::now();
    if (cs.z.n_rows != a.n_rows) throw DimensionError("coarse space does not match the matrix");
    ac_ = multiply(cs.r0, multiply(a, cs.z));
    switch (opt_.kind) {
    case CoarseSolverKind::direct:
        direct_.factorize(ac_);
        break;
    case CoarseSolverKind::gmres_ras:
        if (!opt_.coarse_decomposition) throw std::invalid_argument("coarse RAS needs a coarse decomposition");
        ras_ = std::make_unique<OneLevelSchwarz>(ac_, *opt_.coarse_decomposition, SchwarzVariant::ras);
        break;
    case CoarseSolverKind::gmres_amg:
        amg_ = std::make_unique<AmgHierarchy>(amg_setup(ac_, opt_.amg));
        break;
    }
    setup_seconds_ = seconds_since(t0);
}

CoarseCorrection::~CoarseCorrection() = default;

void CoarseCorrection::apply(const Vector& w, Vector& out) const
{
    Vector wc(cs_.r0.n_rows), xc(cs_.r0.n_rows, 0.0);
    kernels::spmv(cs_.r0, w.data(), wc.data());
    if (opt_.kind == CoarseSolverKind::direct) {
        direct_.solve(wc.data(), xc.data());
    } else {
        LinearOperator m;
        if (ras_)
            m = [this](const Vector& in, Vector& o) { ras_->apply(in, o); };
        else
            m = [this](const Vector& in, Vector& o) { amg_->vcycle(in, o); };
        const KrylovReport rep = gmres(as_operator(ac_), wc, m, opt_.inner, xc);
        stats_.inner_iterations.push_back(rep.iterations);
        if (!rep.converged) ++stats_.not_converged;
    }
    out.resize(cs_.z.n_rows);
    kernels::spmv(cs_.z, xc.data(), out.data());
}

void apply_two_grid(const LinearOperator& m_ras, const LinearOperator& q, const CsrMatrix& a, const Vector& r,
                    Vector& z)
{
    const std::size_t n = r.size();
    Vector res(n), t(n);
    m_ras(r, z);
    kernels::residual(a, r.data(), z.data(), res.data());
    q(res, t);
    kernels::axpy(1.0, t.data(), z.data(), n);
    kernels::residual(a, r.data(), z.data(), res.data());
    m_ras(res, t);
    kernels::axpy(1.0, t.data(), z.data(), n);
}

PcKind parse_pc_kind(const std::string& name)
{
    if (name == "none") return PcKind::none;
    if (name == "asm") return PcKind::asm_;
    if (name == "ras1") return PcKind::ras1;
    if (name == "ras2") return PcKind::ras2;
    if (name == "ras2-v2") return PcKind::ras2_v2;
    if (name == "ras2-v3") return PcKind::ras2_v3;
    throw std::invalid_argument("unknown preconditioner '" + name +
                                "' (expected ras1, ras2, ras2-v2, ras2-v3, asm or none)");
}

std::string to_string(PcKind kind)
{
    switch (kind) {
    case PcKind::none: return "none";
    case PcKind::asm_: return "asm";
    case PcKind::ras1: return "ras1";
    case PcKind::ras2: return "ras2";
    case PcKind::ras2_v2: return "ras2-v2";
    case PcKind::ras2_v3: return "ras2-v3";
    }
    return "?";
}

bool is_two_grid(PcKind kind)
{
    return kind == PcKind::ras2 || kind == PcKind::ras2_v2 || kind == PcKind::ras2_v3;
}

bool needs_flexible(PcKind kind) { return kind == PcKind::ras2_v2 || kind == PcKind::ras2_v3; }

Preconditioner::Preconditioner(PcKind kind, const CsrMatrix& a, const PcContext& ctx) : kind_(kind), a_(a)
{
    if (kind == PcKind::none) return;
    if (!ctx.fine) throw std::invalid_argument("preconditioner " + to_string(kind) + " needs a decomposition");
    one_level_ = std::make_unique<OneLevelSchwarz>(a, *ctx.fine,
                                                   kind == PcKind::asm_ ? SchwarzVariant::asm_ : SchwarzVariant::ras);
    setup_.local_factorization_seconds = one_level_->setup_seconds();
    if (!is_two_grid(kind)) return;
    if (!ctx.coarse_space) throw std::invalid_argument("preconditioner " + to_string(kind) + " needs a coarse space");
    CoarseOptions opt;
    opt.inner = ctx.krylov.inner();
    opt.amg = ctx.amg;
    opt.coarse_decomposition = ctx.coarse;
    opt.kind = kind == PcKind::ras2      ? CoarseSolverKind::direct
               : kind == PcKind::ras2_v2 ? CoarseSolverKind::gmres_ras
                                         : CoarseSolverKind::gmres_amg;
    coarse_ = std::make_unique<CoarseCorrection>(a, *ctx.coarse_space, opt);
    setup_.coarse_setup_seconds = coarse_->setup_seconds();
}

Preconditioner::~Preconditioner() = default;

void Preconditioner::apply(const Vector& r, Vector& z) const
{
    if (kind_ == PcKind::none) {
        z = r;
        return;
    }
    if (!coarse_) {
        one_level_->apply(r, z);
        return;
    }
    apply_two_grid([this](const Vector& in, Vector& out) { one_level_->apply(in, out); },
                   [this](const Vector& in, Vector& out) { coarse_->apply(in, out); }, a_, r, z);
}

LinearOperator Preconditioner::as_operator() const
{
    return [this](const Vector& in, Vector& out) { apply(in, out); };
}

std::unique_ptr<Preconditioner> make_preconditioner(PcKind kind, const CsrMatrix& a, const PcContext& ctx)
{
    return std::make_unique<Preconditioner>(kind, a, ctx);
}

}  // namespace epidd
