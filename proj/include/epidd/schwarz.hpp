#pragma once

#include "epidd/amg.hpp"
#include "epidd/csr.hpp"
#include "epidd/decomp.hpp"
#include "epidd/krylov.hpp"
#include "epidd/lu.hpp"

#include <memory>
#include <string>
#include <vector>

namespace epidd {

enum class SchwarzVariant { ras, asm_ };

// Sum_i R_i^T [D_i] (R_i A R_i^T)^-1 R_i, with D_i present for RAS.
class OneLevelSchwarz {
public:
    OneLevelSchwarz(const CsrMatrix& a, const Decomposition& d, SchwarzVariant variant);

    // Subdomain solves run concurrently.
    void apply(const Vector& r, Vector& z) const;
    // Reference implementation: subdomains in order on the calling thread.
    void apply_serial(const Vector& r, Vector& z) const;

    SchwarzVariant variant() const { return variant_; }
    int num_subdomains() const { return static_cast<int>(dofs_.size()); }
    double setup_seconds() const { return setup_seconds_; }

private:
    SchwarzVariant variant_;
    Index n_;
    std::vector<std::vector<Index>> dofs_;
    std::vector<std::vector<char>> owned_;
    std::vector<SparseLu> local_;
    double setup_seconds_ = 0.0;
};

enum class CoarseSolverKind { direct, gmres_ras, gmres_amg };

struct CoarseOptions {
    CoarseSolverKind kind = CoarseSolverKind::direct;
    KrylovConfig inner;  // tolerances and cap (max_outer) of the inner solve
    const Decomposition* coarse_decomposition = nullptr;  // required for gmres_ras
    AmgConfig amg;
};

struct CoarseStats {
    std::vector<int> inner_iterations;
    int not_converged = 0;
};

// Q = Z A_c^-1 Z^T with the Galerkin operator A_c = Z^T A Z.
class CoarseCorrection {
public:
    CoarseCorrection(const CsrMatrix& a, const CoarseSpace& cs, const CoarseOptions& opt);
    ~CoarseCorrection();

    // Not safe for concurrent calls: inner-solve statistics are recorded here.
    void apply(const Vector& w, Vector& out) const;

    const CsrMatrix& coarse_matrix() const { return ac_; }
    const CoarseStats& stats() const { return stats_; }
    void reset_stats() const { stats_ = {}; }
    double setup_seconds() const { return setup_seconds_; }
    CoarseSolverKind kind() const { return opt_.kind; }

private:
    const CoarseSpace& cs_;
    CoarseOptions opt_;
    CsrMatrix ac_;
    SparseLu direct_;
    std::unique_ptr<OneLevelSchwarz> ras_;
    std::unique_ptr<AmgHierarchy> amg_;
    mutable CoarseStats stats_;
    double setup_seconds_ = 0.0;
};

// Multiplicative two-grid action from a zero initial guess:
// z1 = M r; z2 = z1 + Q (r - A z1); z = z2 + M (r - A z2).
void apply_two_grid(const LinearOperator& m_ras, const LinearOperator& q, const CsrMatrix& a, const Vector& r,
                    Vector& z);

enum class PcKind { none, asm_, ras1, ras2, ras2_v2, ras2_v3 };

PcKind parse_pc_kind(const std::string& name);
std::string to_string(PcKind kind);
bool is_two_grid(PcKind kind);
// True when the action changes between applications and the outer solver must be FGMRES.
bool needs_flexible(PcKind kind);

struct SetupReport {
    double local_factorization_seconds = 0.0;
    double coarse_setup_seconds = 0.0;
    double total() const { return local_factorization_seconds + coarse_setup_seconds; }
};

struct PcContext {
    const Decomposition* fine = nullptr;
    const Decomposition* coarse = nullptr;  // coarse-mesh decomposition for ras2-v2
    const CoarseSpace* coarse_space = nullptr;
    KrylovConfig krylov;
    AmgConfig amg;
};

class Preconditioner {
public:
    Preconditioner(PcKind kind, const CsrMatrix& a, const PcContext& ctx);
    ~Preconditioner();

    void apply(const Vector& r, Vector& z) const;
    LinearOperator as_operator() const;

    PcKind kind() const { return kind_; }
    bool flexible() const { return needs_flexible(kind_); }
    const SetupReport& setup() const { return setup_; }
    const CoarseCorrection* coarse() const { return coarse_.get(); }

private:
    PcKind kind_;
    const CsrMatrix& a_;
    std::unique_ptr<OneLevelSchwarz> one_level_;
    std::unique_ptr<CoarseCorrection> coarse_;
    SetupReport setup_;
};

std::unique_ptr<Preconditioner> make_preconditioner(PcKind kind, const CsrMatrix& a, const PcContext& ctx);

}  // namespace epidd
