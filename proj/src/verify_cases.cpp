#include "epidd/verify_cases.hpp"

#include "epidd/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace epidd {

ReferenceTable spatial_reference() { return {{0.05, 0.02, 0.01}, {0.01289, 0.00208, 0.00052}}; }

ReferenceTable temporal_reference() { return {{0.1, 0.01, 0.005}, {0.00374, 0.00037, 0.00019}}; }

VerifyOutcome judge_convergence(const ConvergenceResult& got, const ReferenceTable& ref, double rel_tol,
                                double order, double order_tol)
{
    VerifyOutcome out{true, {}};
    std::ostringstream why;
    if (got.rows.size() != ref.errors.size()) {
        out.pass = false;
        why << "row count " << got.rows.size() << " != " << ref.errors.size() << "; ";
    }
    if (!got.monotone) {
        out.pass = false;
        why << "errors not strictly decreasing; ";
    }
    for (std::size_t k = 0; k < std::min(got.rows.size(), ref.errors.size()); ++k) {
        const double dev = std::abs(got.rows[k].error - ref.errors[k]) / ref.errors[k];
        if (!(dev <= rel_tol)) {
            out.pass = false;
            why << "error[" << k << "] off by " << std::setprecision(3) << 100.0 * dev << "%; ";
        }
        if (k > 0 && !(std::abs(got.rows[k].order - order) <= order_tol)) {
            out.pass = false;
            why << "order[" << k << "] = " << std::setprecision(4) << got.rows[k].order << "; ";
        }
    }
    out.summary = out.pass ? "all errors and orders within tolerance" : why.str();
    return out;
}

namespace {

void print_convergence(const std::string& label, const ConvergenceResult& res, const ReferenceTable& ref,
                       const std::string& dir, const std::string& name, std::ostream& log)
{
    log << std::left << std::setw(10) << label << std::setw(14) << "error" << std::setw(10) << "order"
        << "reference\n";
    auto csv = open_output(dir, "verify_" + name + ".csv");
    csv << label << ",error,order,reference\n";
    for (std::size_t k = 0; k < res.rows.size(); ++k) {
        const auto& r = res.rows[k];
        const double refe = k < ref.errors.size() ? ref.errors[k] : NAN;
        log << std::left << std::setw(10) << r.step << std::setw(14) << std::setprecision(5) << r.error
            << std::setw(10) << std::setprecision(5) << r.order << refe << '\n';
        csv << std::setprecision(10) << r.step << ',' << r.error << ',' << r.order << ',' << refe << '\n';
    }
}

void print_outcome(const std::string& name, const VerifyOutcome& v, std::ostream& log)
{
    log << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.summary << '\n';
}

}  // namespace

VerifyOutcome verify_mms1d_space(const std::string& dir, std::ostream& log)
{
    const ReferenceTable ref = spatial_reference();
    const ConvergenceResult res = mms_convergence_spatial_1d(ref.steps);
    print_convergence("h", res, ref, dir, "mms1d-space", log);
    const VerifyOutcome v = judge_convergence(res, ref, mms_error_rel_tol, 2.0, mms_order_tol);
    print_outcome("mms1d-space", v, log);
    return v;
}

VerifyOutcome verify_mms1d_time(const std::string& dir, std::ostream& log)
{
    const ReferenceTable ref = temporal_reference();
    const ConvergenceResult res = mms_convergence_temporal_1d(ref.steps);
    print_convergence("dt", res, ref, dir, "mms1d-time", log);
    const VerifyOutcome v = judge_convergence(res, ref, mms_error_rel_tol, 1.0, mms_order_tol);
    print_outcome("mms1d-time", v, log);
    return v;
}

VerifyOutcome judge_mms2d(const Mms2dTrace& trace, double bound)
{
    VerifyOutcome v{true, {}};
    std::ostringstream why;
    if (trace.error.empty()) return {false, "empty trace"};
    for (double e : trace.error)
        if (!std::isfinite(e)) return {false, "non-finite error"};
    if (trace.picard_failures > 0 || trace.linear_failures > 0) {
        v.pass = false;
        why << trace.picard_failures << " Picard and " << trace.linear_failures << " linear failures; ";
    }
    const double peak = *std::max_element(trace.error.begin(), trace.error.end());
    const double last = trace.error.back();
    if (!(peak <= bound)) {
        v.pass = false;
        why << "peak error " << peak << " above " << bound << "; ";
    }
    if (trace.error.size() > 2 && !(last <= peak)) {
        v.pass = false;
        why << "error still growing at the end; ";
    }
    std::ostringstream ok;
    ok << "peak error " << std::setprecision(4) << peak << ", final " << last;
    v.summary = v.pass ? ok.str() : why.str();
    return v;
}

VerifyOutcome verify_mms2d(const Mms2dOptions& opt, const std::string& dir, std::ostream& log)
{
    log << "2D manufactured solution on a " << opt.n << "x" << opt.n << " mesh, " << opt.steps << " steps of "
        << opt.dt << '\n';
    const Mms2dTrace trace = mms_run_2d(opt);
    auto csv = open_output(dir, "verify_mms2d.csv");
    csv << "t,error\n" << std::setprecision(10);
    for (std::size_t k = 0; k < trace.t.size(); ++k) csv << trace.t[k] << ',' << trace.error[k] << '\n';
    const std::size_t stride = std::max<std::size_t>(1, trace.t.size() / 10);
    log << std::left << std::setw(12) << "t" << "error\n";
    for (std::size_t k = 0; k < trace.t.size(); k += stride)
        log << std::setw(12) << trace.t[k] << std::setprecision(5) << trace.error[k] << '\n';
    const VerifyOutcome v = judge_mms2d(trace, mms2d_error_bound);
    print_outcome("mms2d", v, log);
    return v;
}

VerifyOutcome verify_ode_limit(const std::vector<double>& populations, const std::string& dir, std::ostream& log)
{
    auto csv = open_output(dir, "verify_ode-limit.csv");
    csv << "population,S,E,I,R,D\n" << std::setprecision(10);
    log << std::left << std::setw(12) << "population";
    for (const char* n : compartment_names) log << std::setw(12) << n;
    log << '\n';
    VerifyOutcome v{true, {}};
    std::ostringstream why;
    for (double pop : populations) {
        OdeLimitOptions opt;
        opt.population = pop;
        const OdeLimitResult res = pde_ode_compare(opt);
        csv << pop;
        log << std::setw(12) << pop;
        for (double d : res.max_discrepancy) {
            csv << ',' << d;
            log << std::setw(12) << std::setprecision(4) << d;
        }
        csv << '\n';
        log << '\n';
        const double worst = *std::max_element(res.max_discrepancy.begin(), res.max_discrepancy.end());
        if (!(worst <= ode_limit_tol) || res.picard_failures > 0 || res.linear_failures > 0) {
            v.pass = false;
            why << "population " << pop << ": max discrepancy " << worst << "; ";
        }
    }
    v.summary = v.pass ? "all discrepancies within 1e-3" : why.str();
    print_outcome("ode-limit", v, log);
    return v;
}

}  // namespace epidd
