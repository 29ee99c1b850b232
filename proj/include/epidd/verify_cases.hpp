#pragma once

#include "epidd/mms.hpp"
#include "epidd/ode.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace epidd {

// Reference errors for the one-dimensional convergence studies.
struct ReferenceTable {
    std::vector<double> steps;
    std::vector<double> errors;
};

ReferenceTable spatial_reference();
ReferenceTable temporal_reference();

struct VerifyOutcome {
    bool pass = false;
    std::string summary;
};

// Compare a convergence study to its reference: errors within `rel_tol`, and
// every order (from the second row on) within `order_tol` of `order`.
VerifyOutcome judge_convergence(const ConvergenceResult& got, const ReferenceTable& ref, double rel_tol,
                                double order, double order_tol);

// Each driver prints a table to `log`, writes verify_<case>.csv into `dir`
// and returns the pass/fail decision.
VerifyOutcome verify_mms1d_space(const std::string& dir, std::ostream& log);
VerifyOutcome verify_mms1d_time(const std::string& dir, std::ostream& log);
VerifyOutcome verify_mms2d(const Mms2dOptions& opt, const std::string& dir, std::ostream& log);
VerifyOutcome verify_ode_limit(const std::vector<double>& populations, const std::string& dir, std::ostream& log);

// Error trace shape: finite, no solver failures, final error below the peak
// and below `bound`.
VerifyOutcome judge_mms2d(const Mms2dTrace& trace, double bound);

inline constexpr double mms_error_rel_tol = 0.05;
inline constexpr double mms_order_tol = 0.05;
inline constexpr double ode_limit_tol = 1e-3;
inline constexpr double mms2d_error_bound = 1e-2;

}  // namespace epidd
