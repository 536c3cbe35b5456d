#pragma once

#include <functional>

namespace mvindep::sf {

/// A real function on an open interval, with flags marking endpoints where it
/// may be unbounded (or where the interval is effectively unbounded in the
/// function's natural variable, e.g. a quantile as u → 1).
struct Integrand {
    std::function<double(double)> eval;
    bool singular_left = false;
    bool singular_right = false;
};

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;
};

/// Adaptive Gauss–Kronrod (7/15) integration of f over (a, b).
///
/// Panels are bisected in order of decreasing error estimate until the total
/// estimate is below max(abs_tol, rel_tol·|value|). A singular right endpoint
/// is removed with u = b - (b-a)e^{-t}, a singular left one with
/// u = a + (b-a)e^{-t}; the resulting half-line is folded onto (0, 1) with
/// t = s/(1-s). With both flags set the interval is split at its midpoint.
/// Points that round onto a flagged endpoint contribute zero.
///
/// Throws ConvergenceError (carrying the estimate and its error bound) when the
/// subdivision budget runs out.
double integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec = {});

/// Zero of g inside [lo, hi] by Brent's method (bisection with secant and
/// inverse-quadratic acceleration). Stops when the bracket is narrower than tol.
/// Throws BracketError when g(lo) and g(hi) have the same sign.
double find_root(const std::function<double(double)>& g, double lo, double hi, double tol);

}  // namespace mvindep::sf
