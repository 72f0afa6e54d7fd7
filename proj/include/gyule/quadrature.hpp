#pragma once

#include <functional>
#include <span>

#include "gyule/specfun.hpp"

namespace gyule {

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-11;
    int max_subdivisions = 4000;
};

using Integrand = std::function<double(double)>;

// Globally adaptive Gauss-Kronrod (10/21 point) integration of f over
// [lo, hi]. Either bound may be infinite; semi-infinite ranges use
// x = lo + s/(1-s) and the full line uses x = s/(1-s^2), s in the open unit
// interval, so the integrand is never evaluated at an infinite abscissa or at
// a finite endpoint. Relative tolerances are floored at 50 machine epsilons.
// Integrable endpoint singularities are resolved by
// bisection. Throws AccuracyError when the subdivision cap is reached first.
EvalResult integrate(const Integrand& f, double lo, double hi,
                     const QuadratureOptions& opts = {});

// Same, with the range pre-split at the given interior points (peaks, kinks).
EvalResult integrate(const Integrand& f, double lo, double hi,
                     std::span<const double> breakpoints,
                     const QuadratureOptions& opts = {});

}  // namespace gyule
