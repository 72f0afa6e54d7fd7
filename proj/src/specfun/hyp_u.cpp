#include <algorithm>
#include <cmath>
#include <vector>

#include "gyule/errors.hpp"
#include "gyule/quadrature.hpp"
#include "gyule/specfun.hpp"

namespace gyule {

// Gamma(a) U(a,b,z) = int_0^inf exp(-z y) y^(a-1) (1+y)^(b-a-1) dy.
// The integrand is scaled by its maximum over a log-spaced grid so large a
// neither overflows nor underflows; the scale is returned as log_scale.
ScaledEval log_gamma_hyp_u(double a, double b, double z, double rel_tol) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("hyp_u: requires a > 0");
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("hyp_u: requires z > 0");
    if (!std::isfinite(b)) throw DomainError("hyp_u: non-finite b");

    const double am1 = a - 1.0;
    const double bam1 = b - a - 1.0;
    auto log_kernel = [=](double y) { return am1 * std::log(y) + bam1 * std::log1p(y) - z * y; };

    // Locate the peak on a log grid; it only serves as scale and breakpoint.
    const double y_hi = 1e8 * std::max(1.0, a / z);
    const double y_lo = a < 1.0 ? 1e-3 : 1e-12 / std::max(1.0, z);
    constexpr int kGrid = 200;
    double peak_y = y_lo;
    double peak = log_kernel(y_lo);
    for (int i = 1; i <= kGrid; ++i) {
        const double y = y_lo * std::pow(y_hi / y_lo, static_cast<double>(i) / kGrid);
        const double g = log_kernel(y);
        if (g > peak) {
            peak = g;
            peak_y = y;
        }
    }

    QuadratureOptions opts;
    opts.abs_tol = 0.0;
    opts.rel_tol = rel_tol;

    std::vector<double> cuts{peak_y, 1.0 / z, 30.0 / z};
    EvalResult total{0.0, 0.0, EvalMethod::quadrature};
    if (a < 1.0) {
        // y = s^(1/a) on [0, 1] absorbs the y^(a-1) endpoint singularity.
        const double inv_a = 1.0 / a;
        auto head = [=](double s) {
            const double y = std::pow(s, inv_a);
            return inv_a * std::exp(bam1 * std::log1p(y) - z * y - peak);
        };
        auto tail = [&](double y) { return std::exp(log_kernel(y) - peak); };
        std::vector<double> head_cuts;
        for (double y : cuts)
            if (y < 1.0) head_cuts.push_back(std::pow(y, a));
        const EvalResult h = integrate(head, 0.0, 1.0, head_cuts, opts);
        const EvalResult t = integrate(tail, 1.0, INFINITY, cuts, opts);
        total.value = h.value + t.value;
        total.abs_error = h.abs_error + t.abs_error;
    } else {
        auto kernel = [&](double y) { return y == 0.0 ? (am1 == 0.0 ? std::exp(-peak) : 0.0)
                                                      : std::exp(log_kernel(y) - peak); };
        total = integrate(kernel, 0.0, INFINITY, cuts, opts);
    }
    if (!(total.value > 0.0))
        throw AccuracyError("hyp_u: integral underflowed", total.value, total.abs_error);
    return ScaledEval{peak, total};
}

EvalResult hyp_u(double a, double b, double z, double rel_tol) {
    const ScaledEval s = log_gamma_hyp_u(a, b, z, rel_tol);
    const double log_value = s.log_scale + std::log(s.scaled.value) - log_gamma(a);
    const double value = std::exp(log_value);
    if (!std::isfinite(value) || value == 0.0)
        throw AccuracyError("hyp_u: value not representable as a double", value, 0.0);
    const double rel_err = s.scaled.abs_error / s.scaled.value;
    EvalResult r{value, value * (rel_err + 1e-15 * (1.0 + std::abs(log_value))), EvalMethod::quadrature};
    if (r.abs_error > std::max(1e-10, 2.0 * rel_tol) * value)
        throw AccuracyError("hyp_u: accuracy target not met", r.value, r.abs_error);
    return r;
}

}  // namespace gyule
