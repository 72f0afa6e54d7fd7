#include <algorithm>
#include <cmath>
#include <vector>

#include "gyule/errors.hpp"
#include "gyule/quadrature.hpp"
#include "gyule/specfun.hpp"

namespace gyule {
namespace {

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::nearbyint(x); }

// (1 - y z)^(-b); for integer b <= 0 the base may be negative.
double power_factor(double y, double z, double b) {
    if (b == 0.0) return 1.0;
    const double base = 1.0 - y * z;
    if (base > 0.0) return std::exp(-b * std::log1p(-y * z));
    return std::pow(base, -b);
}

}  // namespace

EvalResult appell_f1(double a, double b1, double b2, double c, double z1, double z2, double rel_tol) {
    if (!std::isfinite(a) || !std::isfinite(b1) || !std::isfinite(b2) || !std::isfinite(c) ||
        !std::isfinite(z1) || !std::isfinite(z2))
        throw DomainError("appell_f1: non-finite argument");
    if (!(a > 0.0) || !(c > a)) throw DomainError("appell_f1: requires c > a > 0");
    if (z1 >= 1.0 && !is_nonpositive_integer(b1)) throw DomainError("appell_f1: requires z1 < 1");
    if (z2 >= 1.0 && !is_nonpositive_integer(b2)) throw DomainError("appell_f1: requires z2 < 1");
    if ((z1 == 0.0 || b1 == 0.0) && (z2 == 0.0 || b2 == 0.0))
        return EvalResult{1.0, 0.0, EvalMethod::quadrature};

    const double ca = c - a;
    auto rest = [=](double y) { return power_factor(y, z1, b1) * power_factor(y, z2, b2); };

    QuadratureOptions opts;
    opts.abs_tol = 0.0;
    opts.rel_tol = rel_tol;

    // Concentration points for large exponents.
    std::vector<double> left_cuts;
    std::vector<double> right_cuts;
    if (a > 10.0) right_cuts = {1.0 - 1.0 / a, 1.0 - 10.0 / a};
    if (ca > 10.0) left_cuts = {1.0 / ca, 10.0 / ca};

    // [0, 1/2]: y = s^(1/a) when a < 1.
    EvalResult left;
    if (a < 1.0) {
        const double inv = 1.0 / a;
        std::vector<double> cuts;
        for (double y : left_cuts) cuts.push_back(std::pow(y, a));
        left = integrate(
            [=](double s) {
                const double y = std::pow(s, inv);
                return inv * std::pow(1.0 - y, ca - 1.0) * rest(y);
            },
            0.0, std::pow(0.5, a), cuts, opts);
    } else {
        left = integrate(
            [=](double y) { return std::pow(y, a - 1.0) * std::pow(1.0 - y, ca - 1.0) * rest(y); }, 0.0,
            0.5, left_cuts, opts);
    }

    // [1/2, 1]: 1 - y = s^(1/(c-a)) when c - a < 1.
    EvalResult right;
    if (ca < 1.0) {
        const double inv = 1.0 / ca;
        std::vector<double> cuts;
        for (double y : right_cuts) cuts.push_back(std::pow(1.0 - y, ca));
        right = integrate(
            [=](double s) {
                const double y = 1.0 - std::pow(s, inv);
                return inv * std::pow(y, a - 1.0) * rest(y);
            },
            0.0, std::pow(0.5, ca), cuts, opts);
    } else {
        right = integrate(
            [=](double y) { return std::pow(y, a - 1.0) * std::pow(1.0 - y, ca - 1.0) * rest(y); }, 0.5,
            1.0, right_cuts, opts);
    }

    const double pref = std::exp(log_gamma(c) - log_gamma(a) - log_gamma(ca));
    const double value = pref * (left.value + right.value);
    const double error = pref * (left.abs_error + right.abs_error) + 1e-15 * std::abs(value);
    if (!std::isfinite(value)) throw AccuracyError("appell_f1: non-finite result", value, error);
    EvalResult r{value, error, EvalMethod::quadrature};
    if (value != 0.0 && error > std::max(1e-9, 2.0 * rel_tol) * std::abs(value))
        throw AccuracyError("appell_f1: accuracy target not met", value, error);
    return r;
}

}  // namespace gyule
