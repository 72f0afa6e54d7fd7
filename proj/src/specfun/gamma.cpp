#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "gyule/errors.hpp"
#include "gyule/specfun.hpp"

namespace gyule {

const char* to_string(EvalMethod m) {
    switch (m) {
        case EvalMethod::series: return "series";
        case EvalMethod::transformation: return "transformation";
        case EvalMethod::quadrature: return "quadrature";
    }
    return "unknown";
}

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma: argument must be positive");
    return boost::math::lgamma(x);
}

namespace {

// Stirling tail sum_k B_2k / (2k (2k-1) x^(2k-1)), adequate for x >= 15.
double stirling_tail(double x) {
    const double r = 1.0 / x;
    const double r2 = r * r;
    return r * (1.0 / 12.0 +
                r2 * (-1.0 / 360.0 +
                      r2 * (1.0 / 1260.0 + r2 * (-1.0 / 1680.0 + r2 * (1.0 / 1188.0)))));
}

}  // namespace

double log_gamma_ratio(double x, double s) {
    if (!(x > 0.0) || !(x + s > 0.0)) throw DomainError("log_gamma_ratio: arguments must be positive");
    if (s == 0.0) return 0.0;
    constexpr double kLarge = 15.0;
    if (x < kLarge || x + s < kLarge || std::abs(s) > 0.5 * x)
        return log_gamma(x + s) - log_gamma(x);
    // (x+s-1/2) ln(x+s) - (x-1/2) ln x - s, regrouped so the O(x ln x) parts cancel
    // analytically; log1p keeps the s/x term exact.
    const double lead = (x - 0.5) * std::log1p(s / x) + s * std::log(x + s) - s;
    return lead + (stirling_tail(x + s) - stirling_tail(x));
}

}  // namespace gyule
