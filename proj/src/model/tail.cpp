#include <cmath>
#include <limits>

#include "gyule/errors.hpp"
#include "gyule/model.hpp"
#include "gyule/specfun.hpp"

namespace gyule {
namespace {

void check(std::int64_t n, double beta, double delta, double mu) {
    if (n < 1) throw DomainError("tail: n must be >= 1");
    if (!(beta > 0.0) || !(delta > 0.0) || !(mu >= 0.0) || !std::isfinite(beta + delta + mu))
        throw DomainError("tail: requires beta > 0, delta > 0, mu >= 0");
}

// (delta/(mu+delta))^(1-B)
double log_k(double B, double delta, double mu) { return (1.0 - B) * std::log(delta / (mu + delta)); }

}  // namespace

double tail_ratio(std::int64_t n, double beta, double delta, double mu) {
    check(n, beta, delta, mu);
    if (mu == 0.0) return 1.0;
    const double B = beta / delta;
    const double f = gauss_2f1(B, 1.0 + B, static_cast<double>(n) + 1.0 + B, -mu / delta).value;
    return std::exp(log_k(B, delta, mu)) * f;
}

double tail_ratio_asymptotic(std::int64_t n, double beta, double delta, double mu) {
    check(n, beta, delta, mu);
    const double B = beta / delta;
    const double nu = static_cast<double>(n);
    return std::exp(log_k(B, delta, mu)) * (1.0 - B * (1.0 + B) * (mu / delta) / (nu + 1.0 + B));
}

double tail_dominant(std::int64_t n, double beta, double delta, double mu) {
    check(n, beta, delta, mu);
    const double B = beta / delta;
    return std::exp(-(1.0 + B) * std::log(static_cast<double>(n)) + log_gamma(1.0 + B) + std::log(B) +
                    log_k(B, delta, mu));
}

TailLine tail_line(double beta, double delta, double mu) {
    check(1, beta, delta, mu);
    const double B = beta / delta;
    return TailLine{-(1.0 + B), log_k(B, delta, mu) + log_gamma(1.0 + B) + std::log(B)};
}

}  // namespace gyule
