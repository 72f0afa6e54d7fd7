#include <cmath>
#include <vector>

#include "gyule/errors.hpp"
#include "gyule/model.hpp"
#include "gyule/quadrature.hpp"
#include "gyule/specfun.hpp"

namespace gyule {
namespace {

void check_rate(double r, const char* what, bool allow_zero) {
    if (!std::isfinite(r) || r < 0.0 || (!allow_zero && r == 0.0))
        throw DomainError(std::string(what) + " must be " + (allow_zero ? "non-negative" : "positive"));
}

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be non-negative and finite");
}

}  // namespace

double birth_pmf(std::int64_t n, double t, double lambda) {
    check_rate(lambda, "lambda", false);
    check_time(t);
    if (n < 1) throw DomainError("birth_pmf: n must be >= 1");
    if (t == 0.0) return n == 1 ? 1.0 : 0.0;
    // e^{-lt} (1 - e^{-lt})^{n-1}
    const double lt = lambda * t;
    return std::exp(-lt + static_cast<double>(n - 1) * std::log(-std::expm1(-lt)));
}

double bd_transient_pmf(std::int64_t n, double t, double lambda, double mu) {
    check_rate(lambda, "lambda", false);
    check_rate(mu, "mu", true);
    check_time(t);
    if (n < 0) throw DomainError("bd_transient_pmf: n must be >= 0");
    if (mu == 0.0) return n == 0 ? 0.0 : birth_pmf(n, t, lambda);
    if (t == 0.0) return n == 1 ? 1.0 : 0.0;

    const double nd = static_cast<double>(n);
    if (std::abs(lambda - mu) <= kCriticalTolerance * lambda) {
        const double lt = lambda * t;
        if (n == 0) return lt / (1.0 + lt);
        return std::exp((nd - 1.0) * std::log(lt) - (nd + 1.0) * std::log1p(lt));
    }

    // E = exp(-|lambda-mu| t); the larger rate leads the denominator.
    const double d = std::abs(lambda - mu);
    const double E = std::exp(-d * t);
    const double one_minus_E = -std::expm1(-d * t);
    const double D = lambda > mu ? (lambda - mu * E) : (mu - lambda * E);
    if (n == 0) return mu * one_minus_E / D;
    const double ratio = lambda * one_minus_E / D;
    return std::exp(2.0 * std::log(d) - d * t - 2.0 * std::log(D) + (nd - 1.0) * std::log(ratio));
}

double log_yule_simon_pmf(std::int64_t n, double beta, double lambda) {
    check_rate(beta, "beta", false);
    check_rate(lambda, "lambda", false);
    if (n < 1) throw DomainError("yule_simon_pmf: n must be >= 1");
    // rho Gamma(1+rho) Gamma(n) / Gamma(n+1+rho)
    const double rho = beta / lambda;
    return std::log(rho) + log_gamma(1.0 + rho) - log_gamma_ratio(static_cast<double>(n), 1.0 + rho);
}

double yule_simon_pmf(std::int64_t n, double beta, double lambda) {
    return std::exp(log_yule_simon_pmf(n, beta, lambda));
}

double yule_finite_time_pmf(std::int64_t n, double t, double beta, double lambda) {
    check_rate(beta, "beta", false);
    check_rate(lambda, "lambda", false);
    check_time(t);
    if (n < 1) throw DomainError("yule_finite_time_pmf: n must be >= 1");
    if (t == 0.0) return n == 1 ? 1.0 : 0.0;

    // Page age is Exp(beta) truncated to [0, t].
    const double nm1 = static_cast<double>(n - 1);
    auto f = [=](double y) {
        if (y == 0.0) return nm1 == 0.0 ? 1.0 : 0.0;
        return std::exp(-(beta + lambda) * y + nm1 * std::log(-std::expm1(-lambda * y)));
    };
    std::vector<double> cuts;
    if (n > 1) {
        const double q = (beta + lambda) / (nm1 * lambda);
        const double peak = std::log1p(1.0 / q) / lambda;
        if (peak < t) cuts.push_back(peak);
    }
    QuadratureOptions opts;
    opts.abs_tol = 0.0;
    opts.rel_tol = 1e-11;
    const EvalResult r = integrate(f, 0.0, t, cuts, opts);
    return beta / -std::expm1(-beta * t) * r.value;
}

}  // namespace gyule
