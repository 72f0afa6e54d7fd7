#include <cmath>
#include <limits>

#include "gyule/errors.hpp"
#include "gyule/model.hpp"
#include "gyule/specfun.hpp"

namespace gyule {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double checked_2f1(double a, double b, double c, double z) { return gauss_2f1(a, b, c, z).value; }

// r_b(x, y) = B Gamma(B) / Gamma(2+B) * 2F1(1, B; 2+B; y/x), B = b/(x-y), x > y.
double r_func(double b, double x, double y) {
    const double B = b / (x - y);
    const double c = std::exp(std::log(B) + log_gamma(B) - log_gamma(2.0 + B));
    return c * checked_2f1(1.0, B, 2.0 + B, y / x);
}

// log q_b^nu(x, y) with B = b/(x-y):
//   b(x-y)/x^2 Gamma(1+B) Gamma(nu)/Gamma(nu+1+B) 2F1(nu+1, 1+B; nu+1+B; y/x)
double log_q_func(double b, double nu, double x, double y) {
    const double B = b / (x - y);
    const double f = checked_2f1(nu + 1.0, 1.0 + B, nu + 1.0 + B, y / x);
    return std::log(b * (x - y) / (x * x)) + log_gamma(1.0 + B) - log_gamma_ratio(nu, 1.0 + B) + std::log(f);
}

void check_n(std::int64_t n, std::int64_t lo) {
    if (n < lo) throw DomainError("pmf: n must be >= " + std::to_string(lo));
}

}  // namespace

double pmf_zero(const ModelParams& p) {
    switch (regime(p)) {
        case Regime::PureYule: return 0.0;
        case Regime::Critical: return hyp_u(1.0, 0.0, p.beta() / p.lambda()).value;
        case Regime::Supercritical: return p.mu() / p.lambda() * r_func(p.beta(), p.lambda(), p.mu());
        case Regime::Subcritical: return r_func(p.beta(), p.mu(), p.lambda());
    }
    return 0.0;
}

double log_pmf_gauss_form(std::int64_t n, const ModelParams& p) {
    check_n(n, 1);
    const double nu = static_cast<double>(n);
    switch (regime(p)) {
        case Regime::Supercritical: return log_q_func(p.beta(), nu, p.lambda(), p.mu());
        case Regime::Subcritical:
            return (nu - 1.0) * std::log(p.lambda() / p.mu()) + log_q_func(p.beta(), nu, p.mu(), p.lambda());
        default: throw DomainError("pmf_gauss_form: needs lambda != mu and mu > 0");
    }
}

double pmf_gauss_form(std::int64_t n, const ModelParams& p) { return std::exp(log_pmf_gauss_form(n, p)); }

double log_pmf_reparam(std::int64_t n, double beta, double delta, double mu) {
    check_n(n, 1);
    if (!(beta > 0.0) || !(delta > 0.0) || !(mu >= 0.0) || !std::isfinite(beta + delta + mu))
        throw DomainError("pmf_reparam: requires beta > 0, delta > 0, mu >= 0");
    const double B = beta / delta;
    const double nu = static_cast<double>(n);
    double log_corr = 0.0;
    if (mu > 0.0) {
        log_corr = (1.0 - B) * std::log(delta / (mu + delta)) +
                   std::log(checked_2f1(B, 1.0 + B, nu + 1.0 + B, -mu / delta));
    }
    return std::log(B) + log_gamma(1.0 + B) - log_gamma_ratio(nu, 1.0 + B) + log_corr;
}

double pmf_reparam(std::int64_t n, double beta, double delta, double mu) {
    return std::exp(log_pmf_reparam(n, beta, delta, mu));
}

double log_pmf(std::int64_t n, const ModelParams& p) {
    check_n(n, 0);
    if (n == 0) {
        const double p0 = pmf_zero(p);
        return p0 > 0.0 ? std::log(p0) : kNegInf;
    }
    switch (regime(p)) {
        case Regime::PureYule: return log_yule_simon_pmf(n, p.beta(), p.lambda());
        case Regime::Critical: {
            // (beta/lambda) Gamma(n) U(n, 0, beta/lambda)
            const double z = p.beta() / p.lambda();
            const ScaledEval s = log_gamma_hyp_u(static_cast<double>(n), 0.0, z);
            return std::log(z) + s.log_scale + std::log(s.scaled.value);
        }
        case Regime::Supercritical:
            if (n > kReparamThreshold) return log_pmf_reparam(n, p.beta(), p.delta(), p.mu());
            return log_pmf_gauss_form(n, p);
        case Regime::Subcritical: return log_pmf_gauss_form(n, p);
    }
    return kNegInf;
}

double pmf(std::int64_t n, const ModelParams& p) { return std::exp(log_pmf(n, p)); }

double pmf_series(std::int64_t n, const ModelParams& p) {
    check_n(n, 1);
    const Regime r = regime(p);
    if (r != Regime::Supercritical && r != Regime::PureYule)
        throw DomainError("pmf_series: requires lambda > mu");
    // beta delta / (n lambda^2) * 2Psi1[(n+1,1), (1+B,1); (n+1+B,1) | mu/lambda]
    const double B = p.beta() / p.delta();
    const double nu = static_cast<double>(n);
    const ScaledEval s =
        wright_2psi1_scaled({nu + 1.0, 1.0}, {1.0 + B, 1.0}, {nu + 1.0 + B, 1.0}, p.mu() / p.lambda());
    const double log_pre = std::log(p.beta() * p.delta() / (nu * p.lambda() * p.lambda()));
    return std::exp(log_pre + s.log_scale + std::log(s.scaled.value));
}

}  // namespace gyule
