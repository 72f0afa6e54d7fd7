#include <algorithm>
#include <cmath>
#include <limits>

#include "gyule/errors.hpp"
#include "gyule/specfun.hpp"

namespace gyule {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr long kMaxTerms = 1'000'000;

}  // namespace

ScaledEval wright_2psi1_scaled(WrightPair a1, WrightPair a2, WrightPair b1, double z) {
    for (const WrightPair& p : {a1, a2, b1}) {
        if (!(p.shift > 0.0) || !(p.scale > 0.0) || !std::isfinite(p.shift) || !std::isfinite(p.scale))
            throw DomainError("wright_2psi1: shifts and scales must be positive");
    }
    if (!std::isfinite(z)) throw DomainError("wright_2psi1: non-finite z");

    const double log_t0 = log_gamma(a1.shift) + log_gamma(a2.shift) - log_gamma(b1.shift);
    if (z == 0.0) return ScaledEval{log_t0, EvalResult{1.0, 0.0, EvalMethod::series}};

    const double delta = b1.scale - a1.scale - a2.scale;
    double limit_ratio = 0.0;  // lim |t_{r+1} / t_r|
    if (std::abs(delta + 1.0) <= 1e-12) {
        const double radius = std::pow(a1.scale, -a1.scale) * std::pow(a2.scale, -a2.scale) *
                              std::pow(b1.scale, b1.scale);
        if (std::abs(z) >= radius) throw DomainError("wright_2psi1: |z| outside the radius of convergence");
        limit_ratio = std::abs(z) / radius;
    } else if (delta < -1.0) {
        throw DomainError("wright_2psi1: divergent parameter combination");
    }

    const double log_z = std::log(std::abs(z));
    const bool alternating = z < 0.0;
    // log(t_r / t_0) via Gamma ratios, which stay accurate when the shifts are
    // large and r is small.
    auto log_rel = [&](long r) {
        const double rd = static_cast<double>(r);
        return log_gamma_ratio(a1.shift, a1.scale * rd) + log_gamma_ratio(a2.shift, a2.scale * rd) -
               log_gamma_ratio(b1.shift, b1.scale * rd) - log_gamma(rd + 1.0) + rd * log_z;
    };

    // Running sum in units of exp(scale); rescaled whenever terms outgrow it.
    double scale = 0.0;
    double sum = 1.0;
    double comp = 0.0;
    double abs_sum = 1.0;
    for (long r = 1; r < kMaxTerms; ++r) {
        const double lt = log_rel(r);
        if (lt > scale + 300.0) {
            const double f = std::exp(scale - lt);
            sum *= f;
            comp *= f;
            abs_sum *= f;
            scale = lt;
        }
        const double mag = std::exp(lt - scale);
        const double term = (alternating && (r % 2 == 1)) ? -mag : mag;
        const double s = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - s) + term : (term - s) + sum;
        sum = s;
        abs_sum += mag;

        const double next_ratio = std::exp(log_rel(r + 1) - lt);
        const double rho = std::max(next_ratio, limit_ratio);
        if (rho < 1.0) {
            const double tail = mag * rho / (1.0 - rho);
            if (tail <= 0.5 * kEps * std::abs(sum + comp)) {
                const double value = sum + comp;
                const double err = tail + 8.0 * kEps * abs_sum;
                return ScaledEval{log_t0 + scale, EvalResult{value, err, EvalMethod::series}};
            }
        }
    }
    throw AccuracyError("wright_2psi1: series did not converge within the term cap",
                        std::exp(log_t0 + scale) * (sum + comp), INFINITY);
}

EvalResult wright_2psi1(WrightPair a1, WrightPair a2, WrightPair b1, double z) {
    const ScaledEval s = wright_2psi1_scaled(a1, a2, b1, z);
    const double f = std::exp(s.log_scale);
    const double value = f * s.scaled.value;
    if (!std::isfinite(value)) throw AccuracyError("wright_2psi1: value overflows a double", value, INFINITY);
    return EvalResult{value, f * s.scaled.abs_error + 1e-15 * std::abs(s.log_scale) * std::abs(value),
                      EvalMethod::series};
}

}  // namespace gyule
