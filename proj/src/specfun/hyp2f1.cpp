#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gyule/errors.hpp"
#include "gyule/specfun.hpp"

namespace gyule {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr long kMaxTerms = 1'000'000;
constexpr double kRequiredRelAccuracy = 1e-11;
constexpr double kConnectionThreshold = 0.95;
// Largest tolerated |terms| / |result| for the connection formulas before the
// plain series is preferred.
constexpr double kMaxCancellation = 1e3;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::nearbyint(x); }

// c - a - b counts as the integer m when it is within rounding of it; the
// model's parameters produce exact integers that arrive with ulp-level noise.
std::optional<long> near_integer(double s, double scale) {
    const double r = std::nearbyint(s);
    if (std::abs(s - r) <= 64.0 * kEps * std::max(1.0, scale)) return static_cast<long>(r);
    return std::nullopt;
}

// ln|Gamma(x)| and its sign; `pole` is set at non-positive integers, where
// 1/Gamma vanishes.
struct SignedLogGamma {
    double log_abs = 0.0;
    int sign = 1;
    bool pole = false;
};

SignedLogGamma signed_log_gamma(double x) {
    if (is_nonpositive_integer(x)) return {0.0, 1, true};
    int sign = 1;
    const double lg = boost::math::lgamma(x, &sign);
    return {lg, sign, false};
}

struct SeriesSum {
    double value = 0.0;
    double abs_error = 0.0;
    double abs_sum = 0.0;
    bool converged = false;
};

// Neumaier-compensated sum of the 2F1 power series.
SeriesSum power_series(double a, double b, double c, double z, long max_terms) {
    double term = 1.0;
    double sum = 1.0;
    double comp = 0.0;
    double abs_sum = 1.0;
    double weighted = 1.0;  // sum of sqrt(k+1)|t_k|, tracks recursion round-off
    const double settle = std::max({0.0, -a, -b, -c}) + 1.0;
    const double az = std::abs(z);
    for (long k = 0; k < max_terms; ++k) {
        const double kd = static_cast<double>(k);
        term *= (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0)) * z;
        if (term == 0.0) {
            const double value = sum + comp;
            return {value, kEps * (std::abs(value) + 2.0 * weighted), abs_sum, true};
        }
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
        abs_sum += std::abs(term);
        weighted += std::sqrt(kd + 2.0) * std::abs(term);

        if (kd + 1.0 < settle) continue;
        const double next = std::abs((a + kd + 1.0) * (b + kd + 1.0) /
                                     ((c + kd + 1.0) * (kd + 2.0)) * z);
        const double rho = std::max(next, az);
        if (rho >= 1.0) continue;
        const double tail = std::abs(term) * rho / (1.0 - rho);
        const double value = sum + comp;
        if (tail <= 0.5 * kEps * std::abs(value)) {
            return {value, tail + kEps * (std::abs(value) + 2.0 * weighted), abs_sum, true};
        }
    }
    const double value = sum + comp;
    return {value, std::abs(term) / std::max(1e-300, 1.0 - az), abs_sum, false};
}

// 1 - z connection formula when c - a - b is not an integer.
std::optional<EvalResult> connection_generic(double a, double b, double c, double z) {
    const double w = 1.0 - z;
    const double s = c - a - b;
    const SignedLogGamma gc = signed_log_gamma(c);
    const SignedLogGamma gs = signed_log_gamma(s);
    const SignedLogGamma gms = signed_log_gamma(-s);

    double value = 0.0;
    double magnitude = 0.0;
    double error = 0.0;

    const SignedLogGamma gca = signed_log_gamma(c - a);
    const SignedLogGamma gcb = signed_log_gamma(c - b);
    if (!gca.pole && !gcb.pole) {
        const double log_pref = gc.log_abs + gs.log_abs - gca.log_abs - gcb.log_abs;
        const double pref = gc.sign * gs.sign * gca.sign * gcb.sign * std::exp(log_pref);
        const SeriesSum f = power_series(a, b, 1.0 - s, w, kMaxTerms);
        if (!f.converged || !std::isfinite(pref)) return std::nullopt;
        value += pref * f.value;
        magnitude += std::abs(pref) * f.abs_sum;
        error += std::abs(pref) * f.abs_error;
    }
    const SignedLogGamma ga = signed_log_gamma(a);
    const SignedLogGamma gb = signed_log_gamma(b);
    if (!ga.pole && !gb.pole) {
        const double log_pref = gc.log_abs + gms.log_abs - ga.log_abs - gb.log_abs + s * std::log(w);
        const double pref = gc.sign * gms.sign * ga.sign * gb.sign * std::exp(log_pref);
        const SeriesSum f = power_series(c - a, c - b, 1.0 + s, w, kMaxTerms);
        if (!f.converged || !std::isfinite(pref)) return std::nullopt;
        value += pref * f.value;
        magnitude += std::abs(pref) * f.abs_sum;
        error += std::abs(pref) * f.abs_error;
    }
    if (!std::isfinite(value) || value == 0.0 || magnitude > kMaxCancellation * std::abs(value))
        return std::nullopt;
    return EvalResult{value, error + 8.0 * kEps * magnitude, EvalMethod::transformation};
}

// 1 - z connection formula for c = a + b + m, m = 0, 1, 2, ... (the
// logarithmic case). a and b must not be non-positive integers.
std::optional<EvalResult> connection_log(double a, double b, double c, long m, double z) {
    const double w = 1.0 - z;
    const double md = static_cast<double>(m);
    const SignedLogGamma gc = signed_log_gamma(c);

    // Finite part: sum_{k<m} (a)_k (b)_k (m-k-1)! / k! (z-1)^k / (Gamma(a+m) Gamma(b+m)).
    const SignedLogGamma gam = signed_log_gamma(a + md);
    const SignedLogGamma gbm = signed_log_gamma(b + md);
    double finite = 0.0;
    double finite_abs = 0.0;
    if (m > 0) {
        if (gam.pole || gbm.pole) return std::nullopt;
        double t = std::exp(boost::math::lgamma(md));  // (m-1)!
        for (long k = 0; k < m; ++k) {
            const double kd = static_cast<double>(k);
            finite += t;
            finite_abs += std::abs(t);
            if (k + 1 < m) t *= (a + kd) * (b + kd) / ((kd + 1.0) * (md - kd - 1.0)) * (-w);
        }
        const double pref =
            gc.sign * gam.sign * gbm.sign * std::exp(gc.log_abs - gam.log_abs - gbm.log_abs);
        if (!std::isfinite(pref)) return std::nullopt;
        finite *= pref;
        finite_abs *= std::abs(pref);
    }

    // Logarithmic part.
    const SignedLogGamma ga = signed_log_gamma(a);
    const SignedLogGamma gb = signed_log_gamma(b);
    if (ga.pole || gb.pole) return std::nullopt;
    double psi_k1 = boost::math::digamma(1.0);
    double psi_km1 = boost::math::digamma(md + 1.0);
    double psi_akm = boost::math::digamma(a + md);
    double psi_bkm = boost::math::digamma(b + md);
    const double log_w = std::log(w);
    double t = std::exp(-boost::math::lgamma(md + 1.0));  // 1/m!
    double sum = 0.0;
    double comp = 0.0;
    double sum_abs = 0.0;
    bool converged = false;
    for (long k = 0; k < kMaxTerms; ++k) {
        const double kd = static_cast<double>(k);
        const double term = t * (log_w - psi_k1 - psi_km1 + psi_akm + psi_bkm);
        const double s = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - s) + term : (term - s) + sum;
        sum = s;
        sum_abs += std::abs(term);
        if (kd > std::max({0.0, -a - md, -b - md}) + 1.0 && std::abs(term) <= kEps * 1e-2 * std::abs(sum) &&
            std::abs(t) <= kEps * 1e-2 * std::abs(sum)) {
            converged = true;
            break;
        }
        t *= (a + md + kd) * (b + md + kd) / ((kd + 1.0) * (kd + md + 1.0)) * w;
        psi_k1 += 1.0 / (kd + 1.0);
        psi_km1 += 1.0 / (kd + md + 1.0);
        psi_akm += 1.0 / (a + md + kd);
        psi_bkm += 1.0 / (b + md + kd);
        if (t == 0.0) {
            converged = true;
            break;
        }
    }
    if (!converged) return std::nullopt;
    sum += comp;
    // (z-1)^m = (-w)^m
    const double sign_m = (m % 2 == 0) ? 1.0 : -1.0;
    const double pref = gc.sign * ga.sign * gb.sign * sign_m *
                        std::exp(gc.log_abs - ga.log_abs - gb.log_abs + md * log_w);
    if (!std::isfinite(pref)) return std::nullopt;
    const double value = finite - pref * sum;
    const double magnitude = finite_abs + std::abs(pref) * sum_abs;
    if (!std::isfinite(value) || value == 0.0 || magnitude > kMaxCancellation * std::abs(value))
        return std::nullopt;
    return EvalResult{value, 16.0 * kEps * magnitude, EvalMethod::transformation};
}

std::optional<EvalResult> connection(double a, double b, double c, double z) {
    const double s = c - a - b;
    const auto m = near_integer(s, std::max({std::abs(a), std::abs(b), std::abs(c)}));
    if (!m) return connection_generic(a, b, c, z);
    if (*m >= 0) return connection_log(a, b, c, *m, z);
    // Euler: F(a,b;c;z) = (1-z)^(c-a-b) F(c-a, c-b; c; z), whose c - a' - b' = -m > 0.
    auto inner = connection_log(c - a, c - b, c, -*m, z);
    if (!inner) return std::nullopt;
    const double factor = std::pow(1.0 - z, s);
    return EvalResult{inner->value * factor, inner->abs_error * factor, EvalMethod::transformation};
}

// 2F1 on 0 <= z < 1.
EvalResult unit_interval(double a, double b, double c, double z) {
    if (z >= kConnectionThreshold) {
        if (auto r = connection(a, b, c, z)) return *r;
    }
    const SeriesSum s = power_series(a, b, c, z, kMaxTerms);
    if (!s.converged)
        throw AccuracyError("gauss_2f1: series did not converge within the term cap", s.value,
                            s.abs_error);
    return EvalResult{s.value, s.abs_error, EvalMethod::series};
}

void check_accuracy(const EvalResult& r) {
    if (!std::isfinite(r.value))
        throw AccuracyError("gauss_2f1: result overflowed", r.value, r.abs_error);
    if (r.abs_error > kRequiredRelAccuracy * std::abs(r.value) && r.abs_error > 1e-300)
        throw AccuracyError("gauss_2f1: accuracy target not met", r.value, r.abs_error);
}

}  // namespace

EvalResult gauss_2f1(double a, double b, double c, double z) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || std::isnan(z))
        throw DomainError("gauss_2f1: non-finite parameter");
    if (is_nonpositive_integer(c)) throw PoleError("gauss_2f1: c is a non-positive integer");
    if (!(z < 1.0)) throw DomainError("gauss_2f1: requires z < 1");
    if (z == 0.0 || a == 0.0 || b == 0.0) return EvalResult{1.0, 0.0, EvalMethod::series};

    if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
        // Terminating series: a polynomial in z.
        const SeriesSum s = power_series(a, b, c, z, kMaxTerms);
        EvalResult r{s.value, s.abs_error, EvalMethod::series};
        check_accuracy(r);
        return r;
    }

    EvalResult r;
    if (z < 0.0) {
        // Pfaff: F(a,b;c;z) = (1-z)^(-a) F(a, c-b; c; z/(z-1)); keep the smaller
        // of a and b outside so the prefactor stays moderate.
        const bool keep_a = std::abs(a) <= std::abs(b);
        const double kept = keep_a ? a : b;
        const double other = keep_a ? b : a;
        const double w = z / (z - 1.0);
        const EvalResult inner = unit_interval(kept, c - other, c, w);
        const double factor = std::exp(-kept * std::log1p(-z));
        r = EvalResult{inner.value * factor,
                       inner.abs_error * factor + 4.0 * kEps * std::abs(inner.value * factor),
                       inner.method == EvalMethod::series ? EvalMethod::transformation : inner.method};
    } else {
        r = unit_interval(a, b, c, z);
    }
    check_accuracy(r);
    return r;
}

}  // namespace gyule
