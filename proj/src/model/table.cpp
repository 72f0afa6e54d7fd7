#include <algorithm>
#include <cmath>

#include "gyule/errors.hpp"
#include "gyule/model.hpp"
#include "gyule/specfun.hpp"

namespace gyule {
namespace {

void extend(PmfTable& t, std::int64_t n_max) {
    const std::int64_t from = static_cast<std::int64_t>(t.probabilities.size());
    t.probabilities.reserve(static_cast<std::size_t>(n_max + 1));
    for (std::int64_t n = from; n <= n_max; ++n) t.probabilities.push_back(pmf(n, t.params));
}

double tail_bound(const PmfTable& t) {
    const ModelParams& p = t.params;
    const std::int64_t N = t.n_max();
    const double Nd = static_cast<double>(N);
    switch (regime(p)) {
        case Regime::PureYule: {
            // Yule-Simon survival P(N > n) = Gamma(1+rho) Gamma(n+1) / Gamma(n+1+rho)
            const double rho = p.beta() / p.lambda();
            if (N < 1) return 1.0;
            return std::exp(log_gamma(1.0 + rho) - log_gamma_ratio(Nd + 1.0, rho));
        }
        case Regime::Supercritical: {
            // The 2F1 correction factor is at most one, so the Yule tail of
            // rate delta scaled by K bounds the remaining mass.
            if (N < 1) return 1.0;
            const double B = p.beta() / p.delta();
            const double log_k = (1.0 - B) * std::log(p.delta() / p.lambda());
            return std::min(1.0, std::exp(log_k + log_gamma(1.0 + B) - log_gamma_ratio(Nd + 1.0, B)));
        }
        case Regime::Subcritical:
            return std::min(1.0, std::exp(Nd * std::log(p.lambda() / p.mu())));
        case Regime::Critical: {
            if (N < 2) return 1.0;
            const double last = t.probabilities[static_cast<std::size_t>(N)];
            const double prev = t.probabilities[static_cast<std::size_t>(N - 1)];
            if (!(prev > 0.0)) return 0.0;
            const double r = last / prev;
            if (!(r < 1.0)) return 1.0;
            return std::min(1.0, 10.0 * last * r / (1.0 - r));
        }
    }
    return 1.0;
}

}  // namespace

double PmfTable::total_mass() const {
    double s = 0.0;
    double c = 0.0;
    for (double v : probabilities) {
        const double y = v - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

PmfTable make_pmf_table(const ModelParams& p, std::int64_t n_max) {
    if (n_max < 0) throw DomainError("make_pmf_table: n_max must be >= 0");
    PmfTable t{p, {}, 0.0};
    extend(t, n_max);
    t.tail_mass_bound = tail_bound(t);
    return t;
}

PmfTable make_normalized_pmf_table(const ModelParams& p, double tail_target, std::int64_t n_cap) {
    if (!(tail_target > 0.0)) throw DomainError("tail_target must be positive");
    if (n_cap < 1) throw DomainError("n_cap must be >= 1");
    PmfTable t{p, {}, 1.0};
    std::int64_t n = std::min<std::int64_t>(64, n_cap);
    for (;;) {
        extend(t, n);
        t.tail_mass_bound = tail_bound(t);
        if (t.tail_mass_bound < tail_target || n >= n_cap) return t;
        n = std::min(2 * n, n_cap);
    }
}

}  // namespace gyule
