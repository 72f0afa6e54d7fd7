#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "gyule/errors.hpp"
#include "gyule/estimation.hpp"

namespace gyule {
namespace {

// Search box for (beta/lambda, mu/lambda), in log coordinates.
constexpr double kLogRhoLo = -9.210340371976182;  // log 1e-4
constexpr double kLogRhoHi = 6.907755278982137;   // log 1e3
constexpr double kLogMLo = -18.420680743952367;   // log 1e-8
constexpr double kLogMHi = 6.907755278982137;     // log 1e3
constexpr double kPenalty = 1e300;

struct Objective {
    const DegreeHistogram* hist;
    bool include_zero;
    double total;
    std::int64_t evaluations = 0;

    // Mean negative log-likelihood at (log rho, log m); points outside the
    // box are clamped and charged a quadratic penalty.
    double operator()(double lr, double lm) {
        ++evaluations;
        const double cr = std::clamp(lr, kLogRhoLo, kLogRhoHi);
        const double cm = std::clamp(lm, kLogMLo, kLogMHi);
        const double outside = (lr - cr) * (lr - cr) + (lm - cm) * (lm - cm);
        double v;
        try {
            v = -log_likelihood(*hist, ModelParams(std::exp(cr), 1.0, std::exp(cm)), include_zero) / total;
        } catch (const std::exception&) {
            return kPenalty;
        }
        if (!std::isfinite(v)) return kPenalty;
        return v + 1e3 * outside;
    }
};

double gsl_objective(const gsl_vector* x, void* params) {
    auto* obj = static_cast<Objective*>(params);
    return (*obj)(gsl_vector_get(x, 0), gsl_vector_get(x, 1));
}

struct Run {
    double lr, lm, value;
    bool converged;
};

Run nelder_mead(Objective& obj, double lr, double lm, double step, int budget, double tol) {
    gsl_multimin_function fn{&gsl_objective, 2, &obj};
    gsl_vector* x = gsl_vector_alloc(2);
    gsl_vector* ss = gsl_vector_alloc(2);
    gsl_vector_set(x, 0, lr);
    gsl_vector_set(x, 1, lm);
    gsl_vector_set_all(ss, step);
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
    gsl_multimin_fminimizer_set(s, &fn, x, ss);

    const std::int64_t start = obj.evaluations;
    bool converged = false;
    while (obj.evaluations - start < budget) {
        if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), tol) == GSL_SUCCESS) {
            converged = true;
            break;
        }
    }
    Run r{gsl_vector_get(s->x, 0), gsl_vector_get(s->x, 1), s->fval, converged};
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(ss);
    gsl_vector_free(x);
    return r;
}

void quiet_gsl() {
    static std::once_flag once;
    std::call_once(once, [] { gsl_set_error_handler_off(); });
}

FitResult make_result(double rho, double m, double lambda_scale) {
    FitResult f;
    f.method = FitMethod::mle;
    f.beta_over_lambda = rho;
    f.mu_over_lambda = m;
    f.representative_params = ModelParams(rho * lambda_scale, lambda_scale, m * lambda_scale);
    if (regime(ModelParams(rho, 1.0, m)) == Regime::Supercritical) {
        f.beta_over_delta = rho / (1.0 - m);
        f.mu_over_delta = m / (1.0 - m);
    } else if (m == 0.0) {
        f.beta_over_delta = rho;
        f.mu_over_delta = 0.0;
    }
    return f;
}

}  // namespace

double log_likelihood(const DegreeHistogram& hist, const ModelParams& p, bool include_zero) {
    double ll = 0.0;
    double used = 0.0;
    for (const auto& [n, c] : hist.counts()) {
        if (n == 0 && !include_zero) continue;
        ll += static_cast<double>(c) * log_pmf(n, p);
        used += static_cast<double>(c);
    }
    if (!include_zero) ll -= used * std::log1p(-pmf_zero(p));
    return ll;
}

FitResult fit_mle(const DegreeHistogram& hist, const MleOptions& options) {
    if (!(options.lambda_scale > 0.0)) throw DomainError("fit_mle: lambda_scale must be positive");
    const DegreeHistogram data = options.include_zero ? hist : hist.without_zero();
    if (data.distinct() < 2) throw DomainError("fit_mle: histogram needs at least two populated degrees");
    quiet_gsl();

    Objective obj{&data, options.include_zero, static_cast<double>(data.total())};

    // Starting points: a coarse grid plus the caller's guess; the two best
    // grid points and the guess are refined.
    std::vector<std::array<double, 3>> starts;
    for (double rho : {0.05, 0.3, 1.5})
        for (double m : {0.2, 0.9, 1.3}) {
            const double lr = std::log(rho), lm = std::log(m);
            starts.push_back({lr, lm, obj(lr, lm)});
        }
    std::sort(starts.begin(), starts.end(), [](const auto& a, const auto& b) { return a[2] < b[2]; });
    starts.resize(2);
    if (options.init) {
        const auto [rho, m] = *options.init;
        if (!(rho > 0.0) || !(m > 0.0)) throw DomainError("fit_mle: initial ratios must be positive");
        starts.insert(starts.begin(), {std::log(rho), std::log(m), 0.0});
    }

    const int budget = std::max(100, options.max_evaluations / static_cast<int>(starts.size() + 1));
    Run best{0.0, 0.0, INFINITY, false};
    for (const auto& s : starts) {
        const Run r = nelder_mead(obj, s[0], s[1], 0.5, budget, options.tolerance);
        if (r.value < best.value) best = r;
    }
    // Restart from the best point to shake off a collapsed simplex.
    const Run polish = nelder_mead(obj, best.lr, best.lm, 0.05, budget, options.tolerance);
    if (polish.value <= best.value) best = polish;

    const double lr = std::clamp(best.lr, kLogRhoLo, kLogRhoHi);
    const double lm = std::clamp(best.lm, kLogMLo, kLogMHi);
    FitResult f = make_result(std::exp(lr), std::exp(lm), options.lambda_scale);
    f.objective = -best.value * obj.total;
    f.points = static_cast<std::int64_t>(data.distinct());
    f.evaluations = obj.evaluations;
    if (!best.converged || best.value >= kPenalty)
        throw FitError("fit_mle: search did not converge within the evaluation budget", f);

    // Standard errors from the observed information in (rho, m).
    const double rho = f.beta_over_lambda, m = f.mu_over_lambda;
    const double h1 = 1e-4 * rho, h2 = 1e-4 * m;
    auto nll = [&](double a, double b) { return obj(std::log(a), std::log(b)) * obj.total; };
    const double f0 = nll(rho, m);
    const double h11 = (nll(rho + h1, m) - 2.0 * f0 + nll(rho - h1, m)) / (h1 * h1);
    const double h22 = (nll(rho, m + h2) - 2.0 * f0 + nll(rho, m - h2)) / (h2 * h2);
    const double h12 = (nll(rho + h1, m + h2) - nll(rho + h1, m - h2) - nll(rho - h1, m + h2) +
                        nll(rho - h1, m - h2)) / (4.0 * h1 * h2);
    const double det = h11 * h22 - h12 * h12;
    if (det > 0.0 && h11 > 0.0) {
        f.beta_over_lambda_stderr = std::sqrt(h22 / det);
        f.mu_over_lambda_stderr = std::sqrt(h11 / det);
    }
    f.evaluations = obj.evaluations;
    return f;
}

}  // namespace gyule
