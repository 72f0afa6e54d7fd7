#pragma once

#include <cstdint>
#include <vector>

namespace gyule {

// Rates of the generalized Yule model: pages arrive at rate beta per existing
// page; each in-link of a page independently spawns a new one at rate lambda
// and is removed at rate mu.
class ModelParams {
public:
    // Throws DomainError unless beta > 0, lambda > 0 and mu >= 0.
    ModelParams(double beta, double lambda, double mu);

    double beta() const noexcept { return beta_; }
    double lambda() const noexcept { return lambda_; }
    double mu() const noexcept { return mu_; }
    // Net in-link growth rate lambda - mu.
    double delta() const noexcept { return lambda_ - mu_; }

    // All three rates multiplied by c > 0; the limiting law is unchanged.
    ModelParams scaled(double c) const;

    bool operator==(const ModelParams&) const = default;

private:
    double beta_;
    double lambda_;
    double mu_;
};

enum class Regime { Supercritical, Critical, Subcritical, PureYule };

const char* to_string(Regime r);

// |lambda - mu| <= kCriticalTolerance * lambda is treated as critical.
inline constexpr double kCriticalTolerance = 1e-12;

Regime regime(const ModelParams& p);

// ---- Transient building blocks -------------------------------------------

// P(N_lambda(t) = n) for a linear birth process started at one, n >= 1.
double birth_pmf(std::int64_t n, double t, double lambda);

// P(N_{lambda,mu}(t) = n) for a linear birth-death process started at one.
double bd_transient_pmf(std::int64_t n, double t, double lambda, double mu);

// Yule-Simon law of the classical model, n >= 1.
double yule_simon_pmf(std::int64_t n, double beta, double lambda);
double log_yule_simon_pmf(std::int64_t n, double beta, double lambda);

// In-link law of a uniformly chosen page at finite time t (classical model).
double yule_finite_time_pmf(std::int64_t n, double t, double beta, double lambda);

// ---- Limiting in-link distribution ---------------------------------------

// P(N = 0): zero for the pure Yule model, U(1, 0, beta/lambda) when critical,
// and the r-function forms built on 2F1 otherwise.
double pmf_zero(const ModelParams& p);

// P(N = n) for any n >= 0, dispatched on the regime. The supercritical branch
// switches to the (beta, delta, mu) form above kReparamThreshold.
double pmf(std::int64_t n, const ModelParams& p);
double log_pmf(std::int64_t n, const ModelParams& p);

inline constexpr std::int64_t kReparamThreshold = 1000;

// The 2F1 closed form q_beta^n for super- and subcritical rates, n >= 1,
// without any large-n switch. Throws DomainError for the critical and pure
// Yule regimes.
double pmf_gauss_form(std::int64_t n, const ModelParams& p);
double log_pmf_gauss_form(std::int64_t n, const ModelParams& p);

// Absolutely convergent Gamma series (a 2Psi1 Wright function) for
// lambda > mu >= 0, n >= 1.
double pmf_series(std::int64_t n, const ModelParams& p);

// Supercritical pmf written with delta = lambda - mu: the Yule probability of
// rate delta times a correction that depends on both delta and mu. n >= 1.
double pmf_reparam(std::int64_t n, double beta, double delta, double mu);
double log_pmf_reparam(std::int64_t n, double beta, double delta, double mu);

// ---- Moments and generating function -------------------------------------

// A moment that may be infinite.
class Moment {
public:
    static Moment finite(double v) { return Moment(v, false); }
    static Moment infinite() { return Moment(0.0, true); }

    bool is_infinite() const noexcept { return infinite_; }
    // Throws std::logic_error when infinite.
    double value() const;

private:
    Moment(double v, bool inf) : value_(v), infinite_(inf) {}
    double value_;
    bool infinite_;
};

Moment mean(const ModelParams& p);
Moment variance(const ModelParams& p);

// G(u) = E u^N for u in [-1, 1].
double pgf(double u, const ModelParams& p);

// ---- Tail behaviour (supercritical, delta > 0) -----------------------------

// Exact P(N = n) / P(N^Y = n), with N^Y Yule-Simon of rates (beta, delta).
double tail_ratio(std::int64_t n, double beta, double delta, double mu);

// Two-term large-n expansion of tail_ratio.
double tail_ratio_asymptotic(std::int64_t n, double beta, double delta, double mu);

// Leading power-law term n^(-1-beta/delta) Gamma(1+beta/delta) (beta/delta)
// (delta/(mu+delta))^(1-beta/delta).
double tail_dominant(std::int64_t n, double beta, double delta, double mu);

// log P(N = n) ~ slope * log(n) + intercept.
struct TailLine {
    double slope;
    double intercept;
};
TailLine tail_line(double beta, double delta, double mu);

// ---- Tabulation ----------------------------------------------------------

struct PmfTable {
    ModelParams params;
    std::vector<double> probabilities;  // index n = 0 .. n_max
    double tail_mass_bound = 0.0;        // bound on P(N > n_max)

    std::int64_t n_max() const { return static_cast<std::int64_t>(probabilities.size()) - 1; }
    double total_mass() const;
};

// P(N = n) for n = 0..n_max and a bound on the remaining mass: rigorous in the
// pure Yule, supercritical and subcritical regimes; a geometric extrapolation
// of the last ratio with a safety factor of 10 in the critical regime.
PmfTable make_pmf_table(const ModelParams& p, std::int64_t n_max);

// Grows n_max geometrically until the tail bound drops below tail_target or
// n_max reaches n_cap.
PmfTable make_normalized_pmf_table(const ModelParams& p, double tail_target = 1e-9,
                                   std::int64_t n_cap = std::int64_t{1} << 20);

}  // namespace gyule
