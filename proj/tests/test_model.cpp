#include <cmath>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include "gyule/errors.hpp"
#include "gyule/model.hpp"
#include "gyule/specfun.hpp"
#include "oracles.hpp"

using namespace gyule;
using oracle::rel_err;

namespace {

// P(N = n) as the exponential mixture of the transient law, by exp-sinh.
double su_quadrature(std::int64_t n, const ModelParams& p) {
    return oracle::half_line(
        [&](double t) { return p.beta() * std::exp(-p.beta() * t) * bd_transient_pmf(n, t, p.lambda(), p.mu()); });
}

// Forward equations of the linear birth-death chain on {0..N}, RK4.
std::vector<double> kolmogorov(double lambda, double mu, double t, int N = 600, int steps = 20000) {
    std::vector<double> p(N + 1, 0.0);
    p[1] = 1.0;
    auto deriv = [&](const std::vector<double>& x) {
        std::vector<double> d(N + 1, 0.0);
        for (int n = 0; n <= N; ++n) {
            double v = -(lambda + mu) * n * x[n];
            if (n > 0) v += lambda * (n - 1) * x[n - 1];
            if (n < N) v += mu * (n + 1) * x[n + 1];
            d[n] = v;
        }
        return d;
    };
    const double h = t / steps;
    for (int s = 0; s < steps; ++s) {
        auto k1 = deriv(p);
        std::vector<double> y(N + 1);
        for (int i = 0; i <= N; ++i) y[i] = p[i] + 0.5 * h * k1[i];
        auto k2 = deriv(y);
        for (int i = 0; i <= N; ++i) y[i] = p[i] + 0.5 * h * k2[i];
        auto k3 = deriv(y);
        for (int i = 0; i <= N; ++i) y[i] = p[i] + h * k3[i];
        auto k4 = deriv(y);
        for (int i = 0; i <= N; ++i) p[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    return p;
}

}  // namespace

TEST_CASE("ModelParams and regime") {
    CHECK(regime(ModelParams(1, 0.5, 0.25)) == Regime::Supercritical);
    CHECK(regime(ModelParams(1, 0.5, 0.5)) == Regime::Critical);
    CHECK(regime(ModelParams(1, 0.5, 0.0)) == Regime::PureYule);
    CHECK(regime(ModelParams(1, 0.5, 0.75)) == Regime::Subcritical);
    CHECK(regime(ModelParams(1, 0.5, 0.5 * (1 + 1e-13))) == Regime::Critical);
    CHECK(regime(ModelParams(1, 0.5, 0.5 * (1 + 1e-10))) == Regime::Subcritical);
    CHECK(ModelParams(1, 0.5, 0.2).delta() == doctest::Approx(0.3));
    CHECK(ModelParams(1, 0.5, 0.2).scaled(10) == ModelParams(10, 5, 2));
    CHECK_THROWS_AS(ModelParams(0, 1, 0), DomainError);
    CHECK_THROWS_AS(ModelParams(1, 0, 0), DomainError);
    CHECK_THROWS_AS(ModelParams(1, 1, -1), DomainError);
    CHECK_THROWS_AS(ModelParams(NAN, 1, 0), DomainError);
    CHECK(std::string(to_string(Regime::PureYule)) == "pure_yule");
}

TEST_CASE("birth_pmf") {
    CHECK(birth_pmf(1, 0.0, 0.7) == 1.0);
    CHECK(birth_pmf(2, std::log(2.0) / 0.7, 0.7) == doctest::Approx(0.25).epsilon(1e-14));
    double s = 0.0;
    for (int n = 1; n < 2000; ++n) s += birth_pmf(n, 1.3, 0.9);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(birth_pmf(0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(birth_pmf(1, -1.0, 1.0), DomainError);
}

TEST_CASE("bd_transient_pmf") {
    CHECK(bd_transient_pmf(1, 0.0, 0.5, 0.25) == 1.0);
    CHECK(bd_transient_pmf(0, 0.0, 0.5, 0.25) == 0.0);
    for (double t : {0.1, 2.0, 30.0})
        CHECK(bd_transient_pmf(0, t, 0.5, 0.5) == doctest::Approx(0.5 * t / (1 + 0.5 * t)).epsilon(1e-14));
    // Against the forward equations.
    for (auto [l, m] : {std::pair{0.5, 0.25}, std::pair{0.5, 0.5}, std::pair{0.3, 0.8}, std::pair{0.5, 0.0}}) {
        const auto ref = kolmogorov(l, m, 2.0);
        for (int n = 0; n <= 10; ++n) {
            CAPTURE(l);
            CAPTURE(m);
            CAPTURE(n);
            CHECK(std::abs(bd_transient_pmf(n, 2.0, l, m) - ref[n]) < 1e-10);
        }
    }
    // Normalization in each regime, including tiny t.
    for (auto [l, m] : {std::pair{0.5, 0.25}, std::pair{0.5, 0.5}, std::pair{0.3, 0.8}})
        for (double t : {1e-9, 0.7, 5.0}) {
            double s = 0.0;
            for (int n = 0; n < 20000; ++n) s += bd_transient_pmf(n, t, l, m);
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        }
    CHECK_THROWS_AS(bd_transient_pmf(-1, 1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(bd_transient_pmf(1, -1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(bd_transient_pmf(1, 1.0, 1.0, -1.0), DomainError);
}

TEST_CASE("yule_simon_pmf") {
    for (int n = 1; n <= 50; ++n) CHECK(rel_err(yule_simon_pmf(n, 0.7, 0.7), 1.0 / (n * (n + 1.0))) < 1e-13);
    for (double rho : {0.1, 1.0, 3.5}) CHECK(rel_err(yule_simon_pmf(1, rho, 1.0), rho / (1 + rho)) < 1e-14);
    // Sum to N plus the exact tail Gamma(1+rho) Gamma(N+1) / Gamma(N+1+rho).
    const double rho = 1.7;
    double s = 0.0;
    const int N = 1000;
    for (int n = 1; n <= N; ++n) s += yule_simon_pmf(n, rho, 1.0);
    s += std::exp(boost::math::lgamma(1 + rho) + boost::math::lgamma(N + 1.0) - boost::math::lgamma(N + 1 + rho));
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(yule_simon_pmf(0, 1.0, 1.0), DomainError);
}

TEST_CASE("yule_finite_time_pmf") {
    for (int n : {1, 3, 20}) CHECK(rel_err(yule_finite_time_pmf(n, 200.0, 1.0, 0.5), yule_simon_pmf(n, 1.0, 0.5)) < 1e-10);
    CHECK(yule_finite_time_pmf(1, 1e-6, 1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-6));
    const double want = 1.0 / -std::expm1(-2.0) * oracle::unit([](double s) {
                            const double y = 2.0 * s;
                            return 2.0 * std::exp(-1.5 * y) * std::pow(-std::expm1(-0.5 * y), 2);
                        });
    CHECK(rel_err(yule_finite_time_pmf(3, 2.0, 1.0, 0.5), want) < 1e-10);
    CHECK_THROWS_AS(yule_finite_time_pmf(1, -1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("pmf_zero") {
    CHECK(pmf_zero(ModelParams(1, 0.5, 0)) == 0.0);
    const double crit = pmf_zero(ModelParams(1, 0.5, 0.5));
    CHECK(rel_err(crit, hyp_u(1, 0, 2).value) < 1e-14);
    CHECK(rel_err(crit, oracle::half_line([](double t) { return std::exp(-t) * 0.5 * t / (1 + 0.5 * t); })) < 1e-8);
    // lambda/mu = 0.01 with mu large against beta; P(0) is near mu/(mu+beta).
    CHECK(pmf_zero(ModelParams(1, 1, 100)) > 0.9);
    CHECK(rel_err(pmf_zero(ModelParams(1, 0.01, 1)), su_quadrature(0, ModelParams(1, 0.01, 1))) < 1e-8);
    for (const ModelParams& p : {ModelParams(1, 0.5, 0.25), ModelParams(1, 0.3, 0.8), ModelParams(0.2, 2, 1.5)}) {
        CAPTURE(p.mu());
        CHECK(rel_err(pmf_zero(p), su_quadrature(0, p)) < 1e-8);
    }
}

TEST_CASE("pmf against the mixture integral") {
    const ModelParams p(1, 0.5, 0.25);
    for (int n = 1; n <= 50; ++n) {
        CAPTURE(n);
        CHECK(rel_err(pmf(n, p), su_quadrature(n, p)) < 1e-8);
    }
    for (const ModelParams& q : {ModelParams(1, 0.5, 0.5), ModelParams(1, 0.3, 0.8), ModelParams(0.1, 1.1, 1.0)})
        for (int n : {1, 2, 7, 30}) {
            CAPTURE(q.mu());
            CAPTURE(n);
            CHECK(rel_err(pmf(n, q), su_quadrature(n, q)) < 1e-8);
        }
}

TEST_CASE("critical tail decays faster than any power") {
    const ModelParams p(1, 0.5, 0.5);
    auto local_slope = [&](std::int64_t n) {
        return (log_pmf(2 * n, p) - log_pmf(n, p)) / std::log(2.0);
    };
    double prev = 0.0;
    for (std::int64_t n : {10, 40, 160, 640, 2560}) {
        const double s = local_slope(n);
        CHECK(s < prev);
        prev = s;
    }
    CHECK(prev < -30.0);
}

TEST_CASE("pure Yule falls back to Yule-Simon") {
    const ModelParams p(1.3, 0.7, 0.0);
    for (int n = 1; n < 100; n += 7) CHECK(pmf(n, p) == yule_simon_pmf(n, 1.3, 0.7));
    CHECK(pmf(0, p) == 0.0);
}

TEST_CASE("pmf_series and pmf_reparam") {
    const ModelParams p(1, 0.5, 0.25);
    CHECK(rel_err(pmf_series(5, p), pmf(5, p)) < 1e-10);
    CHECK(rel_err(pmf_series(5, ModelParams(1, 0.5, 1e-12)), yule_simon_pmf(5, 1, 0.5)) < 1e-10);
    CHECK(rel_err(pmf_series(5, ModelParams(1, 0.5, 0)), yule_simon_pmf(5, 1, 0.5)) < 1e-14);
    // Prefactor times the Wright function.
    const double B = 4.0;
    const double w = wright_2psi1({6, 1}, {1 + B, 1}, {6 + B, 1}, 0.5).value;
    CHECK(rel_err(pmf_series(5, p), 1.0 * 0.25 / (5 * 0.25) * w) < 1e-13);
    CHECK_THROWS_AS(pmf_series(5, ModelParams(1, 0.5, 0.5)), DomainError);
    CHECK_THROWS_AS(pmf_series(5, ModelParams(1, 0.5, 0.7)), DomainError);

    for (int n : {1, 10, 100}) CHECK(rel_err(pmf_reparam(n, 1.3, 0.4, 0.0), yule_simon_pmf(n, 1.3, 0.4)) < 1e-14);
    CHECK(rel_err(pmf_reparam(10, 1, 1, 80), pmf(10, ModelParams(1, 81, 80))) < 1e-10);
    CHECK(rel_err(pmf_reparam(10, 1, 1, 80), pmf_series(10, ModelParams(1, 81, 80))) < 1e-10);
    CHECK_THROWS_AS(pmf_reparam(3, 1, 0, 1), DomainError);
    CHECK_THROWS_AS(pmf_reparam(3, 1, -1, 1), DomainError);
    // Both supercritical forms agree around the switch point.
    for (std::int64_t n : {999, 1000, 1001, 5000})
        CHECK(rel_err(pmf_gauss_form(n, p), pmf_reparam(n, 1, 0.25, 0.25)) < 1e-10);
}

namespace {

struct Sums {
    double m1, m2, mass;
};

// Truncated sums; the remainder is bounded through Gamma(n)/Gamma(n+1+B) <= n^(-1-B).
Sums moment_sums(const ModelParams& p, std::int64_t N) {
    Sums s{0, 0, 0};
    for (std::int64_t n = 0; n <= N; ++n) {
        const double q = pmf(n, p);
        s.mass += q;
        s.m1 += n * q;
        s.m2 += double(n) * n * q;
    }
    return s;
}

}  // namespace

TEST_CASE("moments") {
    CHECK(mean(ModelParams(1, 0.5, 0.5)).value() == 1.0);
    CHECK(variance(ModelParams(1, 0.5, 0.5)).value() == doctest::Approx(1.0));
    CHECK(mean(ModelParams(1, 0.5, 0.25)).value() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(mean(ModelParams(0.2, 0.5, 0.25)).is_infinite());
    CHECK(variance(ModelParams(0.4, 0.5, 0.25)).is_infinite());
    CHECK_THROWS_AS(mean(ModelParams(0.2, 0.5, 0.25)).value(), std::logic_error);
    // Boundaries: beta = delta and beta = 2 delta are infinite.
    CHECK(mean(ModelParams(0.25, 0.5, 0.25)).is_infinite());
    CHECK_FALSE(mean(ModelParams(0.2500001, 0.5, 0.25)).is_infinite());
    CHECK(variance(ModelParams(0.5, 0.5, 0.25)).is_infinite());
    CHECK_FALSE(variance(ModelParams(0.5000001, 0.5, 0.25)).is_infinite());
    CHECK_FALSE(variance(ModelParams(0.01, 0.5, 0.7)).is_infinite());

    for (const ModelParams& p : {ModelParams(1, 0.5, 0.25), ModelParams(1, 0.3, 0.8), ModelParams(1, 0.5, 0.5),
                                 ModelParams(5, 1, 0)}) {
        CAPTURE(p.mu());
        const Sums s = moment_sums(p, regime(p) == Regime::Supercritical || regime(p) == Regime::PureYule ? 20000 : 2000);
        CHECK(std::abs(s.m1 - mean(p).value()) < 1e-6);
        CHECK(std::abs(s.m2 - s.m1 * s.m1 - variance(p).value()) < 1e-6);
    }
    // Generalized mean is below the classical mean at equal beta, lambda.
    const double yule = mean(ModelParams(1, 0.5, 0)).value();
    CHECK(yule > 1.0);
    CHECK(mean(ModelParams(1, 0.5, 0.1)).value() < yule);
}

TEST_CASE("pgf") {
    for (const ModelParams& p : {ModelParams(1, 0.5, 0.25), ModelParams(1, 0.5, 0.5), ModelParams(1, 0.3, 0.8),
                                 ModelParams(1, 0.5, 0)}) {
        CAPTURE(p.mu());
        CHECK(std::abs(pgf(0.0, p) - pmf_zero(p)) < 1e-12);
        CHECK(pgf(1.0, p) == 1.0);
        CHECK(std::abs(pgf(1.0 - 1e-9, p) - 1.0) < 1e-6);
        double s = 0.0;
        for (int n = 0; n < 400; ++n) s += std::pow(0.5, n) * pmf(n, p);
        CHECK(std::abs(pgf(0.5, p) - s) < 1e-8);
    }
    CHECK_THROWS_AS(pgf(1.5, ModelParams(1, 0.5, 0.25)), DomainError);
    CHECK_THROWS_AS(pgf(-1.01, ModelParams(1, 0.5, 0.25)), DomainError);
}

TEST_CASE("tail ratio and dominant term") {
    for (int n : {1, 10, 1000}) CHECK(tail_ratio(n, 2, 1, 0) == 1.0);
    // Limit (delta/(mu+delta))^(1-B)
    CHECK(rel_err(tail_ratio(100000000, 2, 1, 3), std::pow(0.25, -1.0)) < 1e-6);
    CHECK(rel_err(tail_ratio(100000000, 1, 1, 5), 1.0) < 1e-6);
    // Ratio to the Yule-Simon law of rates (beta, delta)
    const ModelParams p(2, 4, 3);
    for (int n : {1, 50, 3000}) CHECK(rel_err(tail_ratio(n, 2, 1, 3), pmf(n, p) / yule_simon_pmf(n, 2, 1)) < 1e-10);
    CHECK(rel_err(tail_ratio_asymptotic(10000, 2, 1, 3), tail_ratio(10000, 2, 1, 3)) < 5e-3);

    CHECK(rel_err(tail_dominant(10000, 2, 1, 3), pmf(10000, p)) < 0.01);
    CHECK(rel_err(tail_dominant(10000, 1, 1, 0), 1.0 / (10000.0 * 10001.0)) < 2e-4);
    const TailLine line = tail_line(2, 1, 3);
    CHECK(line.slope == -3.0);
    for (double n : {10.0, 1000.0})
        CHECK(std::log(tail_dominant(std::int64_t(n), 2, 1, 3)) ==
              doctest::Approx(line.slope * std::log(n) + line.intercept).epsilon(1e-13));
    CHECK_THROWS_AS(tail_ratio(5, 1, 0, 1), DomainError);
    CHECK_THROWS_AS(tail_dominant(5, 1, -1, 1), DomainError);
}

TEST_CASE("pmf tables are normalized") {
    for (const ModelParams& p : {ModelParams(3, 0.5, 0.25), ModelParams(1, 0.5, 0.5), ModelParams(1, 0.3, 0.8),
                                 ModelParams(2, 1, 0)}) {
        CAPTURE(p.mu());
        const PmfTable t = make_normalized_pmf_table(p);
        CHECK(t.tail_mass_bound < 1e-9);
        CHECK(std::abs(t.total_mass() + t.tail_mass_bound - 1.0) < 1e-6);
        for (double q : t.probabilities) CHECK((q >= 0.0 && q <= 1.0));
    }
    const PmfTable small = make_pmf_table(ModelParams(1, 0.5, 0.25), 5);
    CHECK(small.n_max() == 5);
    CHECK(small.total_mass() + small.tail_mass_bound >= 1.0 - 1e-12);
    CHECK_THROWS_AS(make_pmf_table(ModelParams(1, 0.5, 0.25), -1), DomainError);
}

TEST_CASE("scale invariance and Yule limit") {
    for (const ModelParams& p : {ModelParams(1, 0.5, 0.25), ModelParams(1, 0.5, 0.5), ModelParams(1, 0.3, 0.8)})
        for (double c : {0.1, 10.0})
            for (int n : {0, 1, 5, 40}) CHECK(rel_err(pmf(n, p.scaled(c)), pmf(n, p)) < 1e-12);
    for (int n = 1; n <= 100; ++n)
        CHECK(rel_err(pmf(n, ModelParams(1, 0.5, 1e-8)), yule_simon_pmf(n, 1, 0.5)) < 1e-6);
}
