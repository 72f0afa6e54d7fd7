#include <cmath>
#include <cstdint>
#include <utility>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/tools/roots.hpp>

#include "gyule/errors.hpp"
#include "gyule/estimation.hpp"
#include "gyule/specfun.hpp"

namespace gyule {
namespace {

double two_sided_p(double t, double dof) {
    if (!std::isfinite(t)) return 0.0;
    boost::math::students_t dist(dof);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

}  // namespace

const char* to_string(FitMethod m) { return m == FitMethod::mle ? "mle" : "tail_regression"; }

FitResult tail_regression(std::span<const TailPoint> points, std::int64_t n_min, std::int64_t n_max,
                          double lambda_scale) {
    if (n_min < 1) throw DomainError("tail_regression: n_min must be >= 1");
    if (!(lambda_scale > 0.0)) throw DomainError("tail_regression: lambda_scale must be positive");

    std::vector<std::pair<double, double>> xy;
    for (const TailPoint& pt : points) {
        if (pt.n < n_min || pt.n > n_max || !(pt.probability > 0.0)) continue;
        xy.emplace_back(std::log(static_cast<double>(pt.n)), std::log(pt.probability));
    }
    if (xy.size() < 3) throw DomainError("tail_regression: needs at least 3 positive points with n >= n_min");

    const double m = static_cast<double>(xy.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : xy) {
        mx += x;
        my += y;
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : xy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (!(sxx > 0.0)) throw DomainError("tail_regression: all points share one degree");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ssr = 0.0;
    for (const auto& [x, y] : xy) {
        const double r = y - intercept - slope * x;
        ssr += r * r;
    }
    const double dof = m - 2.0;
    const double s2 = ssr / dof;

    FitResult f;
    f.method = FitMethod::tail_regression;
    f.slope = slope;
    f.intercept = intercept;
    f.slope_stderr = std::sqrt(s2 / sxx);
    f.intercept_stderr = std::sqrt(s2 * (1.0 / m + mx * mx / sxx));
    f.slope_pvalue = two_sided_p(slope / f.slope_stderr, dof);
    f.intercept_pvalue = two_sided_p(intercept / f.intercept_stderr, dof);
    f.objective = ssr;
    f.points = static_cast<std::int64_t>(xy.size());

    if (!(slope < -1.0)) throw FitError("tail_regression: slope >= -1, tail is not a supercritical power law", f);
    const double B = -slope - 1.0;
    f.beta_over_delta = B;

    if (std::abs(1.0 - B) < kMuIdentifiability) {
        f.mu_identifiable = false;
        f.mu_over_delta = kNaN;
    } else {
        const double c = log_gamma(1.0 + B) + std::log(B) - intercept;
        auto g = [&](double r) { return -(1.0 - B) * std::log1p(r) + c; };
        const double lo = 0.0, hi = 1e6;
        const double glo = g(lo), ghi = g(hi);
        if (glo == 0.0) {
            f.mu_over_delta = 0.0;
        } else if (ghi == 0.0) {
            f.mu_over_delta = hi;
        } else {
            if (std::signbit(glo) == std::signbit(ghi))
                throw FitError("tail_regression: intercept equation has no root for mu/delta in [0, 1e6]", f);
            auto done = [](double a, double b) { return std::abs(b - a) <= 1e-10 * std::max(1.0, std::abs(a)); };
            const auto [a, b] = boost::math::tools::bisect(g, lo, hi, done);
            f.mu_over_delta = 0.5 * (a + b);
        }
    }

    // lambda = delta (1 + mu/delta) fixes delta at a given lambda.
    const double r = f.mu_identifiable ? f.mu_over_delta : 0.0;
    const double delta = lambda_scale / (1.0 + r);
    f.representative_params = ModelParams(B * delta, lambda_scale, r * delta);
    f.beta_over_lambda = B / (1.0 + r);
    f.mu_over_lambda = r / (1.0 + r);
    return f;
}

FitResult tail_regression(const DegreeHistogram& hist, std::int64_t n_min, std::int64_t n_max,
                          double lambda_scale) {
    if (hist.empty()) throw DomainError("tail_regression: empty histogram");
    std::vector<TailPoint> pts;
    const double total = static_cast<double>(hist.total());
    for (const auto& [n, c] : hist.counts()) pts.push_back(TailPoint{n, static_cast<double>(c) / total});
    return tail_regression(pts, n_min, n_max, lambda_scale);
}

}  // namespace gyule
