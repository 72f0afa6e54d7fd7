#include "gyule/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "gyule/errors.hpp"

namespace gyule {
namespace {

// Requested relative tolerances below this are unattainable in double
// precision and are raised to it.
constexpr double kMinRelTol = 50.0 * std::numeric_limits<double>::epsilon();

// Kronrod 21-point nodes on [-1, 1] (positive half, outermost first); the
// 10-point Gauss nodes are the odd-indexed entries.
constexpr std::array<double, 11> kNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208272059790, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
    double a;
    double b;
    double integral;
    double error;
};

struct ByError {
    bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

template <class G>
Panel gauss_kronrod(const G& g, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = g(center);
    double res_k = kKronrodWeights[10] * fc;
    double res_g = 0.0;
    double res_abs = std::abs(res_k);
    std::array<double, 10> f1{};
    std::array<double, 10> f2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kNodes[j];
        f1[j] = g(center - dx);
        f2[j] = g(center + dx);
        const double sum = f1[j] + f2[j];
        res_k += kKronrodWeights[j] * sum;
        res_abs += kKronrodWeights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) res_g += kGaussWeights[j / 2] * sum;
    }
    const double mean = 0.5 * res_k;
    double res_asc = kKronrodWeights[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j)
        res_asc += kKronrodWeights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

    const double ah = std::abs(half);
    res_abs *= ah;
    res_asc *= ah;
    double err = std::abs((res_k - res_g) * half);
    if (res_asc != 0.0 && err != 0.0)
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    if (res_abs > std::numeric_limits<double>::min() / (50.0 * kEps))
        err = std::max(50.0 * kEps * res_abs, err);
    return Panel{a, b, res_k * half, err};
}

template <class G>
EvalResult adaptive(const G& g, const std::vector<double>& cuts, const QuadratureOptions& opts) {
    std::priority_queue<Panel, std::vector<Panel>, ByError> queue;
    std::vector<Panel> frozen;
    double total = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i] < cuts[i + 1])) continue;
        Panel p = gauss_kronrod(g, cuts[i], cuts[i + 1]);
        total += p.integral;
        error += p.error;
        queue.push(p);
    }

    int subdivisions = 0;
    while (true) {
        if (!std::isfinite(total) || !std::isfinite(error))
            throw AccuracyError("integrand produced a non-finite value", total, error);
        const double target = std::max(opts.abs_tol, std::max(opts.rel_tol, kMinRelTol) * std::abs(total));
        if (error <= target) break;
        if (queue.empty() || subdivisions >= opts.max_subdivisions)
            throw AccuracyError("adaptive quadrature did not reach tolerance", total, error);

        Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b) ||
            (worst.b - worst.a) <= 8.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
            frozen.push_back(worst);
            continue;
        }
        Panel left = gauss_kronrod(g, worst.a, mid);
        Panel right = gauss_kronrod(g, mid, worst.b);
        total += left.integral + right.integral - worst.integral;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++subdivisions;
    }

    // Re-sum from the panels to drop drift from the running updates.
    double sum = 0.0;
    double comp = 0.0;
    double err_sum = 0.0;
    auto add = [&](const Panel& p) {
        const double t = sum + p.integral;
        comp += std::abs(sum) >= std::abs(p.integral) ? (sum - t) + p.integral
                                                       : (p.integral - t) + sum;
        sum = t;
        err_sum += p.error;
    };
    for (const auto& p : frozen) add(p);
    while (!queue.empty()) {
        add(queue.top());
        queue.pop();
    }
    return EvalResult{sum + comp, err_sum, EvalMethod::quadrature};
}

}  // namespace

EvalResult integrate(const Integrand& f, double lo, double hi, const QuadratureOptions& opts) {
    return integrate(f, lo, hi, std::span<const double>{}, opts);
}

EvalResult integrate(const Integrand& f, double lo, double hi, std::span<const double> breakpoints,
                     const QuadratureOptions& opts) {
    if (std::isnan(lo) || std::isnan(hi)) throw DomainError("integrate: NaN bound");
    if (lo == hi) return EvalResult{0.0, 0.0, EvalMethod::quadrature};
    if (lo > hi) {
        EvalResult r = integrate(f, hi, lo, breakpoints, opts);
        r.value = -r.value;
        return r;
    }

    std::vector<double> inner;
    for (double x : breakpoints)
        if (x > lo && x < hi) inner.push_back(x);
    std::sort(inner.begin(), inner.end());

    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);

    auto guarded = [&f](double x, double jacobian) {
        const double v = f(x);
        return v == 0.0 ? 0.0 : v * jacobian;
    };

    if (!lo_inf && !hi_inf) {
        std::vector<double> cuts{lo};
        cuts.insert(cuts.end(), inner.begin(), inner.end());
        cuts.push_back(hi);
        return adaptive([&f](double x) { return f(x); }, cuts, opts);
    }
    if (!lo_inf) {
        // x = lo + s / (1 - s)
        std::vector<double> cuts{0.0};
        for (double x : inner) cuts.push_back((x - lo) / (1.0 + (x - lo)));
        cuts.push_back(1.0);
        return adaptive(
            [&](double s) {
                const double t = 1.0 - s;
                return guarded(lo + s / t, 1.0 / (t * t));
            },
            cuts, opts);
    }
    if (!hi_inf) {
        // x = hi - (1 - s) / s
        std::vector<double> cuts{0.0};
        for (double x : inner) cuts.push_back(1.0 / (1.0 + (hi - x)));
        cuts.push_back(1.0);
        return adaptive([&](double s) { return guarded(hi - (1.0 - s) / s, 1.0 / (s * s)); }, cuts,
                        opts);
    }
    // x = s / (1 - s^2)
    std::vector<double> cuts{-1.0};
    for (double x : inner)
        cuts.push_back(x == 0.0 ? 0.0 : (-1.0 + std::sqrt(1.0 + 4.0 * x * x)) / (2.0 * x));
    cuts.push_back(1.0);
    return adaptive(
        [&](double s) {
            const double d = 1.0 - s * s;
            return guarded(s / d, (1.0 + s * s) / (d * d));
        },
        cuts, opts);
}

}  // namespace gyule
