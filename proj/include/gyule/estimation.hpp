#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "gyule/histogram.hpp"
#include "gyule/model.hpp"

namespace gyule {

enum class FitMethod { tail_regression, mle };
const char* to_string(FitMethod m);

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct FitResult {
    FitMethod method = FitMethod::tail_regression;
    // Ratios to delta = lambda - mu; NaN when the fitted rates are not
    // supercritical. mu_over_delta is NaN when it cannot be identified.
    double beta_over_delta = kNaN;
    double mu_over_delta = kNaN;
    bool mu_identifiable = true;
    // Ratios to lambda; the scale-free coordinates of the model.
    double beta_over_lambda = kNaN;
    double mu_over_lambda = kNaN;
    // Fitted ratios at lambda = lambda_scale (default 1). When mu/delta is not
    // identifiable mu is set to 0.
    ModelParams representative_params{1.0, 1.0, 0.0};

    // Regression line log p = slope * log n + intercept (tail_regression).
    double slope = kNaN;
    double intercept = kNaN;
    double slope_stderr = kNaN;
    double intercept_stderr = kNaN;
    double slope_pvalue = kNaN;
    double intercept_pvalue = kNaN;
    // Curvature-based standard errors of the lambda ratios (mle).
    double beta_over_lambda_stderr = kNaN;
    double mu_over_lambda_stderr = kNaN;

    // Residual sum of squares (regression) or maximized log-likelihood (mle).
    double objective = kNaN;
    std::int64_t points = 0;       // regression points or histogram bins used
    std::int64_t evaluations = 0;  // objective evaluations (mle)
};

// Fitting failed; carries the best estimate reached, if any.
class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& what, std::optional<FitResult> best = std::nullopt)
        : std::runtime_error(what), best_(std::move(best)) {}
    const std::optional<FitResult>& best_so_far() const noexcept { return best_; }

private:
    std::optional<FitResult> best_;
};

struct TailPoint {
    std::int64_t n;
    double probability;
};

// Below this |1 - beta/delta| the intercept carries no information on mu/delta.
inline constexpr double kMuIdentifiability = 0.02;

// OLS of log p on log n over n_min <= n <= n_max with p > 0; beta/delta from
// the slope, mu/delta by bisection on the intercept equation
//   intercept = (1 - B) log(1/(1 + mu/delta)) + log Gamma(1 + B) + log B.
// Throws DomainError with fewer than 3 points, FitError when the slope is
// >= -1 or the intercept equation has no root in [0, 1e6].
FitResult tail_regression(std::span<const TailPoint> points, std::int64_t n_min,
                          std::int64_t n_max = std::numeric_limits<std::int64_t>::max(),
                          double lambda_scale = 1.0);
FitResult tail_regression(const DegreeHistogram& hist, std::int64_t n_min,
                          std::int64_t n_max = std::numeric_limits<std::int64_t>::max(),
                          double lambda_scale = 1.0);

struct MleOptions {
    // false: drop n = 0 and renormalize the pmf by 1 - P(N = 0).
    bool include_zero = false;
    // Starting (beta/lambda, mu/lambda); a built-in grid is used as well.
    std::optional<std::pair<double, double>> init;
    double lambda_scale = 1.0;
    int max_evaluations = 20000;
    // Simplex size (in log-ratio units) that counts as converged.
    double tolerance = 1e-7;
};

// Maximum likelihood over (beta/lambda, mu/lambda) with a bounded
// Nelder-Mead search in log coordinates. Throws DomainError for a histogram
// with fewer than two populated degrees, FitError on non-convergence.
FitResult fit_mle(const DegreeHistogram& hist, const MleOptions& options = {});

// Log-likelihood of the histogram under p (conditional on N >= 1 unless
// include_zero).
double log_likelihood(const DegreeHistogram& hist, const ModelParams& p, bool include_zero);

struct GofBin {
    std::int64_t n_lo;
    std::int64_t n_hi;  // inclusive; max int64 for the open tail bin
    double observed;
    double expected;
};

struct GofReport {
    double chi_square = 0.0;
    int dof = 0;
    double p_value = kNaN;  // NaN when dof < 1
    double max_cdf_deviation = 0.0;
    std::vector<GofBin> bins;
};

// Pearson chi-square with neighbouring degrees merged until every bin expects
// at least 5 counts; the last bin is open-ended. dof = bins - 1 -
// estimated_parameters.
GofReport goodness_of_fit(const DegreeHistogram& hist, const ModelParams& p, bool include_zero,
                          int estimated_parameters = 0);

}  // namespace gyule
