#pragma once

// Special functions needed by the closed-form in-link distributions: log-gamma,
// Gauss 2F1, Tricomi U, Appell F1 and the Wright function 2Psi1, all on the
// real line. Everything here is a pure function.

namespace gyule {

enum class EvalMethod { series, transformation, quadrature };

struct EvalResult {
    double value = 0.0;
    double abs_error = 0.0;
    EvalMethod method = EvalMethod::series;
};

// A value stored as exp(log_scale) * scaled.value, for results whose
// magnitude does not fit in a double.
struct ScaledEval {
    double log_scale = 0.0;
    EvalResult scaled;
};

const char* to_string(EvalMethod m);

// ln Gamma(x) for x > 0.
double log_gamma(double x);

// ln Gamma(x + s) - ln Gamma(x), accurate when x is large compared to s where
// the plain difference of log-gammas would cancel.
double log_gamma_ratio(double x, double s);

// Gauss hypergeometric 2F1(a, b; c; z) for real z < 1.
//   z in [0, 0.95): power series with compensated summation;
//   z in [0.95, 1): 1-z connection formulas (including the logarithmic
//                   integer c-a-b case), falling back to the series when the
//                   connection sum cancels badly;
//   z < 0:          Pfaff transformation to z/(z-1) first.
// Throws PoleError for c in {0, -1, -2, ...}, DomainError for z >= 1 and
// AccuracyError when no route reaches 1e-11 relative accuracy.
EvalResult gauss_2f1(double a, double b, double c, double z);

// Tricomi confluent hypergeometric U(a, b, z) for a > 0, z > 0, from the
// Laplace-type integral over (0, inf). Relative accuracy 1e-10.
EvalResult hyp_u(double a, double b, double z, double rel_tol = 1e-12);

// ln(Gamma(a) U(a, b, z)); stays finite when U or Gamma(a) alone would not.
ScaledEval log_gamma_hyp_u(double a, double b, double z, double rel_tol = 1e-12);

// Appell F1(a; b1, b2; c; z1, z2) from its single-integral representation,
// valid for c > a > 0. A z >= 1 is accepted only when the matching exponent
// is a non-positive integer (the factor is then a polynomial in y).
EvalResult appell_f1(double a, double b1, double b2, double c, double z1, double z2,
                     double rel_tol = 1e-11);

// One (shift, scale) pair of a Wright function: Gamma(shift + scale * r).
struct WrightPair {
    double shift;
    double scale;
};

// sum_r Gamma(a1 + A1 r) Gamma(a2 + A2 r) / Gamma(b1 + B1 r) * z^r / r!
// Shifts must be positive and scales positive. Converges everywhere when
// B1 - A1 - A2 > -1 and for |z| < A1^-A1 A2^-A2 B1^B1 when it equals -1.
EvalResult wright_2psi1(WrightPair a1, WrightPair a2, WrightPair b1, double z);
ScaledEval wright_2psi1_scaled(WrightPair a1, WrightPair a2, WrightPair b1, double z);

}  // namespace gyule
