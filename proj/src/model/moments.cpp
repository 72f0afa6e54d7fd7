#include <cmath>

#include "gyule/errors.hpp"
#include "gyule/model.hpp"
#include "gyule/specfun.hpp"

namespace gyule {

Moment mean(const ModelParams& p) {
    const Regime r = regime(p);
    if (r == Regime::Critical) return Moment::finite(1.0);
    const double d = p.delta();
    if (d > 0.0 && p.beta() <= d) return Moment::infinite();
    return Moment::finite(p.beta() / (p.beta() - d));
}

Moment variance(const ModelParams& p) {
    const Regime r = regime(p);
    if (r == Regime::Critical) return Moment::finite(2.0 * p.lambda() / p.beta());
    const double b = p.beta();
    const double d = p.delta();
    if (d > 0.0 && b <= 2.0 * d) return Moment::infinite();
    // E N^2 = b/(b-d) (1 + 2 lambda/(b-2d))
    const double m = b / (b - d);
    const double second = m * (1.0 + 2.0 * p.lambda() / (b - 2.0 * d));
    return Moment::finite(second - m * m);
}

double pgf(double u, const ModelParams& p) {
    if (!(u >= -1.0 && u <= 1.0)) throw DomainError("pgf: u must lie in [-1, 1]");
    if (u == 1.0) return 1.0;
    const double l = p.lambda();
    const double m = p.mu();
    const double b = p.beta();
    switch (regime(p)) {
        case Regime::PureYule: {
            const double rho = b / l;
            return rho / (1.0 + rho) * u * gauss_2f1(1.0, 1.0, rho + 2.0, u).value;
        }
        case Regime::Critical: {
            const double z = b / (l * (1.0 - u));
            return hyp_u(1.0, 0.0, z).value + u * z * hyp_u(1.0, 1.0, z).value;
        }
        case Regime::Supercritical: {
            const double B = b / (l - m);
            const double z1 = (l * u - m) / (m * (u - 1.0));
            const double z2 = (l * u - m) / (l * (u - 1.0));
            return m / l * appell_f1(B, -1.0, 1.0, 1.0 + B, z1, z2).value;
        }
        case Regime::Subcritical: {
            const double B = b / (m - l);
            const double z1 = m * (u - 1.0) / (l * u - m);
            const double z2 = l * (u - 1.0) / (l * u - m);
            return appell_f1(B, -1.0, 1.0, 1.0 + B, z1, z2).value;
        }
    }
    return 0.0;
}

}  // namespace gyule
