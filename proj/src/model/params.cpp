#include <cmath>
#include <stdexcept>

#include "gyule/errors.hpp"
#include "gyule/model.hpp"

namespace gyule {

ModelParams::ModelParams(double beta, double lambda, double mu) : beta_(beta), lambda_(lambda), mu_(mu) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive and finite");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive and finite");
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw DomainError("mu must be non-negative and finite");
}

ModelParams ModelParams::scaled(double c) const {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("scale factor must be positive");
    return ModelParams(beta_ * c, lambda_ * c, mu_ * c);
}

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Supercritical: return "supercritical";
        case Regime::Critical: return "critical";
        case Regime::Subcritical: return "subcritical";
        case Regime::PureYule: return "pure_yule";
    }
    return "unknown";
}

Regime regime(const ModelParams& p) {
    if (p.mu() == 0.0) return Regime::PureYule;
    if (std::abs(p.lambda() - p.mu()) <= kCriticalTolerance * p.lambda()) return Regime::Critical;
    return p.lambda() > p.mu() ? Regime::Supercritical : Regime::Subcritical;
}

double Moment::value() const {
    if (infinite_) throw std::logic_error("moment is infinite");
    return value_;
}

}  // namespace gyule
