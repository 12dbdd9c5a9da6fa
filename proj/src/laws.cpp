#include "ekwhitham/laws.hpp"

#include "ekwhitham/error.hpp"

#include <cmath>
#include <string>

namespace ekw {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidParameter: return "invalid_parameter";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Bracket: return "bracket";
        case ErrorKind::Degenerate: return "degenerate";
        case ErrorKind::Consistency: return "consistency";
        case ErrorKind::Boundary: return "boundary";
        case ErrorKind::Resonance: return "resonance";
        case ErrorKind::Vacuum: return "vacuum";
        case ErrorKind::Config: return "config";
    }
    return "unknown";
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidParameter:
        case ErrorKind::Domain:
        case ErrorKind::Vacuum:
            return 1;
        case ErrorKind::Config:
            return 3;
        default:
            return 2;
    }
}

RegimeTag classify_vdw(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw Error(ErrorKind::InvalidParameter, "gamma must be positive");
    // ties go to the smoother regime
    if (gamma >= kGammaInflection) return RegimeTag::MonotoneConvex;
    if (gamma >= kGammaCritical) return RegimeTag::MonotoneInflected;
    return RegimeTag::NonMonotone;
}

const char* to_string(RegimeTag tag) {
    switch (tag) {
        case RegimeTag::MonotoneConvex: return "monotone_convex";
        case RegimeTag::MonotoneInflected: return "monotone_inflected";
        case RegimeTag::NonMonotone: return "non_monotone";
    }
    return "unknown";
}

PressureLaw PressureLaw::shallow_water() {
    PressureLaw law;
    law.kind_ = LawKind::ShallowWater;
    law.b_ = 0.0;
    return law;
}

PressureLaw PressureLaw::van_der_waals(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw Error(ErrorKind::InvalidParameter, "gamma must be positive");
    PressureLaw law;
    law.kind_ = LawKind::VanDerWaals;
    law.b_ = 1.0;
    law.gamma_ = gamma;
    return law;
}

PressureLaw PressureLaw::custom(double covolume, Fn p, Fn dp, Fn f, Fn d2p) {
    if (!p || !dp || !f)
        throw Error(ErrorKind::InvalidParameter, "custom law needs p, dp and f");
    PressureLaw law;
    law.kind_ = LawKind::Custom;
    law.b_ = covolume;
    law.p_ = std::move(p);
    law.dp_ = std::move(dp);
    law.f_ = std::move(f);
    law.d2p_ = std::move(d2p);
    return law;
}

std::optional<RegimeTag> PressureLaw::regime() const {
    if (kind_ != LawKind::VanDerWaals) return std::nullopt;
    return classify_vdw(gamma_);
}

void PressureLaw::check(double v) const {
    if (!(v > b_))
        throw Error(ErrorKind::Domain,
                    "specific volume " + std::to_string(v) + " not above covolume");
}

double PressureLaw::p(double v) const {
    check(v);
    switch (kind_) {
        case LawKind::ShallowWater: return 1.0 / (v * v);
        case LawKind::VanDerWaals: return gamma_ / (v - 1.0) - 1.0 / (v * v);
        case LawKind::Custom: return p_(v);
    }
    return 0.0;
}

double PressureLaw::dp(double v) const {
    check(v);
    switch (kind_) {
        case LawKind::ShallowWater: return -2.0 / (v * v * v);
        case LawKind::VanDerWaals: {
            double w = v - 1.0;
            return -gamma_ / (w * w) + 2.0 / (v * v * v);
        }
        case LawKind::Custom: return dp_(v);
    }
    return 0.0;
}

double PressureLaw::d2p(double v) const {
    check(v);
    switch (kind_) {
        case LawKind::ShallowWater: return 6.0 / (v * v * v * v);
        case LawKind::VanDerWaals: {
            double w = v - 1.0;
            return 2.0 * gamma_ / (w * w * w) - 6.0 / (v * v * v * v);
        }
        case LawKind::Custom: {
            if (d2p_) return d2p_(v);
            double h = 1e-6 * std::abs(v);
            if (v - h <= b_) h = 0.5 * (v - b_);
            return (dp_(v + h) - dp_(v - h)) / (2.0 * h);
        }
    }
    return 0.0;
}

double PressureLaw::f(double v) const {
    check(v);
    switch (kind_) {
        case LawKind::ShallowWater: return 1.0 / v;
        case LawKind::VanDerWaals: return -gamma_ * std::log(v - 1.0) - 1.0 / v;
        case LawKind::Custom: return f_(v);
    }
    return 0.0;
}

PressureValues PressureLaw::eval(double v) const { return {p(v), dp(v), d2p(v)}; }

PressureValues eval_pressure(const PressureLaw& law, double v) { return law.eval(v); }

double potential_f(const PressureLaw& law, double v) { return law.f(v); }

Capillarity Capillarity::constant(double kappa0) {
    if (!(kappa0 > 0.0) || !std::isfinite(kappa0))
        throw Error(ErrorKind::InvalidParameter, "capillarity must be positive");
    Capillarity c;
    c.kind_ = CapillarityKind::Constant;
    c.kappa0_ = kappa0;
    return c;
}

Capillarity Capillarity::custom(std::function<double(double)> kappa) {
    if (!kappa) throw Error(ErrorKind::InvalidParameter, "empty capillarity function");
    Capillarity c;
    c.kind_ = CapillarityKind::Custom;
    c.fn_ = std::move(kappa);
    return c;
}

double Capillarity::operator()(double v) const {
    double k = kind_ == CapillarityKind::Constant ? kappa0_ : fn_(v);
    if (!(k > 0.0))
        throw Error(ErrorKind::InvalidParameter, "capillarity not positive at v = " + std::to_string(v));
    return k;
}

}  // namespace ekw
