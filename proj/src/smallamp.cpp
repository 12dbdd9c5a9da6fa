#include "ekwhitham/smallamp.hpp"

#include "ekwhitham/error.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace ekw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Even 1-periodic functions as cosine coefficients: u = sum c[n] cos(2 pi n theta).
using Series = std::vector<double>;

Series mul(const Series& a, const Series& b) {
    Series out(a.size() + b.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            double t = 0.5 * a[i] * b[j];
            out[i > j ? i - j : j - i] += t;
            out[i + j] += t;
        }
    return out;
}

Series scaled(Series a, double s) {
    for (auto& x : a) x *= s;
    return a;
}

Series add(Series a, const Series& b) {
    if (b.size() > a.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
}

// <d_theta a * d_theta b>
double dmean(const Series& a, const Series& b) {
    double s = 0.0;
    for (std::size_t n = 1; n < std::min(a.size(), b.size()); ++n) {
        double w = kTwoPi * static_cast<double>(n);
        s += 0.5 * w * w * a[n] * b[n];
    }
    return s;
}

}  // namespace

GkdvEnergy GkdvEnergy::kdv(double c0) {
    GkdvEnergy e;
    e.kind_ = EnergyKind::Kdv;
    e.param_ = c0;
    return e;
}

GkdvEnergy GkdvEnergy::quartic(double s) {
    GkdvEnergy e;
    e.kind_ = EnergyKind::Quartic;
    e.param_ = s;
    return e;
}

GkdvEnergy GkdvEnergy::taylor(double f2, double f3, double f4) {
    GkdvEnergy e;
    e.kind_ = EnergyKind::Taylor;
    e.t2_ = f2;
    e.t3_ = f3;
    e.t4_ = f4;
    return e;
}

GkdvEnergy GkdvEnergy::with_dispersion(double d) const {
    GkdvEnergy e = *this;
    e.disp_ = d;
    return e;
}

double GkdvEnergy::f2(double m) const {
    switch (kind_) {
        case EnergyKind::Kdv: return param_ * (1.0 + 1.5 * m);
        case EnergyKind::Quartic: return 1.0 + 12.0 * param_ * m * m;
        case EnergyKind::Taylor: return t2_;
    }
    return 0.0;
}

double GkdvEnergy::f3(double m) const {
    switch (kind_) {
        case EnergyKind::Kdv: return 1.5 * param_;
        case EnergyKind::Quartic: return 24.0 * param_ * m;
        case EnergyKind::Taylor: return t3_;
    }
    return 0.0;
}

double GkdvEnergy::f4(double) const {
    switch (kind_) {
        case EnergyKind::Kdv: return 0.0;
        case EnergyKind::Quartic: return 24.0 * param_;
        case EnergyKind::Taylor: return t4_;
    }
    return 0.0;
}

Omega0 gkdv_omega0(double k, double m, const GkdvEnergy& en) {
    if (!(k > 0.0)) throw Error(ErrorKind::InvalidParameter, "wavenumber must be positive");
    const double d = en.dispersion(), q = kTwoPi * k;
    return {k * (en.f2(m) + d * q * q), en.f2(m) + 3.0 * d * q * q, 6.0 * d * kTwoPi * kTwoPi * k};
}

double gkdv_omega2(double k, double m, const GkdvEnergy& en) {
    const Omega0 w0 = gkdv_omega0(k, m, en);
    const double d = en.dispersion(), f2 = en.f2(m), f3 = en.f3(m), f4 = en.f4(m);

    const Series u1{0.0, 1.0};
    // Nonlinear terms of omega U' = k (f'(U) - d k^2 U'')' sit on the right-hand side
    // with a minus sign once the linear operator is moved left.
    // second order: L_n u2_n = -k * (f''' u1^2 / 2)_n on every harmonic n >= 2
    const Series forcing = scaled(mul(u1, u1), 0.5 * f3);
    if (forcing.size() > 1 && std::abs(forcing[1]) > 0.0)
        throw Error(ErrorKind::Consistency, "first-harmonic forcing at second order");
    Series u2(forcing.size(), 0.0);
    const double ref = std::abs(k * f2) + std::abs(w0.omega0) + std::abs(k * d) * (kTwoPi * k) * (kTwoPi * k);
    for (std::size_t n = 2; n < forcing.size(); ++n) {
        if (forcing[n] == 0.0) continue;
        double q = kTwoPi * static_cast<double>(n) * k;
        double ln = k * (f2 + d * q * q) - w0.omega0;
        if (std::abs(ln) <= 1e-12 * ref) throw Error(ErrorKind::Resonance, "resonance: harmonic " + std::to_string(n));
        u2[n] = -k * forcing[n] / ln;
    }

    // third order, projected on d_theta u1
    const Series bracket = add(scaled(mul(u1, u2), f3), scaled(mul(u1, mul(u1, u1)), f4 / 6.0));
    return k * dmean(u1, bracket) / dmean(u1, u1);
}

DispersionData gkdv_dispersion(double k, double m, const GkdvEnergy& en) {
    Omega0 w = gkdv_omega0(k, m, en);
    return {w.omega0, w.omega0_k, w.omega0_kk, gkdv_omega2(k, m, en)};
}

std::optional<double> whitham_reference_omega2(double k, double m, const GkdvEnergy& en) {
    if (en.dispersion() != 1.0) return std::nullopt;
    const double q = kTwoPi * k, s = en.parameter();
    switch (en.kind()) {
        case EnergyKind::Kdv: return -3.0 * s * s / (32.0 * q) / kTwoPi;
        case EnergyKind::Quartic: return (-3.0 * s * q + 24.0 * s * s * m * m / q) / kTwoPi;
        case EnergyKind::Taylor: return std::nullopt;
    }
    return std::nullopt;
}

const char* to_string(SidebandTag t) {
    switch (t) {
        case SidebandTag::StableSide: return "stable_side";
        case SidebandTag::UnstableSide: return "unstable_side";
        case SidebandTag::Marginal: return "marginal";
    }
    return "unknown";
}

SidebandResult sideband_condition(double k, double m, const GkdvEnergy& en, double a, double tol) {
    DispersionData dd = gkdv_dispersion(k, m, en);
    SidebandResult r;
    r.product = dd.omega2 * dd.omega0_kk;
    if (r.product < -tol) r.tag = SidebandTag::UnstableSide;
    else if (r.product > tol) r.tag = SidebandTag::StableSide;
    else r.tag = SidebandTag::Marginal;
    if (r.tag != SidebandTag::UnstableSide) {
        double root = a * std::sqrt(std::max(0.0, r.product));
        r.speed_minus = -dd.omega0_k - root;
        r.speed_plus = -dd.omega0_k + root;
    }
    return r;
}

bool euler_hyperbolic_at_mean(double v_bar, const PressureLaw& law) { return law.dp(v_bar) < 0.0; }

}  // namespace ekw
