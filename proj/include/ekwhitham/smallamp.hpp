#pragma once

#include "ekwhitham/laws.hpp"

#include <functional>
#include <optional>

namespace ekw {

enum class EnergyKind { Kdv, Quartic, Taylor };

// Scalar gKdV Hamiltonian H = f(U) + (d/2) U_x^2, described by f'', f''', f'''' .
class GkdvEnergy {
public:
    using Fn = std::function<double(double)>;

    // f = c0 (v^2/2 + v^3/4)
    static GkdvEnergy kdv(double c0);
    // f = v^2/2 + s v^4
    static GkdvEnergy quartic(double s);
    // constant derivatives f'' = a, f''' = b, f'''' = c
    static GkdvEnergy taylor(double f2, double f3, double f4);

    GkdvEnergy with_dispersion(double d) const;

    EnergyKind kind() const { return kind_; }
    double parameter() const { return param_; }
    double dispersion() const { return disp_; }
    double f2(double m) const;
    double f3(double m) const;
    double f4(double m) const;

private:
    EnergyKind kind_ = EnergyKind::Taylor;
    double param_ = 0.0;
    double t2_ = 0.0, t3_ = 0.0, t4_ = 0.0;
    double disp_ = 1.0;
};

struct DispersionData {
    double omega0 = 0.0;
    double omega0_k = 0.0;
    double omega0_kk = 0.0;
    double omega2 = 0.0;
};

struct Omega0 {
    double omega0;
    double omega0_k;
    double omega0_kk;
};

Omega0 gkdv_omega0(double k, double m, const GkdvEnergy& energy);

// Frequency correction at second order in the amplitude a (profile ~ M + a cos 2 pi theta),
// by projecting the third-order equation on the first harmonic.
double gkdv_omega2(double k, double m, const GkdvEnergy& energy);

DispersionData gkdv_dispersion(double k, double m, const GkdvEnergy& energy);

// Closed forms quoted for the two classical energies, as published.
std::optional<double> whitham_reference_omega2(double k, double m, const GkdvEnergy& energy);

enum class SidebandTag { StableSide, UnstableSide, Marginal };
const char* to_string(SidebandTag t);

struct SidebandResult {
    SidebandTag tag = SidebandTag::Marginal;
    double product = 0.0;  // omega2 * omega0_kk
    // -omega0_k -/+ a sqrt(omega2 omega0_kk) when the product is non-negative
    std::optional<double> speed_minus;
    std::optional<double> speed_plus;
};

SidebandResult sideband_condition(double k, double m, const GkdvEnergy& energy, double amplitude = 0.0,
                                  double tol = 1e-14);

// Hyperbolicity of the dispersionless p-system at the mean volume.
bool euler_hyperbolic_at_mean(double v_bar, const PressureLaw& law);

}  // namespace ekw
