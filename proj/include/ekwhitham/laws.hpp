#pragma once

#include <functional>
#include <optional>

namespace ekw {

enum class LawKind { ShallowWater, VanDerWaals, Custom };

enum class RegimeTag { MonotoneConvex, MonotoneInflected, NonMonotone };

// Regime transitions of the nondimensional van der Waals law.
inline constexpr double kGammaInflection = 81.0 / 256.0;
inline constexpr double kGammaCritical = 8.0 / 27.0;

RegimeTag classify_vdw(double gamma);
const char* to_string(RegimeTag tag);

struct PressureValues {
    double p;
    double dp;
    double d2p;
};

class PressureLaw {
public:
    using Fn = std::function<double(double)>;

    static PressureLaw shallow_water();
    static PressureLaw van_der_waals(double gamma);
    // d2p may be empty; it is then obtained by differencing dp.
    static PressureLaw custom(double covolume, Fn p, Fn dp, Fn f, Fn d2p = {});

    LawKind kind() const { return kind_; }
    double covolume() const { return b_; }
    double gamma() const { return gamma_; }
    std::optional<RegimeTag> regime() const;

    double p(double v) const;
    double dp(double v) const;
    double d2p(double v) const;
    double f(double v) const;
    PressureValues eval(double v) const;

private:
    PressureLaw() = default;
    void check(double v) const;

    LawKind kind_ = LawKind::ShallowWater;
    double b_ = 0.0;
    double gamma_ = 0.0;
    Fn p_, dp_, d2p_, f_;
};

PressureValues eval_pressure(const PressureLaw& law, double v);
double potential_f(const PressureLaw& law, double v);

enum class CapillarityKind { Constant, Custom };

class Capillarity {
public:
    static Capillarity constant(double kappa0);
    static Capillarity custom(std::function<double(double)> kappa);

    CapillarityKind kind() const { return kind_; }
    double value() const { return kappa0_; }
    double operator()(double v) const;

private:
    Capillarity() = default;
    CapillarityKind kind_ = CapillarityKind::Constant;
    double kappa0_ = 1.0;
    std::function<double(double)> fn_;
};

}  // namespace ekw
