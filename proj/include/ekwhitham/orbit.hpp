#pragma once

#include "ekwhitham/laws.hpp"

#include <vector>

namespace ekw {

struct OrbitSpec {
    double j = 1.0;
    double sigma = 0.0;
    double v_inf = 0.9;
    double v_star = 1.2;
    PressureLaw law = PressureLaw::shallow_water();
    Capillarity kappa = Capillarity::constant(1.0);
};

// Integration constants of the profile equation.
struct Constants {
    double j;
    double lambda;
    double mu;
};

struct PotentialValues {
    double n;
    double dn;
    double d2n;
};

enum class PointKind { Center, Saddle };

struct CriticalPoint {
    double v;
    PointKind kind;
    double n_value;
};

struct SearchWindow {
    double lo;
    double hi;
};

SearchWindow default_window(const PressureLaw& law);

struct OrbitOptions {
    int quad_points = 10000;
    double amplitude_floor = 1e-8;
    // hi <= lo selects the default window
    SearchWindow window{0.0, 0.0};
};

Constants integration_constants(const OrbitSpec& spec);

// N(v) = f - j^2 v^2 / 2 - lambda v - mu, with its first two derivatives.
PotentialValues potential(const PressureLaw& law, const Constants& c, double v);

// Simple roots of N' inside the window, ascending.
std::vector<CriticalPoint> critical_points(const PressureLaw& law, const Constants& c,
                                           SearchWindow window);

// First zero of N above v_star.  The critical points split the axis into
// intervals on which N is monotone, so the first one where N < 0 closes the bracket.
double find_peak(const PressureLaw& law, const Constants& c, double v_star,
                 const std::vector<CriticalPoint>& cps);

double regularized_phi(const PressureLaw& law, const Constants& c, double v_star,
                       double v_peak, double v);

class Orbit {
public:
    OrbitSpec spec;
    Constants constants{};
    double v_peak = 0.0;
    double v_center = 0.0;  // center enclosed by the loop through v_inf
    double k = 0.0;
    double xi = 0.0;
    int quad_points = 0;
    std::vector<CriticalPoint> cps;

    // Profile samples at the quadrature nodes and their probability weights.
    std::vector<double> nodes;
    std::vector<double> weights;

    template <class F>
    double moment(F&& h) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * h(nodes[i]);
        return s;
    }
    double mean_v() const { return m1_; }
    double mean_v2() const { return m2_; }

private:
    friend Orbit build_orbit(const OrbitSpec&, const OrbitOptions&);
    double m1_ = 0.0;
    double m2_ = 0.0;
};

Orbit build_orbit(const OrbitSpec& spec, const OrbitOptions& opts = {});

double wavenumber(const OrbitSpec& spec, const OrbitOptions& opts = {});

template <class F>
double moment(const Orbit& orbit, F&& h) {
    return orbit.moment(std::forward<F>(h));
}

enum class Topology { SingleLoop, TwoFish, EyesAndGuitar, Degenerate };
const char* to_string(Topology t);

enum class FamilyTag { SingleLoop, LeftFish, RightFish, LeftEye, RightEye, Guitar, Unknown };
const char* to_string(FamilyTag t);

struct PhasePortrait {
    PressureLaw law = PressureLaw::shallow_water();
    double j = 0.0;
    double lambda = 0.0;
    std::vector<CriticalPoint> critical_points;  // n_value taken with mu = 0
    Topology topology = Topology::Degenerate;

    // For eyes-and-guitar: the saddle whose homoclinic loop encloses the other.
    double outer_saddle() const;
    FamilyTag family_of(double v_star) const;
};

PhasePortrait classify_portrait(double j, double v_inf, const PressureLaw& law,
                                SearchWindow window = {0.0, 0.0});

// Two-fish calibration: gamma for which w_inf lies on the Rayleigh line through v_inf.
double gamma_from_rayleigh(double j, double v_inf, double w_inf);

// Least-squares fit of gamma to reported critical point locations, started
// from the Rayleigh-line solution above.
double calibrate_vdw_gamma(double j, double v_inf, double w_inf,
                           const std::vector<double>& reported_roots);

}  // namespace ekw
