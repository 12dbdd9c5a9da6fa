#pragma once

#include "ekwhitham/orbit.hpp"

#include <Eigen/Dense>

#include <array>

namespace ekw {

struct ThermoState {
    double v_bar = 0.0;
    double k = 0.0;
    double Delta = 0.0;
    double e = 0.0;
    double Theta = 0.0;
    double p_bar = 0.0;
    double j = 0.0;
    double sigma = 0.0;
    double mean_f = 0.0;
    double mean_n = 0.0;
};

struct EulerianState {
    double rho_bar = 0.0;
    double K = 0.0;
    double D = 0.0;
    double E = 0.0;
    double g = 0.0;
    double Theta = 0.0;
    // Theta evaluated from the Eulerian profile, and the two mean identities.
    double Theta_eulerian = 0.0;
    double mean_rho = 0.0;
    double mean_rho_u = 0.0;
};

ThermoState lagrangian_thermo(const Orbit& orbit);
EulerianState to_eulerian(const ThermoState& state, const Orbit& orbit);

struct Direction {
    double dj = 0.0;
    double dv_inf = 0.0;
    double dv_star = 0.0;
    double dsigma = 0.0;
};

struct GibbsResult {
    double residual = 0.0;       // at step
    double residual_half = 0.0;  // at step / 2
    double order = 0.0;
    double eulerian_residual = 0.0;
    double eulerian_residual_half = 0.0;
    double eulerian_order = 0.0;
};

// Centered-difference residuals of de = -p dv + Theta dk + j dDelta and of
// dE = g drho + Theta dK + (j / rho) dD along a parameter direction.
GibbsResult gibbs_residual(const OrbitSpec& spec, const Direction& dir, double step,
                           const OrbitOptions& opts = {});

enum class Convexity { StrictlyConvex, NotConvex, Indeterminate };
const char* to_string(Convexity c);

struct ConvexityOptions {
    double rel_step = 1e-5;
    double abs_step = 1e-7;
    double tol = 1e-6;
    OrbitOptions orbit;
};

struct ConvexityReport {
    Convexity verdict = Convexity::Indeterminate;
    Eigen::Matrix3d hessian = Eigen::Matrix3d::Zero();
    std::array<double, 3> minors{};
    double asymmetry = 0.0;
    bool singular_map = false;
};

// Hessian of e in (v, k, Delta / k), through the parameter map (j, v_inf, v_star).
ConvexityReport convexity_check(const OrbitSpec& spec, const ConvexityOptions& opts = {});

}  // namespace ekw
