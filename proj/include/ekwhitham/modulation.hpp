#pragma once

#include "ekwhitham/orbit.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace ekw {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

struct Numerics {
    int quad_points = 10000;
    double fd_step = 1e-6;
    double tol_im = 1e-7;
    double tol_sep = 1e-9;
    double tol_det = 1e-10;
    double speed_cap = 1e8;
    double xi_cap = 1e6;
    double amplitude_floor = 1e-8;

    OrbitOptions orbit_options() const {
        OrbitOptions o;
        o.quad_points = quad_points;
        o.amplitude_floor = amplitude_floor;
        return o;
    }
};

// W = (k, <V>, sigma + j<V>, j<V^2> + sigma<V>)
Vec4 state_vector(const Orbit& orbit);
// F = (0, sigma, lambda - j sigma, sigma^2 / 2 - mu)
Vec4 flux_vector(const Orbit& orbit);

// dW / d(j, sigma, v_inf, v_star); the sigma column is exact.
Mat4 jacobian_m0(const Orbit& orbit, const Numerics& num);

Mat4 matrix_m1(const Orbit& orbit);
// -W e_j^T - dF/dP with dF/dP by centered differences; used as a cross-check.
Mat4 matrix_m1_fd(const Orbit& orbit, const Numerics& num);

struct Speeds {
    std::array<std::complex<double>, 4> s{};
    std::array<bool, 4> infinite{};
    bool indeterminate = false;
    double max_abs = 0.0;  // largest finite |s| relative to the matrix scale
};

// Roots of det(M1 - s M0) = 0, sorted by real part (infinite ones last).
Speeds characteristic_speeds(const Mat4& m0, const Mat4& m1, double speed_cap = 1e8);

enum class VerdictTag { Hyperbolic, NonHyperbolic, NonEvolutionary, Indeterminate };
const char* to_string(VerdictTag t);

struct Verdict {
    VerdictTag tag = VerdictTag::Indeterminate;
    int complex_pairs = 0;
    double min_realpart_gap = 0.0;
};

struct Tolerances {
    double tol_im = 1e-7;
    double tol_sep = 1e-9;
    double tol_det = 1e-10;
};

// det_scale: the value |det M0| is compared against (product of column norms).
Verdict classify(const Speeds& speeds, double det_m0, double det_scale, const Tolerances& tol);

struct ModulationResult {
    Orbit orbit;
    Mat4 m0;
    Mat4 m1;
    double det_m0 = 0.0;
    double det_scale = 0.0;
    Speeds speeds;
    Verdict verdict;
};

ModulationResult analyze(const OrbitSpec& spec, const Numerics& num = {});

}  // namespace ekw
