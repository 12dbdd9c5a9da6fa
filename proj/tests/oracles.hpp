#pragma once

// Reference computations for the tests.  Everything here runs in long double
// and avoids the library's quadrature, root finders and eigen solvers.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

using real = long double;
using cplx = std::complex<long double>;

// Romberg table on [a, b]; stops once two successive diagonal entries agree to tol.
inline real romberg(const std::function<real(real)>& f, real a, real b, real tol = 1e-17L,
                    int max_levels = 22) {
    std::vector<real> prev, cur;
    real h = b - a;
    real trap = 0.5L * h * (f(a) + f(b));
    prev.push_back(trap);
    for (int lvl = 1; lvl < max_levels; ++lvl) {
        h *= 0.5L;
        real s = 0.0L;
        long n = 1L << (lvl - 1);
        for (long i = 0; i < n; ++i) s += f(a + (2 * i + 1) * h);
        cur.assign(lvl + 1, 0.0L);
        cur[0] = 0.5L * prev[0] + h * s;
        real p4 = 1.0L;
        for (int m = 1; m <= lvl; ++m) {
            p4 *= 4.0L;
            cur[m] = cur[m - 1] + (cur[m - 1] - prev[m - 1]) / (p4 - 1.0L);
        }
        if (lvl >= 4 && std::abs(cur[lvl] - prev[lvl - 1]) <= tol * std::abs(cur[lvl])) return cur[lvl];
        prev = cur;
    }
    return prev.back();
}

struct ShallowWaterMoments {
    real k, mean_v, mean_v2, v_peak, third_root;
};

// For p = 1/v^2 the potential times v is a cubic, so
// 2N(v) = j^2 (v - v_star)(v_peak - v)(v - r)/v and the period integral has a
// smooth integrand after v = c - w cos t.
inline ShallowWaterMoments shallow_water_moments(real j, real v_inf, real v_star, real kappa0 = 1.0L) {
    const real j2 = j * j;
    const real lambda = -j2 * v_inf - 1.0L / (v_inf * v_inf);
    const real mu = 1.0L / v_star - 0.5L * j2 * v_star * v_star - lambda * v_star;
    // v^3 + a v^2 + b v + c with root v_star, deflated to v^2 + B v + C
    const real a = 2.0L * lambda / j2, b = 2.0L * mu / j2;
    const real B = a + v_star, C = b + v_star * B;
    const real disc = B * B - 4.0L * C;
    if (disc <= 0.0L) throw std::runtime_error("oracle: no real peak");
    const real sq = std::sqrt(disc);
    const real r1 = 0.5L * (-B + sq), r2 = 0.5L * (-B - sq);
    const real peak = std::max(r1, r2), r = std::min(r1, r2);
    if (!(peak > v_star && r < v_star)) throw std::runtime_error("oracle: root ordering");
    const real c = 0.5L * (v_star + peak), w = 0.5L * (peak - v_star);
    auto g = [&](real t) {
        real v = c - w * std::cos(t);
        return std::sqrt(kappa0 * v / (j2 * (v - r)));
    };
    const real pi = std::numbers::pi_v<long double>;
    real i0 = romberg(g, 0.0L, pi);
    real i1 = romberg([&](real t) { return (c - w * std::cos(t)) * g(t); }, 0.0L, pi);
    real i2 = romberg(
        [&](real t) {
            real v = c - w * std::cos(t);
            return v * v * g(t);
        },
        0.0L, pi);
    return {1.0L / (2.0L * i0), i1 / i0, i2 / i0, peak, r};
}

// Orbit mean of h(v) for the same closed-form shallow-water profile.
inline real shallow_water_mean(real j, real v_inf, real v_star, const std::function<real(real)>& h) {
    auto m = shallow_water_moments(j, v_inf, v_star);
    const real j2 = j * j, c = 0.5L * (v_star + m.v_peak), w = 0.5L * (m.v_peak - v_star);
    const real pi = std::numbers::pi_v<long double>;
    auto g = [&](real t) {
        real v = c - w * std::cos(t);
        return std::sqrt(v / (j2 * (v - m.third_root)));
    };
    real i0 = romberg(g, 0.0L, pi);
    real i1 = romberg([&](real t) { return h(c - w * std::cos(t)) * g(t); }, 0.0L, pi);
    return i1 / i0;
}

// Determinant by Gaussian elimination with partial pivoting.
inline real det4(std::array<std::array<real, 4>, 4> m) {
    real det = 1.0L;
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        if (m[piv][c] == 0.0L) return 0.0L;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (int r = c + 1; r < 4; ++r) {
            real f = m[r][c] / m[c][c];
            for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

// Coefficients c0..c4 of det(M1 - s M0), by interpolation at five nodes.
inline std::array<real, 5> char_poly(const Eigen::Matrix4d& m0, const Eigen::Matrix4d& m1) {
    const real scale = std::max(1.0L, (real)m1.cwiseAbs().maxCoeff() / (real)m0.cwiseAbs().maxCoeff());
    real nodes[5], vals[5];
    for (int i = 0; i < 5; ++i) {
        nodes[i] = scale * (i - 2);
        std::array<std::array<real, 4>, 4> a;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) a[r][c] = (real)m1(r, c) - nodes[i] * (real)m0(r, c);
        vals[i] = det4(a);
    }
    // Newton divided differences, then expand to monomials
    real dd[5];
    std::copy(vals, vals + 5, dd);
    for (int l = 1; l < 5; ++l)
        for (int i = 4; i >= l; --i) dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - l]);
    std::array<real, 5> coef{};
    for (int l = 4; l >= 0; --l) {
        // coef = coef * (s - nodes[l]) + dd[l]
        std::array<real, 5> next{};
        for (int p = 0; p < 4; ++p) {
            next[p + 1] += coef[p];
            next[p] -= nodes[l] * coef[p];
        }
        next[0] += dd[l];
        coef = next;
    }
    return coef;
}

// Durand-Kerner iteration for the roots of sum c[i] s^i.
inline std::vector<cplx> poly_roots(const std::array<real, 5>& c) {
    int deg = 4;
    while (deg > 0 && c[deg] == 0.0L) --deg;
    std::vector<cplx> z(deg);
    real bound = 0.0L;
    for (int i = 0; i < deg; ++i) bound = std::max(bound, std::abs(c[i] / c[deg]));
    bound = 1.0L + bound;
    const cplx seed(0.4L, 0.9L);
    for (int i = 0; i < deg; ++i) z[i] = bound * std::pow(seed, i);
    auto eval = [&](cplx s) {
        cplx v = c[deg];
        for (int i = deg - 1; i >= 0; --i) v = v * s + c[i];
        return v / c[deg];
    };
    for (int it = 0; it < 2000; ++it) {
        real change = 0.0L;
        for (int i = 0; i < deg; ++i) {
            cplx den = 1.0L;
            for (int m = 0; m < deg; ++m)
                if (m != i) den *= z[i] - z[m];
            cplx step = eval(z[i]) / den;
            z[i] -= step;
            change = std::max(change, std::abs(step) / (1.0L + std::abs(z[i])));
        }
        if (change < 1e-19L) break;
    }
    std::sort(z.begin(), z.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    return z;
}

// Newton solve of the periodic gKdV profile equation
//   k (f'(U) - d k^2 U'') - omega U = const,   U = m + a cos 2 pi theta + higher harmonics,
// on a collocation grid; returns omega.  f' is the Taylor polynomial at m.
inline real gkdv_frequency(real k, real m, real a, real f1, real f2, real f3, real f4, real d,
                           int harmonics = 12) {
    const int n = harmonics;      // unknown cosine modes 2..n
    const int grid = 4 * n + 4;   // collocation points in [0, 1/2]
    const real pi = std::numbers::pi_v<long double>;
    // unknowns x = (omega, c, u_2..u_n)
    std::vector<real> x(n + 1, 0.0L);
    x[0] = k * (f2 + d * 4.0L * pi * pi * k * k);
    x[1] = k * f1 - x[0] * m;
    auto residual = [&](const std::vector<real>& y) {
        std::vector<real> res(n + 1, 0.0L);
        for (int g = 0; g < grid; ++g) {
            real th = (g + 0.5L) / (2.0L * grid);
            real u = a * std::cos(2 * pi * th), upp = -4 * pi * pi * a * std::cos(2 * pi * th);
            for (int h = 2; h <= n; ++h) {
                real ch = std::cos(2 * pi * h * th);
                u += y[h] * ch;
                upp -= 4 * pi * pi * h * h * y[h] * ch;
            }
            real fp = f1 + f2 * u + f3 * u * u / 2 + f4 * u * u * u / 6;
            real r = k * (fp - d * k * k * upp) - y[0] * (m + u) - y[1];
            // project on cos 0, cos 1, cos 2..n
            for (int h = 0; h <= n; ++h) res[h] += r * std::cos(2 * pi * h * th) / grid;
        }
        return res;
    };
    for (int it = 0; it < 50; ++it) {
        std::vector<real> r0 = residual(x);
        real nr = 0.0L;
        for (real v : r0) nr = std::max(nr, std::abs(v));
        if (nr < 1e-30L) break;
        Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic> jac(n + 1, n + 1);
        for (int c = 0; c <= n; ++c) {
            std::vector<real> xp = x;
            real h = 1e-9L * std::max(1.0L, std::abs(x[c]));
            xp[c] += h;
            std::vector<real> rp = residual(xp);
            for (int r = 0; r <= n; ++r) jac(r, c) = (rp[r] - r0[r]) / h;
        }
        Eigen::Matrix<real, Eigen::Dynamic, 1> rhs(n + 1);
        for (int r = 0; r <= n; ++r) rhs(r) = -r0[r];
        Eigen::Matrix<real, Eigen::Dynamic, 1> dx = jac.fullPivLu().solve(rhs);
        real step = 0.0L;
        for (int c = 0; c <= n; ++c) {
            x[c] += dx(c);
            step = std::max(step, std::abs(dx(c)) / (1.0L + std::abs(x[c])));
        }
        if (step < 1e-18L) break;
    }
    return x[0];
}

}  // namespace oracle
