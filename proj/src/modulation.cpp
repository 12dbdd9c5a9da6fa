#include "ekwhitham/modulation.hpp"

#include "ekwhitham/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace ekw {

Vec4 state_vector(const Orbit& o) {
    const double j = o.spec.j, s = o.spec.sigma, m1 = o.mean_v(), m2 = o.mean_v2();
    return {o.k, m1, s + j * m1, j * m2 + s * m1};
}

Vec4 flux_vector(const Orbit& o) {
    const double j = o.spec.j, s = o.spec.sigma;
    return {0.0, s, o.constants.lambda - j * s, 0.5 * s * s - o.constants.mu};
}

namespace {

double* param(OrbitSpec& s, int c) {
    switch (c) {
        case 0: return &s.j;
        case 1: return &s.sigma;
        case 2: return &s.v_inf;
        default: return &s.v_star;
    }
}

double param_value(const OrbitSpec& s, int c) {
    switch (c) {
        case 0: return s.j;
        case 1: return s.sigma;
        case 2: return s.v_inf;
        default: return s.v_star;
    }
}

double step_for(double x, double h) { return std::max(h, h * std::abs(x)); }

}  // namespace

Mat4 jacobian_m0(const Orbit& o, const Numerics& num) {
    OrbitOptions opts;
    opts.quad_points = o.quad_points;
    opts.amplitude_floor = num.amplitude_floor;
    Mat4 m0;
    for (int c : {0, 2, 3}) {
        double h = step_for(param_value(o.spec, c), num.fd_step);
        bool done = false;
        for (int attempt = 0; attempt < 2 && !done; ++attempt, h *= 0.1) {
            try {
                OrbitSpec sp = o.spec, sm = o.spec;
                *param(sp, c) += h;
                *param(sm, c) -= h;
                Vec4 wp = state_vector(build_orbit(sp, opts));
                Vec4 wm = state_vector(build_orbit(sm, opts));
                m0.col(c) = (wp - wm) / (2.0 * h);
                done = true;
            } catch (const Error&) {
            }
        }
        if (!done) throw Error(ErrorKind::Boundary, "boundary: perturbed orbit invalid");
    }
    m0.col(1) << 0.0, 0.0, 1.0, o.mean_v();
    return m0;
}

Mat4 matrix_m1(const Orbit& o) {
    const auto& law = o.spec.law;
    const double j = o.spec.j, s = o.spec.sigma, vi = o.spec.v_inf, vs = o.spec.v_star;
    const double k = o.k, m1 = o.mean_v(), m2 = o.mean_v2();
    const double pi = law.p(vi), dpi = law.dp(vi), ps = law.p(vs);
    Mat4 m;
    m << -k, 0.0, 0.0, 0.0,
         -m1, -1.0, 0.0, 0.0,
         -j * m1 + 2.0 * j * vi, j, j * j + dpi, 0.0,
         -(s * m1 + j * m2) + 2.0 * j * vi * vs - j * vs * vs, -s, (j * j + dpi) * vs,
         pi - ps + j * j * (vi - vs);
    return m;
}

Mat4 matrix_m1_fd(const Orbit& o, const Numerics& num) {
    auto flux = [&](const OrbitSpec& s) {
        Constants c = integration_constants(s);
        return Vec4(0.0, s.sigma, c.lambda - s.j * s.sigma, 0.5 * s.sigma * s.sigma - c.mu);
    };
    Mat4 jac;
    for (int c = 0; c < 4; ++c) {
        double h = step_for(param_value(o.spec, c), num.fd_step);
        OrbitSpec sp = o.spec, sm = o.spec;
        *param(sp, c) += h;
        *param(sm, c) -= h;
        jac.col(c) = (flux(sp) - flux(sm)) / (2.0 * h);
    }
    Mat4 ej = Mat4::Zero();
    ej.col(0) = state_vector(o);
    return -ej - jac;
}

Speeds characteristic_speeds(const Mat4& m0_in, const Mat4& m1_in, double cap) {
    Speeds out;
    // Equilibrate with the column norms of the pencil; the spectrum is unchanged.
    Mat4 a = m1_in, b = m0_in;
    for (int c = 0; c < 4; ++c) {
        double nrm = std::max(a.col(c).norm(), b.col(c).norm());
        if (nrm > 0.0) {
            a.col(c) /= nrm;
            b.col(c) /= nrm;
        }
    }
    for (int r = 0; r < 4; ++r) {
        double nrm = std::max(a.row(r).norm(), b.row(r).norm());
        if (nrm > 0.0) {
            a.row(r) /= nrm;
            b.row(r) /= nrm;
        }
    }
    const double an = a.norm(), bn = b.norm();
    const double scale = bn > 0.0 ? an / bn : 1.0;
    Eigen::GeneralizedEigenSolver<Mat4> ges(a, b, false);
    if (ges.info() != Eigen::Success) {
        out.indeterminate = true;
        return out;
    }
    struct Item {
        std::complex<double> s;
        bool inf;
    };
    std::vector<Item> items;
    for (int i = 0; i < 4; ++i) {
        std::complex<double> al = ges.alphas()[i];
        double be = ges.betas()[i];
        if (std::abs(al) <= 1e-14 * an && std::abs(be) <= 1e-14 * bn) out.indeterminate = true;
        bool inf = std::abs(be) * cap * std::max(scale, 1e-300) < std::abs(al);
        std::complex<double> s = be != 0.0 ? al / be : std::complex<double>(al.real() >= 0 ? INFINITY : -INFINITY, 0.0);
        items.push_back({s, inf});
    }
    std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
        if (x.inf != y.inf) return !x.inf;
        if (x.s.real() != y.s.real()) return x.s.real() < y.s.real();
        return x.s.imag() < y.s.imag();
    });
    for (int i = 0; i < 4; ++i) {
        out.s[i] = items[i].s;
        out.infinite[i] = items[i].inf;
        if (std::isfinite(std::abs(items[i].s)))
            out.max_abs = std::max(out.max_abs, std::abs(items[i].s) / std::max(scale, 1e-300));
        else
            out.max_abs = INFINITY;
    }
    return out;
}

const char* to_string(VerdictTag t) {
    switch (t) {
        case VerdictTag::Hyperbolic: return "hyperbolic";
        case VerdictTag::NonHyperbolic: return "non_hyperbolic";
        case VerdictTag::NonEvolutionary: return "non_evolutionary";
        case VerdictTag::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

Verdict classify(const Speeds& sp, double det_m0, double det_scale, const Tolerances& tol) {
    Verdict v;
    double scale = 0.0;
    for (int i = 0; i < 4; ++i)
        if (!sp.infinite[i] && std::isfinite(std::abs(sp.s[i]))) scale = std::max(scale, std::abs(sp.s[i]));
    if (scale == 0.0) scale = 1.0;
    int n_complex = 0;
    for (int i = 0; i < 4; ++i)
        if (!sp.infinite[i] && std::abs(sp.s[i].imag()) > tol.tol_im * scale) ++n_complex;
    v.complex_pairs = n_complex / 2;
    double gap = INFINITY;
    for (int i = 0; i < 4; ++i)
        for (int k = i + 1; k < 4; ++k)
            if (!sp.infinite[i] && !sp.infinite[k])
                gap = std::min(gap, std::abs(sp.s[i].real() - sp.s[k].real()));
    v.min_realpart_gap = gap;

    if (sp.indeterminate) {
        v.tag = VerdictTag::Indeterminate;
        return v;
    }
    bool any_inf = false;
    for (bool b : sp.infinite) any_inf = any_inf || b;
    if (std::abs(det_m0) < tol.tol_det * det_scale || any_inf) {
        v.tag = VerdictTag::NonEvolutionary;
        return v;
    }
    if (v.complex_pairs > 0) {
        v.tag = VerdictTag::NonHyperbolic;
        return v;
    }
    v.tag = gap > tol.tol_sep * scale ? VerdictTag::Hyperbolic : VerdictTag::Indeterminate;
    return v;
}

ModulationResult analyze(const OrbitSpec& spec, const Numerics& num) {
    ModulationResult r{build_orbit(spec, num.orbit_options()), Mat4::Zero(), Mat4::Zero(), 0.0, 0.0, {}, {}};
    r.m0 = jacobian_m0(r.orbit, num);
    r.m1 = matrix_m1(r.orbit);
    r.det_m0 = r.m0.determinant();
    r.det_scale = r.m0.col(0).norm() * r.m0.col(1).norm() * r.m0.col(2).norm() * r.m0.col(3).norm();
    r.speeds = characteristic_speeds(r.m0, r.m1, num.speed_cap);
    r.verdict = classify(r.speeds, r.det_m0, r.det_scale, {num.tol_im, num.tol_sep, num.tol_det});
    return r;
}

}  // namespace ekw
