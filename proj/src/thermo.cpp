#include "ekwhitham/thermo.hpp"

#include "ekwhitham/error.hpp"

#include <cmath>

namespace ekw {

ThermoState lagrangian_thermo(const Orbit& o) {
    const auto& law = o.spec.law;
    const auto& c = o.constants;
    ThermoState s;
    s.j = o.spec.j;
    s.sigma = o.spec.sigma;
    s.k = o.k;
    s.v_bar = o.mean_v();
    s.Delta = s.j * (o.mean_v2() - s.v_bar * s.v_bar);
    s.p_bar = -c.lambda - s.j * s.j * s.v_bar;
    s.mean_f = o.moment([&](double v) { return law.f(v); });
    s.mean_n = o.moment([&](double v) { return std::max(0.0, potential(law, c, v).n); });
    s.Theta = 2.0 * s.mean_n / s.k;
    s.e = s.mean_f + s.mean_n + 0.5 * s.j * s.Delta;
    return s;
}

EulerianState to_eulerian(const ThermoState& s, const Orbit& o) {
    if (!(s.v_bar > 0.0)) throw Error(ErrorKind::Vacuum, "mean specific volume not positive");
    EulerianState es;
    const double j = s.j;
    es.rho_bar = 1.0 / s.v_bar;
    es.K = s.k / s.v_bar;
    es.D = es.rho_bar * es.rho_bar * s.Delta;
    es.E = es.rho_bar * s.e;
    es.Theta = s.Theta;

    // Eulerian means carry the extra weight V: <h>_E = <h V> / <V>.
    auto emean = [&](auto h) { return o.moment([&](double v) { return h(v) * v; }) / s.v_bar; };
    const double mean_inv_rho2 = emean([](double v) { return v * v; });
    const double mean_g0 = emean([&](double v) { return o.constants.mu - 0.5 * j * j * v * v; });
    es.g = mean_g0 + 0.5 * j * j * (mean_inv_rho2 - 1.0 / (es.rho_bar * es.rho_bar)) -
           j * es.D / (es.rho_bar * es.rho_bar);
    es.mean_rho = emean([](double v) { return 1.0 / v; });
    es.mean_rho_u = emean([&](double v) { return (s.sigma + j * v) / v; });

    // The capillary energy per unit volume is kappa(1/rho) rho^-5 rho_x^2 / 2; the
    // Eulerian phase derivative of rho follows from V_zeta^2 = 2N / kappa.
    const auto& law = o.spec.law;
    const double vb = s.v_bar, k = s.k;
    es.Theta_eulerian = es.K * emean([&](double v) {
        double kap = o.spec.kappa(v);
        double vtheta2 = 2.0 * std::max(0.0, potential(law, o.constants, v).n) / (kap * k * k);
        double drho2 = vb * vb * vtheta2 / std::pow(v, 6);
        return drho2 * kap * std::pow(v, 5);
    });
    return es;
}

namespace {

struct Sample {
    ThermoState t;
    EulerianState e;
};

Sample sample_at(const OrbitSpec& base, const Direction& d, double s, const OrbitOptions& opts) {
    OrbitSpec spec = base;
    spec.j += s * d.dj;
    spec.v_inf += s * d.dv_inf;
    spec.v_star += s * d.dv_star;
    spec.sigma += s * d.dsigma;
    Orbit o = build_orbit(spec, opts);
    Sample out;
    out.t = lagrangian_thermo(o);
    out.e = to_eulerian(out.t, o);
    return out;
}

std::pair<double, double> residuals(const OrbitSpec& spec, const Direction& d, double h,
                                    const Sample& mid, const OrbitOptions& opts) {
    Sample p = sample_at(spec, d, h, opts), m = sample_at(spec, d, -h, opts);
    const auto& c = mid.t;
    double lag = (p.t.e - m.t.e) -
                 (-c.p_bar * (p.t.v_bar - m.t.v_bar) + c.Theta * (p.t.k - m.t.k) + c.j * (p.t.Delta - m.t.Delta));
    const auto& ce = mid.e;
    double eul = (p.e.E - m.e.E) - (ce.g * (p.e.rho_bar - m.e.rho_bar) + ce.Theta * (p.e.K - m.e.K) +
                                    (c.j / ce.rho_bar) * (p.e.D - m.e.D));
    return {std::abs(lag), std::abs(eul)};
}

double observed_order(double r, double r_half) {
    if (r == 0.0 && r_half == 0.0) return INFINITY;
    if (r_half == 0.0) return INFINITY;
    return std::log2(r / r_half);
}

}  // namespace

GibbsResult gibbs_residual(const OrbitSpec& spec, const Direction& dir, double step,
                           const OrbitOptions& opts) {
    Sample mid = sample_at(spec, dir, 0.0, opts);
    auto [l1, e1] = residuals(spec, dir, step, mid, opts);
    auto [l2, e2] = residuals(spec, dir, 0.5 * step, mid, opts);
    GibbsResult r;
    r.residual = l1;
    r.residual_half = l2;
    r.order = observed_order(l1, l2);
    r.eulerian_residual = e1;
    r.eulerian_residual_half = e2;
    r.eulerian_order = observed_order(e1, e2);
    return r;
}

const char* to_string(Convexity c) {
    switch (c) {
        case Convexity::StrictlyConvex: return "strictly_convex";
        case Convexity::NotConvex: return "not_convex";
        case Convexity::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

ConvexityReport convexity_check(const OrbitSpec& spec, const ConvexityOptions& opts) {
    // y = (v, k, Delta / k); by the Gibbs relation grad_y e = (-p, Theta + j Delta / k, j k).
    auto eval = [&](const OrbitSpec& s, Eigen::Vector3d& y, Eigen::Vector3d& g) {
        Orbit o = build_orbit(s, opts.orbit);
        ThermoState t = lagrangian_thermo(o);
        double z = t.Delta / t.k;
        y << t.v_bar, t.k, z;
        g << -t.p_bar, t.Theta + t.j * z, t.j * t.k;
    };
    Eigen::Matrix3d jy, jg;
    const double q[3] = {spec.j, spec.v_inf, spec.v_star};
    for (int c = 0; c < 3; ++c) {
        double h = std::max(opts.abs_step, opts.rel_step * std::abs(q[c]));
        OrbitSpec sp = spec, sm = spec;
        double* fp = c == 0 ? &sp.j : c == 1 ? &sp.v_inf : &sp.v_star;
        double* fm = c == 0 ? &sm.j : c == 1 ? &sm.v_inf : &sm.v_star;
        *fp += h;
        *fm -= h;
        Eigen::Vector3d yp, gp, ym, gm;
        eval(sp, yp, gp);
        eval(sm, ym, gm);
        jy.col(c) = (yp - ym) / (2.0 * h);
        jg.col(c) = (gp - gm) / (2.0 * h);
    }

    ConvexityReport rep;
    double colprod = jy.col(0).norm() * jy.col(1).norm() * jy.col(2).norm();
    if (!(colprod > 0.0) || std::abs(jy.determinant()) < 1e-12 * colprod) {
        rep.singular_map = true;
        return rep;
    }
    Eigen::Matrix3d h = jg * jy.inverse();
    double hn = h.cwiseAbs().maxCoeff();
    rep.hessian = h;
    rep.asymmetry = hn > 0.0 ? (h - h.transpose()).cwiseAbs().maxCoeff() / hn : 0.0;
    Eigen::Matrix3d hs = 0.5 * (h + h.transpose());
    rep.minors[0] = hs(0, 0);
    rep.minors[1] = hs.topLeftCorner<2, 2>().determinant();
    rep.minors[2] = hs.determinant();
    bool all_pos = true, any_neg = false;
    for (int i = 0; i < 3; ++i) {
        double tol = opts.tol * std::pow(hn, i + 1);
        if (!(rep.minors[i] > tol)) all_pos = false;
        if (rep.minors[i] < -tol) any_neg = true;
    }
    rep.verdict = all_pos ? Convexity::StrictlyConvex : any_neg ? Convexity::NotConvex : Convexity::Indeterminate;
    return rep;
}

}  // namespace ekw
