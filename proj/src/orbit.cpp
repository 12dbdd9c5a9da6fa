#include "ekwhitham/orbit.hpp"

#include "ekwhitham/error.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ekw {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

// Root of g on [a, b] with g(a), g(b) of opposite signs.
template <class G>
double bracket_root(G&& g, double a, double b) {
    double ga = g(a), gb = g(b);
    if (ga == 0.0) return a;
    if (gb == 0.0) return b;
    if ((ga > 0) == (gb > 0)) throw Error(ErrorKind::Bracket, "no sign change in [" + num(a) + ", " + num(b) + "]");
    boost::uintmax_t it = 200;
    auto r = boost::math::tools::toms748_solve(g, a, b, ga, gb,
                                               boost::math::tools::eps_tolerance<double>(52), it);
    return 0.5 * (r.first + r.second);
}

// Real roots of sum c[i] x^i via the companion matrix.
std::vector<double> real_poly_roots(std::vector<double> c) {
    double scale = 0.0;
    for (double x : c) scale = std::max(scale, std::abs(x));
    while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * scale) c.pop_back();
    int n = static_cast<int>(c.size()) - 1;
    std::vector<double> out;
    if (n < 1) return out;
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (int i = 0; i < n; ++i) {
        auto z = es.eigenvalues()[i];
        if (std::abs(z.imag()) <= 1e-7 * std::max(1.0, std::abs(z.real()))) out.push_back(z.real());
    }
    return out;
}

double series_phi(double dn, double d2n, double d3n, double delta, double span) {
    // N(v_end + delta) / ((span - delta) * delta) from the Taylor expansion at the endpoint
    double num = dn + 0.5 * d2n * delta + d3n * delta * delta / 6.0;
    return num / (span - delta);
}

}  // namespace

SearchWindow default_window(const PressureLaw& law) {
    return {law.covolume() + 1e-6, 1e4};
}

Constants integration_constants(const OrbitSpec& s) {
    const double j2 = s.j * s.j;
    double lambda = -j2 * s.v_inf - s.law.p(s.v_inf);
    double mu = s.law.f(s.v_star) - 0.5 * j2 * s.v_star * s.v_star - lambda * s.v_star;
    return {s.j, lambda, mu};
}

PotentialValues potential(const PressureLaw& law, const Constants& c, double v) {
    const double j2 = c.j * c.j;
    auto pv = law.eval(v);
    return {law.f(v) - 0.5 * j2 * v * v - c.lambda * v - c.mu, -pv.p - j2 * v - c.lambda, -pv.dp - j2};
}

std::vector<CriticalPoint> critical_points(const PressureLaw& law, const Constants& c,
                                           SearchWindow w) {
    if (!(w.hi > w.lo)) w = default_window(law);
    if (!(w.lo > law.covolume())) w.lo = law.covolume() + 1e-6 * std::max(1.0, law.covolume());
    const double j2 = c.j * c.j;
    auto dn = [&](double v) { return -law.p(v) - j2 * v - c.lambda; };

    std::vector<double> guesses;
    switch (law.kind()) {
        case LawKind::ShallowWater:
            // -v^2 N'(v) = j^2 v^3 + lambda v^2 + 1
            guesses = real_poly_roots({1.0, 0.0, c.lambda, j2});
            break;
        case LawKind::VanDerWaals: {
            // -(v-1) v^2 N'(v) as a quartic
            double g = law.gamma();
            guesses = real_poly_roots({1.0, -1.0, g - c.lambda, c.lambda - j2, j2});
            break;
        }
        case LawKind::Custom: {
            const int n = 4000;
            double r = std::pow(w.hi / w.lo, 1.0 / n);
            double a = w.lo, fa = dn(a);
            for (int i = 1; i <= n; ++i) {
                double b = (i == n) ? w.hi : w.lo * std::pow(r, i);
                double fb = dn(b);
                if ((fa > 0) != (fb > 0)) guesses.push_back(bracket_root(dn, a, b));
                a = b;
                fa = fb;
            }
            break;
        }
    }

    std::vector<double> roots;
    for (double v : guesses) {
        if (!(v > w.lo && v < w.hi)) continue;
        for (int it = 0; it < 4; ++it) {
            auto pv = potential(law, c, v);
            if (pv.d2n == 0.0) break;
            double nv = v - pv.dn / pv.d2n;
            if (!(nv > w.lo && nv < w.hi)) break;
            v = nv;
        }
        roots.push_back(v);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::abs(a); }),
                roots.end());

    std::size_t max_roots = law.kind() == LawKind::ShallowWater ? 2 : 4;
    if (law.kind() != LawKind::Custom && roots.size() > max_roots)
        throw Error(ErrorKind::Consistency, "too many critical points");

    std::vector<CriticalPoint> out;
    for (double v : roots) {
        auto pv = potential(law, c, v);
        out.push_back({v, pv.d2n < 0.0 ? PointKind::Center : PointKind::Saddle, pv.n});
    }
    return out;
}

double find_peak(const PressureLaw& law, const Constants& c, double v_star,
                 const std::vector<CriticalPoint>& cps) {
    auto n = [&](double v) { return potential(law, c, v).n; };
    if (!(potential(law, c, v_star).dn > 0.0))
        throw Error(ErrorKind::Bracket, "potential not increasing at the trough " + num(v_star));

    double a = v_star;
    for (const auto& cp : cps) {
        if (cp.v <= v_star * (1.0 + 1e-13)) continue;
        if (n(cp.v) < 0.0) {
            if (a == v_star) throw Error(ErrorKind::Bracket, "no crest above " + num(v_star));
            double r = bracket_root(n, a, cp.v);
            return r;
        }
        a = cp.v;
    }
    if (a == v_star) throw Error(ErrorKind::Bracket, "no turning point above " + num(v_star));
    double hi = 2.0 * a;
    while (n(hi) >= 0.0) {
        hi *= 2.0;
        if (hi > 1e15) throw Error(ErrorKind::Bracket, "crest search left the domain");
    }
    double r = bracket_root(n, a, hi);
    // Newton polish
    for (int it = 0; it < 3; ++it) {
        auto pv = potential(law, c, r);
        if (pv.dn == 0.0) break;
        double nr = r - pv.n / pv.dn;
        if (!(nr > a && nr < hi)) break;
        r = nr;
    }
    return r;
}

double regularized_phi(const PressureLaw& law, const Constants& c, double v_star,
                       double v_peak, double v) {
    const double span = v_peak - v_star;
    if (v <= v_star) return potential(law, c, v_star).dn / span;
    if (v >= v_peak) return -potential(law, c, v_peak).dn / span;
    double d_lo = v - v_star, d_hi = v_peak - v;
    const double cut = 1e-3 * span;
    if (d_lo < cut) {
        auto pv = potential(law, c, v_star);
        return series_phi(pv.dn, pv.d2n, -law.d2p(v_star), d_lo, span);
    }
    if (d_hi < cut) {
        auto pv = potential(law, c, v_peak);
        // expand in -d_hi around the crest
        return series_phi(-pv.dn, pv.d2n, law.d2p(v_peak), d_hi, span);
    }
    return potential(law, c, v).n / (d_hi * d_lo);
}

Orbit build_orbit(const OrbitSpec& spec, const OrbitOptions& opts) {
    const auto& law = spec.law;
    if (!std::isfinite(spec.j) || !std::isfinite(spec.sigma) || !std::isfinite(spec.v_inf) ||
        !std::isfinite(spec.v_star))
        throw Error(ErrorKind::InvalidParameter, "non-finite orbit parameter");
    if (spec.j == 0.0) throw Error(ErrorKind::InvalidParameter, "mass flux j must be nonzero");
    if (!(spec.v_inf > law.covolume()))
        throw Error(ErrorKind::InvalidParameter, "v_inf must exceed the covolume");
    if (!(spec.v_star > law.covolume()))
        throw Error(ErrorKind::InvalidParameter, "v_star must exceed the covolume");
    if (!(spec.j * spec.j < -law.dp(spec.v_inf)))
        throw Error(ErrorKind::InvalidParameter, "saddle condition j^2 < -p'(v_inf) fails");
    if (spec.v_star == spec.v_inf) throw Error(ErrorKind::Degenerate, "degenerate: solitary limit");
    if (opts.quad_points < 3) throw Error(ErrorKind::InvalidParameter, "need at least 3 quadrature points");

    Orbit o;
    o.spec = spec;
    o.constants = integration_constants(spec);
    o.quad_points = opts.quad_points;
    o.cps = critical_points(law, o.constants, opts.window);

    double v0 = 0.0;
    for (const auto& cp : o.cps)
        if (cp.kind == PointKind::Center && cp.v > spec.v_inf) {
            v0 = cp.v;
            break;
        }
    if (v0 == 0.0) throw Error(ErrorKind::InvalidParameter, "no center above v_inf");
    if (!(spec.v_star > spec.v_inf && spec.v_star < v0))
        throw Error(ErrorKind::InvalidParameter,
                    "v_star outside (v_inf, v0) = (" + num(spec.v_inf) + ", " + num(v0) + ")");
    o.v_center = v0;

    o.v_peak = find_peak(law, o.constants, spec.v_star, o.cps);
    const double span = o.v_peak - spec.v_star;
    if (span < opts.amplitude_floor * v0)
        throw Error(ErrorKind::Degenerate, "degenerate: amplitude below floor");

    const int n = opts.quad_points;
    const double mid = 0.5 * (o.v_peak + spec.v_star), rad = 0.5 * span;
    const double h = kPi / (n - 1);
    o.nodes.resize(n);
    o.weights.resize(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double v;
        if (i == 0) v = spec.v_star;
        else if (i == n - 1) v = o.v_peak;
        else v = mid + rad * std::sin(-0.5 * kPi + i * h);
        double phi = regularized_phi(law, o.constants, spec.v_star, o.v_peak, v);
        if (!(phi > 0.0) || !std::isfinite(phi))
            throw Error(ErrorKind::Degenerate, "degenerate: profile potential vanishes inside the orbit");
        double g = std::sqrt(spec.kappa(v) / (2.0 * phi)) * ((i == 0 || i == n - 1) ? 0.5 * h : h);
        o.nodes[i] = v;
        o.weights[i] = g;
        total += g;
    }
    o.k = 1.0 / (2.0 * total);
    o.xi = 1.0 / o.k;
    for (auto& w : o.weights) w /= total;
    o.m1_ = o.moment([](double v) { return v; });
    o.m2_ = o.moment([](double v) { return v * v; });
    return o;
}

double wavenumber(const OrbitSpec& spec, const OrbitOptions& opts) {
    return build_orbit(spec, opts).k;
}

const char* to_string(Topology t) {
    switch (t) {
        case Topology::SingleLoop: return "single_loop";
        case Topology::TwoFish: return "two_fish";
        case Topology::EyesAndGuitar: return "eyes_and_guitar";
        case Topology::Degenerate: return "degenerate";
    }
    return "unknown";
}

const char* to_string(FamilyTag t) {
    switch (t) {
        case FamilyTag::SingleLoop: return "single_loop";
        case FamilyTag::LeftFish: return "left_fish";
        case FamilyTag::RightFish: return "right_fish";
        case FamilyTag::LeftEye: return "left_eye";
        case FamilyTag::RightEye: return "right_eye";
        case FamilyTag::Guitar: return "guitar";
        case FamilyTag::Unknown: return "unknown";
    }
    return "unknown";
}

namespace {

struct Lobe {
    double lo, hi;
    bool bounded;
};

// Region next to saddle s (one side) where the mu = 0 potential exceeds its level.
Lobe saddle_lobe(const PressureLaw& law, const Constants& c0, const std::vector<CriticalPoint>& cps,
                 const CriticalPoint& s, bool right) {
    auto level = [&](double v) { return potential(law, c0, v).n - s.n_value; };
    if (right) {
        double a = s.v;
        for (const auto& cp : cps) {
            if (cp.v <= s.v) continue;
            if (cp.n_value < s.n_value) return {s.v, bracket_root(level, a, cp.v), true};
            a = cp.v;
        }
        double hi = 2.0 * a;
        while (level(hi) >= 0.0) {
            hi *= 2.0;
            if (hi > 1e15) return {s.v, INFINITY, false};
        }
        return {s.v, bracket_root(level, a, hi), true};
    }
    double a = s.v;
    for (auto it = cps.rbegin(); it != cps.rend(); ++it) {
        if (it->v >= s.v) continue;
        if (it->n_value < s.n_value) return {bracket_root(level, it->v, a), s.v, true};
        a = it->v;
    }
    double b = law.covolume();
    double lo = b + 0.5 * (a - b);
    for (int i = 0; i < 40 && lo > b; ++i) {
        if (level(lo) < 0.0) return {bracket_root(level, lo, a), s.v, true};
        lo = b + 0.5 * (lo - b);
    }
    return {b, s.v, false};
}

}  // namespace

PhasePortrait classify_portrait(double j, double v_inf, const PressureLaw& law, SearchWindow window) {
    PhasePortrait pp;
    pp.law = law;
    pp.j = j;
    if (!(v_inf > law.covolume()) || j == 0.0) return pp;
    pp.lambda = -j * j * v_inf - law.p(v_inf);
    Constants c0{j, pp.lambda, 0.0};
    pp.critical_points = critical_points(law, c0, window);

    std::vector<CriticalPoint> saddles, centers;
    for (const auto& cp : pp.critical_points)
        (cp.kind == PointKind::Saddle ? saddles : centers).push_back(cp);
    if (saddles.empty() || !(j * j < -law.dp(v_inf))) {
        pp.topology = Topology::Degenerate;
        return pp;
    }
    if (saddles.size() == 1 && centers.size() == 1) {
        pp.topology = Topology::SingleLoop;
        return pp;
    }
    if (saddles.size() != 2 || centers.size() != 2) {
        pp.topology = Topology::Degenerate;
        return pp;
    }
    pp.topology = Topology::TwoFish;
    for (int i = 0; i < 2; ++i) {
        const auto& other = saddles[1 - i];
        for (bool right : {false, true}) {
            Lobe l = saddle_lobe(law, c0, pp.critical_points, saddles[i], right);
            if (l.bounded && l.lo < other.v && other.v < l.hi) pp.topology = Topology::EyesAndGuitar;
        }
    }
    return pp;
}

double PhasePortrait::outer_saddle() const {
    if (topology != Topology::EyesAndGuitar)
        throw Error(ErrorKind::InvalidParameter, "portrait has no enclosing homoclinic loop");
    // The enclosing loop sits at the lower of the two saddle levels.
    const CriticalPoint* best = nullptr;
    for (const auto& cp : critical_points)
        if (cp.kind == PointKind::Saddle && (!best || cp.n_value < best->n_value)) best = &cp;
    return best->v;
}

FamilyTag PhasePortrait::family_of(double v_star) const {
    try {
        Constants c{j, lambda, potential(law, {j, lambda, 0.0}, v_star).n};
        double peak = find_peak(law, c, v_star, critical_points);
        int center_index = 0, inside_centers = 0, inside_saddles = 0, which = -1;
        for (const auto& cp : critical_points) {
            bool inside = cp.v > v_star && cp.v < peak;
            if (cp.kind == PointKind::Saddle) {
                inside_saddles += inside;
            } else {
                if (inside) {
                    ++inside_centers;
                    which = center_index;
                }
                ++center_index;
            }
        }
        if (inside_saddles > 0) return topology == Topology::EyesAndGuitar ? FamilyTag::Guitar : FamilyTag::Unknown;
        if (inside_centers != 1) return FamilyTag::Unknown;
        switch (topology) {
            case Topology::SingleLoop: return FamilyTag::SingleLoop;
            case Topology::TwoFish: return which == 0 ? FamilyTag::LeftFish : FamilyTag::RightFish;
            case Topology::EyesAndGuitar: return which == 0 ? FamilyTag::LeftEye : FamilyTag::RightEye;
            default: return FamilyTag::Unknown;
        }
    } catch (const Error&) {
        return FamilyTag::Unknown;
    }
}

double gamma_from_rayleigh(double j, double v_inf, double w_inf) {
    if (!(v_inf > 1.0 && w_inf > 1.0) || v_inf == w_inf)
        throw Error(ErrorKind::InvalidParameter, "calibration needs distinct volumes above the covolume");
    // p(w) + j^2 w = p(v) + j^2 v is linear in gamma
    double a = 1.0 / (w_inf - 1.0) - 1.0 / (v_inf - 1.0);
    double rhs = 1.0 / (w_inf * w_inf) - 1.0 / (v_inf * v_inf) - j * j * (w_inf - v_inf);
    double g = rhs / a;
    if (!(g > 0.0)) throw Error(ErrorKind::InvalidParameter, "calibration gives non-positive gamma");
    return g;
}

double calibrate_vdw_gamma(double j, double v_inf, double w_inf, const std::vector<double>& reported) {
    double g0 = gamma_from_rayleigh(j, v_inf, w_inf);
    auto misfit = [&](double g) {
        auto law = PressureLaw::van_der_waals(g);
        Constants c{j, -j * j * v_inf - law.p(v_inf), 0.0};
        auto cps = critical_points(law, c, default_window(law));
        double s = 0.0;
        for (double target : reported) {
            double best = INFINITY;
            for (const auto& cp : cps) best = std::min(best, std::abs(cp.v - target));
            s += best * best;
        }
        return s;
    };
    auto r = boost::math::tools::brent_find_minima(misfit, g0 * (1.0 - 1e-4), g0 * (1.0 + 1e-4), 50);
    return r.first;
}

}  // namespace ekw
