#include "ekwhitham/sweep.hpp"

#include "ekwhitham/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace ekw {

std::vector<double> grid_points(const SweepGrid& g) {
    if (g.n_points < 1 || !std::isfinite(g.v_star_min) || !std::isfinite(g.v_star_max))
        throw Error(ErrorKind::InvalidParameter, "bad sweep grid");
    std::vector<double> out(g.n_points);
    if (g.n_points == 1) {
        out[0] = g.v_star_min;
        return out;
    }
    for (int i = 0; i < g.n_points; ++i)
        out[i] = g.v_star_min + (g.v_star_max - g.v_star_min) * i / (g.n_points - 1);
    return out;
}

std::vector<double> family_fractions(int n, double t_min, double t_max) {
    std::vector<double> t;
    if (n < 2) return {t_min};
    int ng = std::max(1, (3 * n) / 5);
    int nl = n - ng;
    const double knee = std::min(0.5, t_max);
    for (int i = 0; i < ng; ++i) t.push_back(t_min * std::pow(knee / t_min, static_cast<double>(i) / ng));
    for (int i = 0; i < nl; ++i) t.push_back(knee + (t_max - knee) * (nl == 1 ? 1.0 : static_cast<double>(i) / (nl - 1)));
    return t;
}

int sweep_threads() {
    if (const char* env = std::getenv("EKWHITHAM_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

SweepRow evaluate_row(const OrbitSpec& base, double v_star, const Numerics& num, const PhasePortrait* portrait) {
    SweepRow row;
    row.v_star = v_star;
    OrbitSpec spec = base;
    spec.v_star = v_star;
    try {
        ModulationResult r = analyze(spec, num);
        row.v_peak = r.orbit.v_peak;
        row.xi = r.orbit.xi;
        row.k = r.orbit.k;
        if (row.xi > num.xi_cap) {
            row.status = RowStatus::Skipped;
            row.reason = "xi_cap";
            return row;
        }
        row.det_m0 = r.det_m0;
        row.speeds = r.speeds.s;
        row.infinite = r.speeds.infinite;
        row.max_speed = r.speeds.max_abs;
        row.verdict = r.verdict;
        row.status = RowStatus::Ok;
        if (portrait) row.family = portrait->family_of(v_star);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Degenerate && std::string(e.what()).find("amplitude") != std::string::npos) {
            row.status = RowStatus::Skipped;
            row.reason = "amplitude_floor";
        } else {
            row.status = RowStatus::Error;
            row.reason = to_string(e.kind());
        }
    }
    return row;
}

std::vector<SweepRow> run_sweep(const OrbitSpec& base, const std::vector<double>& v_stars, const Numerics& num,
                                int threads) {
    std::vector<SweepRow> rows(v_stars.size());
    if (v_stars.empty()) return rows;
    std::optional<PhasePortrait> portrait;
    try {
        portrait = classify_portrait(base.j, base.v_inf, base.law);
    } catch (const Error&) {
    }
    const PhasePortrait* pp = portrait ? &*portrait : nullptr;
    int nt = threads > 0 ? threads : sweep_threads();
    nt = std::max(1, std::min<int>(nt, static_cast<int>(v_stars.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < v_stars.size(); i = next++) rows[i] = evaluate_row(base, v_stars[i], num, pp);
    };
    if (nt == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return rows;
}

std::vector<SweepRow> run_sweep(const OrbitSpec& base, const SweepGrid& grid, const Numerics& num, int threads) {
    return run_sweep(base, grid_points(grid), num, threads);
}

namespace {

// Hyperbolicity class used for band edges; other verdicts do not bound a band.
int verdict_class(const SweepRow& r) {
    if (r.status != RowStatus::Ok) return -1;
    if (r.verdict.tag == VerdictTag::Hyperbolic) return 0;
    if (r.verdict.tag == VerdictTag::NonHyperbolic) return 1;
    return -1;
}

double xi_at(const OrbitSpec& base, double v_star, const Numerics& num) {
    OrbitSpec s = base;
    s.v_star = v_star;
    return build_orbit(s, num.orbit_options()).xi;
}

}  // namespace

ThresholdReport find_thresholds(const OrbitSpec& base, const std::vector<SweepRow>& rows, const Numerics& num,
                                double rel_width) {
    ThresholdReport rep;

    // verdict changes between hyperbolic and non-hyperbolic rows
    const SweepRow* prev = nullptr;
    for (const auto& r : rows) {
        int c = verdict_class(r);
        if (c < 0) continue;
        if (prev && verdict_class(*prev) != c) {
            double lo = prev->v_star, hi = r.v_star;
            int clo = verdict_class(*prev);
            try {
                while (std::abs(hi - lo) > rel_width * std::abs(0.5 * (lo + hi))) {
                    double mid = 0.5 * (lo + hi);
                    SweepRow m = evaluate_row(base, mid, num);
                    if (verdict_class(m) == clo) lo = mid;
                    else hi = mid;
                }
                Transition t;
                t.v_star = 0.5 * (lo + hi);
                t.xi = xi_at(base, t.v_star, num);
                t.from = prev->verdict.tag;
                t.to = r.verdict.tag;
                const SweepRow& hyp = clo == 0 ? *prev : r;
                t.hyperbolic_above = hyp.xi > t.xi;
                rep.transitions.push_back(t);
            } catch (const Error&) {
            }
        }
        prev = &r;
    }
    for (const auto& t : rep.transitions) {
        if (t.hyperbolic_above) rep.xi_M = rep.xi_M ? std::max(*rep.xi_M, t.xi) : t.xi;
        else rep.xi_m = rep.xi_m ? std::min(*rep.xi_m, t.xi) : t.xi;
    }

    // complex pair count changes, bracketed by grid rows only
    prev = nullptr;
    for (const auto& r : rows) {
        if (r.status != RowStatus::Ok) continue;
        if (prev && prev->verdict.complex_pairs != r.verdict.complex_pairs)
            rep.pair_transitions.push_back(
                {prev->v_star, r.v_star, prev->xi, r.xi, prev->verdict.complex_pairs, r.verdict.complex_pairs});
        prev = &r;
    }

    // sign changes of det M0, refined far enough to expose the diverging speed
    prev = nullptr;
    for (const auto& r : rows) {
        if (r.status != RowStatus::Ok) continue;
        if (prev && (prev->det_m0 > 0) != (r.det_m0 > 0)) {
            double lo = prev->v_star, hi = r.v_star;
            bool slo = prev->det_m0 > 0;
            double best = std::max(prev->max_speed, r.max_speed);
            bool exceeded = false;
            try {
                for (int it = 0; it < 200; ++it) {
                    double mid = 0.5 * (lo + hi);
                    if (mid == lo || mid == hi) break;
                    OrbitSpec s = base;
                    s.v_star = mid;
                    ModulationResult m = analyze(s, num);
                    best = std::max(best, m.speeds.max_abs);
                    for (bool b : m.speeds.infinite) exceeded = exceeded || b;
                    if ((m.det_m0 > 0) == slo) lo = mid;
                    else hi = mid;
                }
                DetCrossing dc;
                dc.v_star = 0.5 * (lo + hi);
                dc.xi = xi_at(base, dc.v_star, num);
                dc.max_speed = best;
                dc.exceeds_cap = exceeded || best > num.speed_cap;
                rep.det_crossings.push_back(dc);
            } catch (const Error&) {
            }
        }
        prev = &r;
    }
    if (!rep.det_crossings.empty()) rep.xi_c = rep.det_crossings.front().xi;
    return rep;
}

bool family_has_band(double j, double sigma, double v_inf, const PressureLaw& law, const Capillarity& kappa,
                     const Numerics& num, const FamilyBoundaryOptions& opts) {
    OrbitSpec base{j, sigma, v_inf, v_inf, law, kappa};
    Constants c{j, -j * j * v_inf - law.p(v_inf), 0.0};
    double v0 = 0.0;
    for (const auto& cp : critical_points(law, c, default_window(law)))
        if (cp.kind == PointKind::Center && cp.v > v_inf) {
            v0 = cp.v;
            break;
        }
    if (v0 == 0.0) throw Error(ErrorKind::InvalidParameter, "no center above v_inf");
    std::vector<double> vs;
    for (double t : family_fractions(opts.n_points, opts.t_min, opts.t_max)) vs.push_back(v_inf + t * (v0 - v_inf));
    for (const auto& r : run_sweep(base, vs, num, opts.threads))
        if (r.status == RowStatus::Ok && r.verdict.tag == VerdictTag::NonHyperbolic) return true;
    return false;
}

double find_family_boundary(double j, double sigma, double v_lo, double v_hi, const PressureLaw& law,
                            const Capillarity& kappa, const Numerics& num, const FamilyBoundaryOptions& opts) {
    bool plo = family_has_band(j, sigma, v_lo, law, kappa, num, opts);
    bool phi = family_has_band(j, sigma, v_hi, law, kappa, num, opts);
    if (plo == phi) throw Error(ErrorKind::Bracket, "no bracket: band predicate constant over the range");
    while (v_hi - v_lo > opts.width) {
        double mid = 0.5 * (v_lo + v_hi);
        if (family_has_band(j, sigma, mid, law, kappa, num, opts) == plo) v_lo = mid;
        else v_hi = mid;
    }
    return 0.5 * (v_lo + v_hi);
}

}  // namespace ekw
