#pragma once

#include "ekwhitham/modulation.hpp"

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace ekw {

struct SweepGrid {
    double v_star_min = 0.0;
    double v_star_max = 0.0;
    int n_points = 0;
};

std::vector<double> grid_points(const SweepGrid& g);

// Fractions t in (0, 1) of the way from v_inf to the center: geometric near the
// solitary end, linear afterwards.
std::vector<double> family_fractions(int n, double t_min = 1e-5, double t_max = 0.97);

enum class RowStatus { Ok, Skipped, Error };

struct SweepRow {
    double v_star = 0.0;
    RowStatus status = RowStatus::Error;
    std::string reason;  // error kind or skip cause
    double v_peak = 0.0;
    double xi = 0.0;
    double k = 0.0;
    double det_m0 = 0.0;
    std::array<std::complex<double>, 4> speeds{};
    std::array<bool, 4> infinite{};
    double max_speed = 0.0;
    Verdict verdict;
    FamilyTag family = FamilyTag::Unknown;
};

// Worker count: EKWHITHAM_THREADS when set, else the hardware concurrency.
int sweep_threads();

SweepRow evaluate_row(const OrbitSpec& base, double v_star, const Numerics& num,
                      const PhasePortrait* portrait = nullptr);

// One row per v_star, in the given order, whatever the thread count.
std::vector<SweepRow> run_sweep(const OrbitSpec& base, const std::vector<double>& v_stars,
                                const Numerics& num, int threads = 0);
std::vector<SweepRow> run_sweep(const OrbitSpec& base, const SweepGrid& grid, const Numerics& num,
                                int threads = 0);

struct Transition {
    double v_star = 0.0;
    double xi = 0.0;
    VerdictTag from = VerdictTag::Indeterminate;
    VerdictTag to = VerdictTag::Indeterminate;
    // true when the hyperbolic side has the larger period
    bool hyperbolic_above = false;
};

struct PairTransition {
    double v_star_a = 0.0, v_star_b = 0.0;
    double xi_a = 0.0, xi_b = 0.0;
    int pairs_a = 0, pairs_b = 0;
};

struct DetCrossing {
    double v_star = 0.0;
    double xi = 0.0;
    double max_speed = 0.0;
    bool exceeds_cap = false;
};

struct ThresholdReport {
    std::optional<double> xi_m;
    std::optional<double> xi_M;
    std::optional<double> xi_c;
    std::optional<double> v_inf_threshold;
    std::vector<Transition> transitions;
    std::vector<PairTransition> pair_transitions;
    std::vector<DetCrossing> det_crossings;
};

ThresholdReport find_thresholds(const OrbitSpec& base, const std::vector<SweepRow>& rows, const Numerics& num,
                                double rel_width = 1e-4);

struct FamilyBoundaryOptions {
    int n_points = 40;
    double t_min = 1e-5;
    double t_max = 0.97;
    double width = 1e-3;
    int threads = 0;
};

// Bisection in v_inf on "the family through v_inf has a non-hyperbolic wave".
double find_family_boundary(double j, double sigma, double v_lo, double v_hi, const PressureLaw& law,
                            const Capillarity& kappa, const Numerics& num,
                            const FamilyBoundaryOptions& opts = {});

bool family_has_band(double j, double sigma, double v_inf, const PressureLaw& law, const Capillarity& kappa,
                     const Numerics& num, const FamilyBoundaryOptions& opts = {});

}  // namespace ekw
