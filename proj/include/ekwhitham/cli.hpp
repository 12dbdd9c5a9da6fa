#pragma once

#include "ekwhitham/modulation.hpp"
#include "ekwhitham/orbit.hpp"
#include "ekwhitham/smallamp.hpp"
#include "ekwhitham/sweep.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>

namespace ekw {

struct SmallAmplitudeConfig {
    double k = 0.0;
    double M = 0.0;
    double amplitude = 0.0;
    GkdvEnergy energy = GkdvEnergy::taylor(0.0, 0.0, 0.0);
};

struct Config {
    PressureLaw law = PressureLaw::shallow_water();
    Capillarity kappa = Capillarity::constant(1.0);
    std::optional<double> j, sigma, v_inf, v_star;
    std::optional<SweepGrid> sweep;
    std::optional<SmallAmplitudeConfig> small_amplitude;
    Numerics numerics;

    // Orbit spec from the wave block; require_star demands v_star.
    OrbitSpec spec(bool require_star = true) const;
};

// Throws Error(Config) on malformed input, unknown keys or missing fields.
Config parse_config(const nlohmann::json& j);
Config load_config(const std::string& path);

// 17 significant digits, so the value reads back exactly ("inf"/"nan" spelled out).
std::string format_double(double x);

// Writes via a temporary file in the same directory, then renames.
void write_atomic(const std::string& path, const std::string& content);

std::string sweep_csv(const std::vector<SweepRow>& rows);
nlohmann::json thresholds_json(const ThresholdReport& rep);

nlohmann::json wave_json(const Orbit& orbit);
nlohmann::json modulation_json(const ModulationResult& r, bool frame_shift);
nlohmann::json portrait_json(const PhasePortrait& pp);
nlohmann::json small_amplitude_json(const SmallAmplitudeConfig& c);

// Entry point of the ekwhitham tool; returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

// Regenerates the regression fixture file used by the test suite.
void seed_fixtures(const std::string& path);

}  // namespace ekw
