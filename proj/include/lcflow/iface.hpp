#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lcflow/diagnostics.hpp"
#include "lcflow/dynamics.hpp"

namespace lcflow {

enum class ScenarioKind { hemisphere, radial, bubble, equator, taylor_green };

std::string to_string(ScenarioKind k);

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::hemisphere;
    // hemisphere
    double epsilon0 = 0.5;
    int roughness = 1;
    double amplitude = 10.0;
    std::uint64_t seed = 42;
    // radial
    double peak_over_pi = 0.0;
    double width = 0.0;  ///< 0 means L / 40
    double r_cut = 0.0;  ///< 0 means L / 4
    // bubble
    double scale = 1.0;
    // equator, taylor_green
    int mode = 1;
    double tg_amplitude = 1.0;
    // random velocity (hemisphere, radial, bubble, equator)
    double velocity_energy = 0.0;
    int velocity_modes = 1;
    std::uint64_t velocity_seed = 43;
};

struct Config {
    SystemKind system = SystemKind::liquid_crystal;
    int n = 0;
    double L = 0.0;
    ScenarioConfig scenario;
    StepPolicy policy;
    double t_end = 0.0;
    double record_interval = 0.01;
    double snapshot_interval = 0.0;  ///< 0 writes only the final snapshot
    double growth_factor = growth_limit;
    double drift_limit = 0.0;
    double max_principle_tolerance = tol_mp;
    std::string output_dir = ".";
};

/// Line-oriented `key = value` text with '#' comments. Unknown keys, keys
/// of another scenario and out-of-range values throw ValidationError;
/// syntax errors and duplicates throw ParseError. step.dt_min defaults to
/// 1e-9 run.t_end.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

Grid2D config_grid(const Config& c);
SimState initial_state(const Config& c);
RunConfig run_config(const Config& c);

/// Names of the fixed CSV columns followed by the trailing ones.
const std::vector<std::string>& diagnostics_columns();

void write_diagnostics(const Trajectory& records, const std::string& path);
/// The fixed columns must lead in order; trailing columns may be any
/// prefix of the known extras. Malformed rows throw ParseError with the
/// 1-based file line.
Trajectory read_diagnostics(const std::string& path);

inline constexpr std::uint32_t snapshot_version = 1;

void write_snapshot(const SimState& state, const std::string& path);
/// Validates magic, version, size and the state invariants (|d| at
/// tol_evolve, divergence-free u).
SimState read_snapshot(const std::string& path);

struct SpectrumBin {
    int shell;          ///< round(|k|)
    double frequency;   ///< 2 pi shell / L
    double u_energy;    ///< (1/2) sum over the shell of |u_k|^2 L^2
    double grad_d_energy;
};

/// Shell-binned energy spectra of u and grad d, shells 0..round(n / sqrt 2).
std::vector<SpectrumBin> energy_spectrum(const SimState& state);
void write_spectrum(const std::vector<SpectrumBin>& bins, const std::string& path);

struct CheckLine {
    std::string name;
    bool pass;
    std::string detail;
};

/// Property suites: "spectral", "sphere", "bernstein", "gn".
const std::vector<std::string>& check_suites();
std::vector<CheckLine> run_check_suite(const std::string& name);

}  // namespace lcflow
