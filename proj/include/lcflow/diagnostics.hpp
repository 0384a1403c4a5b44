#pragma once

#include <optional>
#include <vector>

#include "lcflow/state.hpp"

namespace lcflow {

/// Scalars of one state plus left-endpoint running integrals up to its time.
struct DiagnosticsRecord {
    double t = 0.0;
    double E = 0.0;                ///< (||u||^2 + ||grad d||^2) / 2
    double grad_u_sq = 0.0;
    double tension_sq = 0.0;
    double grad_d_L4_4 = 0.0;
    double lap_d_sq = 0.0;
    double inf_d3 = 0.0;
    double d_minus_e3_sq = 0.0;
    double int_u_L4_4 = 0.0;
    double int_grad_d_L4_4 = 0.0;
    double int_lap_d_sq = 0.0;
    double int_grad_d_sq = 0.0;
    double int_D = 0.0;            ///< integral of grad_u_sq + tension_sq
    double energy_residual = 0.0;  ///< E + int_D - E(0)
    double u_L4_4 = 0.0;
    // Trailing columns beyond the fixed set.
    double max_grad_d = 0.0;
    double u_L2_sq = 0.0;
    double int_grad_u_sq = 0.0;
    double sphere_drift = 0.0;     ///< max | |d*|^2 - 1 | before the last normalization

    double grad_d_sq() const noexcept { return 2.0 * E - u_L2_sq; }
    double dissipation() const noexcept { return grad_u_sq + tension_sq; }
};

using Trajectory = std::vector<DiagnosticsRecord>;

/// Diagnostics of `state`. With `prev` the record of the state one step
/// earlier, integrals advance by dt_last times prev's integrands.
DiagnosticsRecord record(const SimState& state, double dt_last, const std::optional<DiagnosticsRecord>& prev,
                         double sphere_drift = 0.0);
/// Same, reusing the forward transforms of the state's components.
DiagnosticsRecord record(const SimState& state, const StateSpectra& spectra, double dt_last,
                         const std::optional<DiagnosticsRecord>& prev, double sphere_drift = 0.0);

inline constexpr double tol_mp = 1e-4;

struct MaxPrincipleReport {
    double min_inf_d3;
    double initial_inf_d3;
    bool applicable;  ///< false when inf d3(0) <= 0
    bool holds;
};

MaxPrincipleReport max_principle_check(const Trajectory& traj, double tolerance = tol_mp);

struct GronwallReport {
    double lhs_max;    ///< max_t ||d - e3||^2 + int ||grad d||^2
    double bound;      ///< rhs at the time of the worst ratio
    double ratio_max;  ///< max_t lhs / (||d0 - e3||^2 exp(int ||Lap d||^2)); 0 when both vanish
};

GronwallReport gronwall_check(const Trajectory& traj);

struct BlowupReport {
    double int_grad_d_L4_4;
    double int_u_L4_4;
    double int_lap_d_sq;
    double int_grad_d_sq;
    /// Relative growth over the final 20% of the run, per integral above.
    double growth_grad_d_L4_4;
    double growth_u_L4_4;
    double growth_lap_d_sq;
    double growth_grad_d_sq;
    double gradient_growth;  ///< max |grad d| at the end over its initial value
    bool global_like;
};

inline constexpr double plateau_tolerance = 0.01;
inline constexpr double growth_limit = 1e3;

/// Global-like iff every running integral grows by < 1% over the final 20%
/// of the recorded interval and gradient_growth < growth_threshold.
BlowupReport blowup_monitor(const Trajectory& traj, double growth_threshold = growth_limit);

struct CoercivityTrack {
    double min_gap;  ///< min_t (1 - ||grad d||_4^4 / ||Lap d||_2^2)
    int used;        ///< records with nondegenerate ratio
    bool empty() const noexcept { return used == 0; }
};

/// Records with ||Lap d||_2 <= 1e-12 are skipped.
CoercivityTrack coercivity_tracker(const Trajectory& traj);

struct L4ChainReport {
    double lhs;  ///< int ||u||_4^4
    double rhs;  ///< C^4 sup ||u||_2^2 int ||grad u||_2^2
    bool holds;
};

L4ChainReport l4_chain_check(const Trajectory& traj, double gn_constant);

}  // namespace lcflow
