#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lcflow/diagnostics.hpp"
#include "lcflow/state.hpp"

namespace lcflow {

enum class StepMode { fixed, cfl };

struct StepPolicy {
    StepMode mode = StepMode::cfl;
    double dt_fixed = 1e-3;
    double cfl_number = 0.4;
    double dt_min = 1e-9;
    /// Ceiling on the CFL step; 0 means the grid spacing h.
    double dt_max = 0.0;
    /// Coefficient of the optional h^2 bound; 0 disables it.
    double h2_safety = 0.0;
    /// kappa > 0 raises dt_min to cfl_number (h / kappa)^2, so the step
    /// collapses once max|grad d| h exceeds kappa; 0 disables.
    double resolution_limit = 0.0;

    /// Throws InvalidArgument on an out-of-range field.
    void validate() const;
};

/// Divergence of grad d (x) grad d: component i = sum_j D_j (D_i d . D_j d),
/// with dealiased products.
VectorField2 elastic_stress(const DirectorField& d);

/// Integrating-factor step of the coupled system, reusing FFT workspace
/// across calls on one grid.
class Stepper {
public:
    explicit Stepper(const Grid2D& grid);
    ~Stepper();
    Stepper(Stepper&&) noexcept;
    Stepper& operator=(Stepper&&) noexcept;

    /// Pure heat flow of d (u is carried along unchanged, assumed zero).
    SimState heat_flow(const SimState& state, double dt);
    SimState liquid_crystal(const SimState& state, double dt);

    /// max | |d*|^2 - 1 | before normalization in the last step.
    double last_drift() const noexcept;

    /// record() of `state`. The transforms it takes are kept, and the next
    /// step reuses them, so it must be a step of this same state.
    DiagnosticsRecord observe(const SimState& state, double dt_last, const std::optional<DiagnosticsRecord>& prev,
                              double sphere_drift = 0.0);

private:
    friend VectorField2 elastic_stress(const DirectorField& d);
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Throws DegenerateDirector from the normalization and NonFinite on
/// non-finite samples.
SimState step_heat_flow(const SimState& state, double dt);
SimState step_liquid_crystal(const SimState& state, double dt);

/// cfl_number * min(h / (max|u| + eps), 1 / (max|grad d|^2 + eps)[, h2_safety h^2]),
/// capped by dt_max. Throws StepCollapse when the result is below dt_min
/// (or the resolution floor).
double choose_dt(const SimState& state, const StepPolicy& policy);

enum class SystemKind { liquid_crystal, heat_flow };
enum class RunStatus { completed, blowup_detected, aborted };

std::string to_string(RunStatus s);

struct RunConfig {
    SystemKind system = SystemKind::liquid_crystal;
    StepPolicy policy;
    double t_end = 1.0;
    double record_interval = 0.01;
    /// Blowup when max|grad d| reaches this multiple of its initial value.
    double growth_factor = 1e3;
    /// Blowup when the pre-normalization drift exceeds this; 0 disables.
    double drift_limit = 0.0;
    /// Called on every emitted record with the state it describes.
    std::function<void(const SimState&, const DiagnosticsRecord&)> on_record;
};

struct RunResult {
    RunStatus status = RunStatus::completed;
    std::string reason;
    Trajectory records;
    int steps = 0;
    double max_drift = 0.0;
    std::vector<double> dts;
    std::optional<SimState> final_state;
};

/// Advances `initial` to t_end. Records are emitted at multiples of
/// record_interval (the step is shortened to land on them) and at
/// termination. `history`, when given, holds the records of an earlier run
/// whose last entry describes `initial`; integrals continue from it.
RunResult run(const SimState& initial, const RunConfig& config, const Trajectory& history = {});

}  // namespace lcflow
