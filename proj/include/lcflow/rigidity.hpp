#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "lcflow/fields.hpp"

namespace lcflow {

struct OptimizerSettings {
    double step = 0.05;  ///< initial max-norm of an update
    int max_iterations = 150;
    int starts = 6;
    std::uint64_t seed = 1;
    double penalty = 10.0;         ///< weight of max(0, ||grad d||^2 / C0^2 - 1)^2
    double start_amplitude = 2.0;  ///< 0 gives constant (degenerate) starts
    int max_start_roughness = 4;
    /// Gradient preconditioner 1 / (1 + (|xi| / xi_ref)^4), xi_ref = 2 pi mode / L.
    int preconditioner_mode = 4;
    double min_step = 1e-7;
};

struct RigidityProblem {
    double epsilon0;
    double C0;
    Grid2D grid;
    OptimizerSettings optimizer;

    /// Throws InvalidArgument unless epsilon0 in (0,1) and C0 > 0.
    RigidityProblem(double epsilon0, double C0, const Grid2D& grid, OptimizerSettings optimizer = {});
};

struct StartTrace {
    int start;
    bool warm;  ///< seeded from a supplied field rather than random data
    double initial_ratio;
    double final_ratio;
    int iterations;
    bool feasible;
};

struct RigidityResult {
    double best_ratio = 0.0;
    double delta0_estimate = 1.0;
    std::optional<DirectorField> best_field;
    std::vector<StartTrace> history;
    /// Largest ratio over every feasible iterate of every start.
    double max_feasible_iterate_ratio = 0.0;
    int iterations = 0;
};

/// Values entering the ratio and the penalty for one field.
struct RatioTerms {
    double grad_l4_4;  ///< A = ||grad d||_4^4
    double lap_l2_sq;  ///< B = ||Lap d||_2^2
    double grad_l2_sq; ///< P = ||grad d||_2^2
    double ratio() const noexcept { return grad_l4_4 / lap_l2_sq; }
};

/// Evaluated on raw samples so that off-sphere perturbations can be probed.
RatioTerms ratio_terms(const Vector3Field& d);
RatioTerms ratio_terms(const DirectorField& d);

/// Ambient gradient of J = A/B - penalty max(0, P/C0^2 - 1)^2 with respect
/// to the samples of d (no tangent projection, no preconditioning).
Vector3Field objective_gradient(const Vector3Field& d, double C0, double penalty);
double objective_value(const RatioTerms& t, double C0, double penalty) noexcept;

/// Raises d3 to epsilon0 where it is lower, rescaling (d1, d2) to stay on the sphere.
DirectorField cap_project(const DirectorField& d, double epsilon0);

/// Smooths by the heat semigroup with doubling times, renormalizing and
/// capping, until ||grad d||_2 <= C0. Returns nullopt if that fails.
std::optional<DirectorField> repair(const DirectorField& d, double epsilon0, double C0);

/// Feasible: d3 >= epsilon0, ||grad d||_2 <= C0 and ||Lap d||_2 > 1e-12.
bool is_feasible(const DirectorField& d, const RatioTerms& t, double epsilon0, double C0);

/// Multistart projected ascent of the coercivity ratio. Fields in `warm`
/// become extra starts after capping and repair. Throws Infeasible when no
/// start yields a nondegenerate feasible field.
RigidityResult estimate_delta0(const RigidityProblem& problem, const std::vector<DirectorField>& warm = {});

struct RandomSearchReport {
    double max_ratio;
    int feasible_samples;
    int rejected;
};

/// Ratio of seeded random feasible fields (random roughness and amplitude,
/// repaired to the energy bound).
RandomSearchReport random_search(const RigidityProblem& problem, int samples, std::uint64_t seed);

struct SweepRow {
    double epsilon0;
    double C0;
    int n;
    double L;
    double best_ratio;
    double delta0_estimate;
    int starts;
    int iterations;
    double max_feasible_iterate_ratio;
};

/// All (epsilon0, C0) cells. Cells are visited from the tightest constraint
/// outward, and each cell also starts from the best fields of the cells
/// whose feasible sets it contains (larger epsilon0, smaller C0).
std::vector<SweepRow> rigidity_sweep(const std::vector<double>& epsilon0s, const std::vector<double>& C0s,
                                     const Grid2D& grid, const OptimizerSettings& optimizer);

struct ConcentrationPoint {
    int i;
    int j;
    std::array<double, 2> x;
    double value;  ///< |P_{1/N<.<N} f| at the point
};

/// Argmax of |lp_band(f, 1/N, N)|, ties to the smallest row-major index.
/// Throws InvalidArgument for N < 2.
ConcentrationPoint concentration_center(const ScalarField& f, double N);

struct BandSplitReport {
    double high;        ///< ||P_{>N} |grad d|^2||_2
    double low;         ///< ||P_{<1/N} |grad d|^2||_2
    double mid;         ///< ||P_{1/N<.<N} |grad d|^2||_2
    double total;       ///< || |grad d|^2 ||_2
    double l1;          ///< || |grad d|^2 ||_1
    double low_bound;   ///< discrete Bernstein constant * N^{-1} * l1
    bool low_holds;     ///< low <= low_bound (1 + 1e-6)
    bool mid_holds;     ///< mid >= total - high - low
    double high_ratio;  ///< high / (N^{-1/2} ||Lap d||_2 ||grad d||_2), 0 for constant maps
};

BandSplitReport band_split_bounds(const DirectorField& d, double N);

}  // namespace lcflow
