#include "lcflow/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "lcflow/director.hpp"
#include "lcflow/spectral.hpp"

namespace lcflow {

SimState::SimState(double t_, VectorField2 u_, DirectorField d_) : t(t_), u(std::move(u_)), d(std::move(d_)) {}

double divergence_defect(const VectorField2& u)
{
    const auto fourier = Fourier::of(u.grid());
    const HalfSpectrum a = fourier->forward(u.u1());
    const HalfSpectrum b = fourier->forward(u.u2());
    const int rows = fourier->n(), cols = fourier->half_cols();
    double sum = 0.0;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const std::size_t s = static_cast<std::size_t>(i) * cols + j;
            sum += fourier->weight(s) * std::norm(fourier->dxi1(i) * a[s] + fourier->dxi2(j) * b[s]);
        }
    return u.grid().length() * std::sqrt(sum);
}

void SimState::validate() const
{
    if (!(u.grid() == d.grid())) throw InvariantViolation("SimState: u and d live on different grids");
    const double un = std::sqrt(u.grid().cell_area() *
                                [&] {
                                    double s = 0.0;
                                    for (std::size_t k = 0; k < u.grid().size(); ++k)
                                        s += u.u1()[k] * u.u1()[k] + u.u2()[k] * u.u2()[k];
                                    return s;
                                }());
    if (divergence_defect(u) > 1e-10 * std::max(un, 1.0))
        throw InvariantViolation("SimState: velocity is not divergence-free");
    if (!(d.max_unit_defect() <= tol_evolve)) throw InvariantViolation("SimState: director is off the sphere");
}

DiagnosticsRecord record(const SimState& state, double dt_last, const std::optional<DiagnosticsRecord>& prev,
                         double sphere_drift)
{
    const auto fourier = Fourier::of(state.d.grid());
    std::array<HalfSpectrum, 5> c;
    for (int k = 0; k < 3; ++k) c[k] = fourier->forward(state.d[k]);
    for (int k = 0; k < 2; ++k) c[3 + k] = fourier->forward(state.u[k]);
    const StateSpectra spectra{{c[0].data(), c[1].data(), c[2].data()}, {c[3].data(), c[4].data()}};
    return record(state, spectra, dt_last, prev, sphere_drift);
}

DiagnosticsRecord record(const SimState& state, const StateSpectra& spectra, double dt_last,
                         const std::optional<DiagnosticsRecord>& prev, double sphere_drift)
{
    const Grid2D& grid = state.d.grid();
    const DirectorGeometry geo(state.d, spectra.d);
    const auto fourier = Fourier::of(grid);
    const double w = grid.cell_area();

    double grad_u = 0.0;
    for (int a = 0; a < 2; ++a) {
        const Complex* c = spectra.u[a];
        for (std::size_t s = 0; s < fourier->half_size(); ++s)
            grad_u += fourier->weight(s) * fourier->xi_sq(s) * std::norm(c[s]);
    }
    const double L = grid.length();

    double u2 = 0.0, u4 = 0.0, de3 = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double a = state.u.u1()[k], b = state.u.u2()[k];
        const double m = a * a + b * b;
        u2 += m;
        u4 += m * m;
        const double z = state.d[2][k] - 1.0;
        de3 += state.d[0][k] * state.d[0][k] + state.d[1][k] * state.d[1][k] + z * z;
    }

    DiagnosticsRecord r;
    r.t = state.t;
    r.u_L2_sq = w * u2;
    r.E = 0.5 * (r.u_L2_sq + geo.grad_l2_sq);
    r.grad_u_sq = L * L * grad_u;
    r.tension_sq = geo.tension_sq;
    r.grad_d_L4_4 = geo.grad_l4_4;
    r.lap_d_sq = geo.lap_l2_sq;
    r.inf_d3 = geo.inf_d3;
    r.d_minus_e3_sq = w * de3;
    r.u_L4_4 = w * u4;
    r.max_grad_d = geo.max_grad;
    r.sphere_drift = sphere_drift;

    double e0 = r.E;
    if (prev) {
        const DiagnosticsRecord& p = *prev;
        r.int_u_L4_4 = p.int_u_L4_4 + dt_last * p.u_L4_4;
        r.int_grad_d_L4_4 = p.int_grad_d_L4_4 + dt_last * p.grad_d_L4_4;
        r.int_lap_d_sq = p.int_lap_d_sq + dt_last * p.lap_d_sq;
        r.int_grad_d_sq = p.int_grad_d_sq + dt_last * p.grad_d_sq();
        r.int_grad_u_sq = p.int_grad_u_sq + dt_last * p.grad_u_sq;
        r.int_D = p.int_D + dt_last * p.dissipation();
        e0 = p.E + p.int_D - p.energy_residual;
    }
    r.energy_residual = r.E + r.int_D - e0;
    return r;
}

MaxPrincipleReport max_principle_check(const Trajectory& traj, double tolerance)
{
    if (traj.empty()) return {0.0, 0.0, false, false};
    const double initial = traj.front().inf_d3;
    double lowest = initial;
    for (const auto& r : traj) lowest = std::min(lowest, r.inf_d3);
    const bool applicable = initial > 0.0;
    return {lowest, initial, applicable, applicable && lowest >= initial - tolerance};
}

GronwallReport gronwall_check(const Trajectory& traj)
{
    GronwallReport out{0.0, 0.0, 0.0};
    if (traj.empty()) return out;
    const double d0 = traj.front().d_minus_e3_sq;
    for (const auto& r : traj) {
        const double lhs = r.d_minus_e3_sq + r.int_grad_d_sq;
        const double rhs = d0 * std::exp(r.int_lap_d_sq);
        out.lhs_max = std::max(out.lhs_max, lhs);
        double ratio = 0.0;
        if (lhs > 0.0) ratio = rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
        if (ratio >= out.ratio_max) {
            out.ratio_max = ratio;
            out.bound = rhs;
        }
    }
    return out;
}

namespace {

double relative_growth(double early, double late) noexcept
{
    if (late <= 0.0) return 0.0;
    return (late - early) / late;
}

}  // namespace

BlowupReport blowup_monitor(const Trajectory& traj, double growth_threshold)
{
    BlowupReport out{};
    if (traj.empty()) {
        out.global_like = true;
        return out;
    }
    const DiagnosticsRecord& first = traj.front();
    const DiagnosticsRecord& last = traj.back();
    const double cut = first.t + 0.8 * (last.t - first.t);
    const auto it = std::find_if(traj.begin(), traj.end(), [&](const DiagnosticsRecord& r) { return r.t >= cut; });
    const DiagnosticsRecord& early = *it;

    out.int_grad_d_L4_4 = last.int_grad_d_L4_4;
    out.int_u_L4_4 = last.int_u_L4_4;
    out.int_lap_d_sq = last.int_lap_d_sq;
    out.int_grad_d_sq = last.int_grad_d_sq;
    out.growth_grad_d_L4_4 = relative_growth(early.int_grad_d_L4_4, last.int_grad_d_L4_4);
    out.growth_u_L4_4 = relative_growth(early.int_u_L4_4, last.int_u_L4_4);
    out.growth_lap_d_sq = relative_growth(early.int_lap_d_sq, last.int_lap_d_sq);
    out.growth_grad_d_sq = relative_growth(early.int_grad_d_sq, last.int_grad_d_sq);
    out.gradient_growth = first.max_grad_d > 0.0 ? last.max_grad_d / first.max_grad_d : 1.0;
    out.global_like = out.growth_grad_d_L4_4 < plateau_tolerance && out.growth_u_L4_4 < plateau_tolerance &&
                      out.growth_lap_d_sq < plateau_tolerance && out.growth_grad_d_sq < plateau_tolerance &&
                      out.gradient_growth < growth_threshold;
    return out;
}

CoercivityTrack coercivity_tracker(const Trajectory& traj)
{
    CoercivityTrack out{std::numeric_limits<double>::infinity(), 0};
    for (const auto& r : traj) {
        if (!(std::sqrt(r.lap_d_sq) > 1e-12)) continue;
        out.min_gap = std::min(out.min_gap, 1.0 - r.grad_d_L4_4 / r.lap_d_sq);
        ++out.used;
    }
    return out;
}

L4ChainReport l4_chain_check(const Trajectory& traj, double gn_constant)
{
    if (traj.empty()) return {0.0, 0.0, true};
    double sup_u = 0.0;
    for (const auto& r : traj) sup_u = std::max(sup_u, r.u_L2_sq);
    const double lhs = traj.back().int_u_L4_4;
    const double c2 = gn_constant * gn_constant;
    const double rhs = c2 * c2 * sup_u * traj.back().int_grad_u_sq;
    return {lhs, rhs, lhs <= rhs};
}

}  // namespace lcflow
