#include "lcflow/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "lcflow/director.hpp"
#include "lcflow/spectral.hpp"

namespace lcflow {

namespace {

constexpr double eps_dt = 1e-12;

using Buffer = AlignedVector<double>;

double max_speed(const VectorField2& u)
{
    double m = 0.0;
    for (std::size_t k = 0; k < u.grid().size(); ++k)
        m = std::max(m, u.u1()[k] * u.u1()[k] + u.u2()[k] * u.u2()[k]);
    return std::sqrt(m);
}

double dt_from(double max_u, double max_grad_sq, const Grid2D& grid, const StepPolicy& p)
{
    if (p.mode == StepMode::fixed) return p.dt_fixed;
    const double h = grid.spacing();
    double bound = std::min(h / (max_u + eps_dt), 1.0 / (max_grad_sq + eps_dt));
    if (p.h2_safety > 0.0) bound = std::min(bound, p.h2_safety * h * h);
    const double ceiling = p.dt_max > 0.0 ? p.dt_max : h;
    const double dt = std::min(p.cfl_number * bound, ceiling);
    double floor = p.dt_min;
    if (p.resolution_limit > 0.0) floor = std::max(floor, p.cfl_number * h * h / (p.resolution_limit * p.resolution_limit));
    if (dt < floor) throw StepCollapse("choose_dt: required step below dt_min", dt);
    return dt;
}

}  // namespace

void StepPolicy::validate() const
{
    if (mode == StepMode::fixed && !(dt_fixed > 0.0)) throw InvalidArgument("StepPolicy: dt_fixed must be positive");
    if (!(cfl_number > 0.0 && cfl_number < 1.0)) throw InvalidArgument("StepPolicy: cfl_number must lie in (0,1)");
    if (!(dt_min > 0.0)) throw InvalidArgument("StepPolicy: dt_min must be positive");
    if (!(dt_max >= 0.0)) throw InvalidArgument("StepPolicy: dt_max must be nonnegative");
    if (!(h2_safety >= 0.0)) throw InvalidArgument("StepPolicy: h2_safety must be nonnegative");
    if (!(resolution_limit >= 0.0)) throw InvalidArgument("StepPolicy: resolution_limit must be nonnegative");
}

struct Stepper::Impl {
    Grid2D grid;
    std::shared_ptr<const Fourier> F;
    int rows, cols;
    std::size_t points, half;

    std::array<HalfSpectrum, 3> dh, nd;
    std::array<HalfSpectrum, 2> uh, nu;
    std::array<HalfSpectrum, 3> stress;  // S11, S12, S22
    HalfSpectrum work;
    std::array<Buffer, 3> d_low;
    std::array<std::array<Buffer, 3>, 2> grad_d;  // [direction][component]
    std::array<Buffer, 2> u_low;
    std::array<std::array<Buffer, 2>, 2> grad_u;  // [direction][component]
    Buffer G, prod;
    std::vector<double> decay;
    double decay_dt = -1.0;
    double drift = 0.0;
    bool fresh = false;  // dh and uh hold the transforms of the next state to step

    explicit Impl(const Grid2D& g)
        : grid(g), F(Fourier::of(g)), rows(g.n()), cols(F->half_cols()), points(g.size()), half(F->half_size())
    {
        for (auto& v : dh) v.resize(half);
        for (auto& v : nd) v.resize(half);
        for (auto& v : uh) v.resize(half);
        for (auto& v : nu) v.resize(half);
        for (auto& v : stress) v.resize(half);
        work.resize(half);
        for (auto& v : d_low) v.resize(points);
        for (auto& row : grad_d)
            for (auto& v : row) v.resize(points);
        for (auto& v : u_low) v.resize(points);
        for (auto& row : grad_u)
            for (auto& v : row) v.resize(points);
        G.resize(points);
        prod.resize(points);
        decay.resize(half);
    }

    /// Dealiased (optionally differentiated) inverse of c into out.
    void to_physical_low(const HalfSpectrum& c, double* out, int direction)
    {
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                const std::size_t s = static_cast<std::size_t>(i) * cols + j;
                Complex v = F->keeps(s) ? c[s] : Complex(0.0);
                if (direction == 0) v = times_i(F->dxi1(i), v);
                if (direction == 1) v = times_i(F->dxi2(j), v);
                work[s] = v;
            }
        F->inverse_destroying(work.data(), out);
    }

    void to_spectral_low(const double* in, HalfSpectrum& out)
    {
        F->forward(in, out.data());
        F->dealias(out.data());
    }

    void set_decay(double dt)
    {
        if (dt == decay_dt) return;
        for (std::size_t s = 0; s < half; ++s) decay[s] = std::exp(-F->xi_sq(s) * dt);
        decay_dt = dt;
    }

    void director_terms(const DirectorField& d)
    {
        for (int c = 0; c < 3; ++c) {
            if (!fresh) F->forward(d[c].data(), dh[c].data());
            to_physical_low(dh[c], d_low[c].data(), -1);
            for (int dir = 0; dir < 2; ++dir) to_physical_low(dh[c], grad_d[dir][c].data(), dir);
        }
        for (std::size_t k = 0; k < points; ++k) {
            double g = 0.0;
            for (int dir = 0; dir < 2; ++dir)
                for (int c = 0; c < 3; ++c) g += grad_d[dir][c][k] * grad_d[dir][c][k];
            G[k] = g;
        }
        to_spectral_low(G.data(), work);
        F->inverse_destroying(work.data(), G.data());
    }

    void velocity_terms(const VectorField2& u)
    {
        for (int a = 0; a < 2; ++a) {
            if (!fresh) F->forward(u[a].data(), uh[a].data());
            to_physical_low(uh[a], u_low[a].data(), -1);
            for (int dir = 0; dir < 2; ++dir) to_physical_low(uh[a], grad_u[dir][a].data(), dir);
        }
    }

    /// Spectrum of the dealiased stress divergence, written to nu (overwrites).
    void stress_spectrum()
    {
        const std::array<std::array<int, 2>, 3> pairs{{{0, 0}, {0, 1}, {1, 1}}};
        for (int p = 0; p < 3; ++p) {
            const auto& gi = grad_d[pairs[p][0]];
            const auto& gj = grad_d[pairs[p][1]];
            for (std::size_t k = 0; k < points; ++k) prod[k] = gi[0][k] * gj[0][k] + gi[1][k] * gj[1][k] + gi[2][k] * gj[2][k];
            to_spectral_low(prod.data(), stress[p]);
        }
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                const std::size_t s = static_cast<std::size_t>(i) * cols + j;
                const double k1 = F->dxi1(i), k2 = F->dxi2(j);
                nu[0][s] = times_i(k1, stress[0][s]) + times_i(k2, stress[1][s]);
                nu[1][s] = times_i(k1, stress[1][s]) + times_i(k2, stress[2][s]);
            }
    }

    void leray(Complex* a, Complex* b) const
    {
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                const std::size_t s = static_cast<std::size_t>(i) * cols + j;
                const double k1 = F->dxi1(i), k2 = F->dxi2(j);
                const double kk = k1 * k1 + k2 * k2;
                if (kk == 0.0) continue;
                const Complex p = (k1 * a[s] + k2 * b[s]) / kk;
                a[s] -= k1 * p;
                b[s] -= k2 * p;
            }
    }

    DirectorField advance_director(const VectorField2* u_adv, double dt)
    {
        for (int c = 0; c < 3; ++c) {
            for (std::size_t k = 0; k < points; ++k) {
                double v = G[k] * d_low[c][k];
                if (u_adv) v -= u_low[0][k] * grad_d[0][c][k] + u_low[1][k] * grad_d[1][c][k];
                prod[k] = v;
            }
            to_spectral_low(prod.data(), nd[c]);
        }
        std::array<ScalarField, 3> out{ScalarField(grid), ScalarField(grid), ScalarField(grid)};
        for (int c = 0; c < 3; ++c) {
            for (std::size_t s = 0; s < half; ++s) work[s] = decay[s] * (dh[c][s] + dt * nd[c][s]);
            F->inverse_destroying(work.data(), out[c].data());
        }
        drift = 0.0;
        for (std::size_t k = 0; k < points; ++k) {
            const double n2 = out[0][k] * out[0][k] + out[1][k] * out[1][k] + out[2][k] * out[2][k];
            if (!std::isfinite(n2)) throw NonFinite("step: director became non-finite");
            const double norm = std::sqrt(n2);
            if (norm < norm_floor) throw DegenerateDirector("step: director vanished before normalization");
            drift = std::max(drift, std::abs(n2 - 1.0));
            for (int c = 0; c < 3; ++c) out[c][k] /= norm;
        }
        return DirectorField(std::move(out[0]), std::move(out[1]), std::move(out[2]));
    }

    VectorField2 advance_velocity(double dt)
    {
        stress_spectrum();
        for (int a = 0; a < 2; ++a) {
            for (std::size_t k = 0; k < points; ++k)
                prod[k] = u_low[0][k] * grad_u[0][a][k] + u_low[1][k] * grad_u[1][a][k];
            to_spectral_low(prod.data(), work);
            for (std::size_t s = 0; s < half; ++s) nu[a][s] = -(nu[a][s] + work[s]);
        }
        leray(nu[0].data(), nu[1].data());
        for (int a = 0; a < 2; ++a)
            for (std::size_t s = 0; s < half; ++s) nu[a][s] = decay[s] * (uh[a][s] + dt * nu[a][s]);
        leray(nu[0].data(), nu[1].data());
        VectorField2 out(grid);
        for (int a = 0; a < 2; ++a) {
            F->inverse_destroying(nu[a].data(), out[a].data());
            if (!out[a].all_finite()) throw NonFinite("step: velocity became non-finite");
        }
        return out;
    }
};

Stepper::Stepper(const Grid2D& grid) : impl_(std::make_unique<Impl>(grid)) {}
Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;
Stepper& Stepper::operator=(Stepper&&) noexcept = default;

double Stepper::last_drift() const noexcept { return impl_->drift; }

DiagnosticsRecord Stepper::observe(const SimState& state, double dt_last, const std::optional<DiagnosticsRecord>& prev,
                                   double sphere_drift)
{
    Impl& m = *impl_;
    for (int c = 0; c < 3; ++c) m.F->forward(state.d[c].data(), m.dh[c].data());
    for (int a = 0; a < 2; ++a) m.F->forward(state.u[a].data(), m.uh[a].data());
    m.fresh = true;
    const StateSpectra spectra{{m.dh[0].data(), m.dh[1].data(), m.dh[2].data()}, {m.uh[0].data(), m.uh[1].data()}};
    return record(state, spectra, dt_last, prev, sphere_drift);
}

SimState Stepper::heat_flow(const SimState& state, double dt)
{
    if (!(dt > 0.0)) throw InvalidArgument("step_heat_flow: dt must be positive");
    Impl& m = *impl_;
    m.set_decay(dt);
    m.director_terms(state.d);
    m.fresh = false;
    DirectorField d = m.advance_director(nullptr, dt);
    return SimState(state.t + dt, state.u, std::move(d));
}

SimState Stepper::liquid_crystal(const SimState& state, double dt)
{
    if (!(dt > 0.0)) throw InvalidArgument("step_liquid_crystal: dt must be positive");
    Impl& m = *impl_;
    m.set_decay(dt);
    m.director_terms(state.d);
    m.velocity_terms(state.u);
    m.fresh = false;
    DirectorField d = m.advance_director(&state.u, dt);
    VectorField2 u = m.advance_velocity(dt);
    return SimState(state.t + dt, std::move(u), std::move(d));
}

SimState step_heat_flow(const SimState& state, double dt) { return Stepper(state.d.grid()).heat_flow(state, dt); }

SimState step_liquid_crystal(const SimState& state, double dt)
{
    return Stepper(state.d.grid()).liquid_crystal(state, dt);
}

VectorField2 elastic_stress(const DirectorField& d)
{
    Stepper::Impl m(d.grid());
    m.director_terms(d);
    m.stress_spectrum();
    VectorField2 out(d.grid());
    for (int a = 0; a < 2; ++a) m.F->inverse_destroying(m.nu[a].data(), out[a].data());
    return out;
}

double choose_dt(const SimState& state, const StepPolicy& policy)
{
    policy.validate();
    if (policy.mode == StepMode::fixed) return policy.dt_fixed;
    const double g = DirectorGeometry(state.d).max_grad;
    return dt_from(max_speed(state.u), g * g, state.d.grid(), policy);
}

std::string to_string(RunStatus s)
{
    switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blowup_detected: return "blowup_detected";
    case RunStatus::aborted: return "aborted";
    }
    return "unknown";
}

RunResult run(const SimState& initial, const RunConfig& config, const Trajectory& history)
{
    config.policy.validate();
    if (!(config.t_end > 0.0)) throw InvalidArgument("run: t_end must be positive");
    if (!(config.record_interval > 0.0)) throw InvalidArgument("run: record_interval must be positive");
    initial.validate();

    const Grid2D& grid = initial.d.grid();
    Stepper stepper(grid);
    RunResult result;
    result.records = history;

    SimState state = initial;
    DiagnosticsRecord prev = stepper.observe(state, 0.0, std::nullopt);
    if (!history.empty()) prev = history.back();
    if (history.empty()) {
        result.records.push_back(prev);
        if (config.on_record) config.on_record(state, prev);
    }
    const double g0 = result.records.front().max_grad_d;
    const double ri = config.record_interval;
    long index = std::lround(state.t / ri);
    if (index * ri <= state.t) ++index;

    const auto finish = [&](RunStatus status, std::string reason) {
        result.status = status;
        result.reason = std::move(reason);
    };

    while (state.t < config.t_end) {
        const double target = std::min(index * ri, config.t_end);
        double dt;
        try {
            dt = dt_from(max_speed(state.u), prev.max_grad_d * prev.max_grad_d, grid, config.policy);
        } catch (const StepCollapse& e) {
            finish(RunStatus::blowup_detected, e.what());
            break;
        }
        bool lands = false;
        if (state.t + dt * 1.01 >= target) {
            dt = target - state.t;
            lands = true;
        }
        std::optional<SimState> next;
        try {
            next.emplace(config.system == SystemKind::heat_flow ? stepper.heat_flow(state, dt)
                                                                : stepper.liquid_crystal(state, dt));
        } catch (const DegenerateDirector& e) {
            finish(RunStatus::blowup_detected, e.what());
            break;
        } catch (const NonFinite& e) {
            finish(RunStatus::aborted, e.what());
            break;
        }
        if (lands) next->t = target;
        const double drift = stepper.last_drift();
        result.max_drift = std::max(result.max_drift, drift);
        prev = stepper.observe(*next, dt, prev, drift);
        state = std::move(*next);
        ++result.steps;
        result.dts.push_back(dt);

        if (lands) {
            result.records.push_back(prev);
            if (config.on_record) config.on_record(state, prev);
            if (target == index * ri) ++index;
        }
        if (g0 > 0.0 && prev.max_grad_d >= config.growth_factor * g0) {
            finish(RunStatus::blowup_detected, "gradient growth reached the configured factor");
            break;
        }
        if (config.drift_limit > 0.0 && drift > config.drift_limit) {
            finish(RunStatus::blowup_detected, "pre-normalization drift exceeded the limit");
            break;
        }
    }
    if (result.records.back().t != prev.t) {
        result.records.push_back(prev);
        if (config.on_record) config.on_record(state, prev);
    }
    result.final_state.emplace(std::move(state));
    return result;
}

}  // namespace lcflow
