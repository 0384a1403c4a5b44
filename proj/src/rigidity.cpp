#include "lcflow/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lcflow/norms.hpp"
#include "lcflow/scenarios.hpp"
#include "lcflow/spectral.hpp"

namespace lcflow {

namespace {

constexpr double degenerate_lap_sq = 1e-24;
constexpr double cap_slack = 1e-12;
constexpr int repair_rounds = 60;

struct Derivatives {
    std::array<HalfSpectrum, 3> spectra;
    std::array<std::array<ScalarField, 3>, 2> grad;
    ScalarField G;
    RatioTerms terms;
};

Derivatives derivatives(const Vector3Field& d)
{
    const Grid2D& grid = d.grid();
    const auto F = Fourier::of(grid);
    const int rows = F->n(), cols = F->half_cols();
    Derivatives out{{},
                    {{{ScalarField(grid), ScalarField(grid), ScalarField(grid)},
                      {ScalarField(grid), ScalarField(grid), ScalarField(grid)}}},
                    ScalarField(grid),
                    {0.0, 0.0, 0.0}};
    HalfSpectrum work = F->make_spectrum();
    double lap = 0.0;
    for (int c = 0; c < 3; ++c) {
        out.spectra[c] = F->forward(d[c]);
        const HalfSpectrum& dc = out.spectra[c];
        for (std::size_t s = 0; s < dc.size(); ++s) lap += F->weight(s) * F->xi_sq(s) * F->xi_sq(s) * std::norm(dc[s]);
        for (int dir = 0; dir < 2; ++dir) {
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < cols; ++j) {
                    const std::size_t s = static_cast<std::size_t>(i) * cols + j;
                    work[s] = times_i(dir == 0 ? F->dxi1(i) : F->dxi2(j), dc[s]);
                }
            F->inverse_destroying(work.data(), out.grad[dir][c].data());
        }
    }
    double a = 0.0, p = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double g = 0.0;
        for (int dir = 0; dir < 2; ++dir)
            for (int c = 0; c < 3; ++c) g += out.grad[dir][c][k] * out.grad[dir][c][k];
        out.G[k] = g;
        a += g * g;
        p += g;
    }
    const double L = grid.length();
    out.terms = {grid.cell_area() * a, L * L * lap, grid.cell_area() * p};
    return out;
}

double penalty_excess(double P, double C0) noexcept { return std::max(0.0, P / (C0 * C0) - 1.0); }

void tangent_project(Vector3Field& g, const DirectorField& d)
{
    for (std::size_t k = 0; k < d.grid().size(); ++k) {
        const double dot = g[0][k] * d[0][k] + g[1][k] * d[1][k] + g[2][k] * d[2][k];
        for (int c = 0; c < 3; ++c) g[c][k] -= dot * d[c][k];
    }
}

void precondition(Vector3Field& g, int mode)
{
    const auto F = Fourier::of(g.grid());
    const double ref = g.grid().frequency(mode);
    const double ref4 = ref * ref * ref * ref;
    for (int c = 0; c < 3; ++c) {
        HalfSpectrum s = F->forward(g[c]);
        for (std::size_t k = 0; k < s.size(); ++k) {
            const double x2 = F->xi_sq(k);
            s[k] /= 1.0 + x2 * x2 / ref4;
        }
        F->inverse_destroying(s.data(), g[c].data());
    }
}

/// At samples on the cap (d3 = epsilon0), drops the part of g that would
/// lower d3 further; the tangent direction raising d3 is e3 - d3 d.
void remove_active(Vector3Field& g, const DirectorField& d, double epsilon0)
{
    for (std::size_t k = 0; k < d.grid().size(); ++k) {
        if (d[2][k] > epsilon0 + 1e-12) continue;
        const double t0 = -d[2][k] * d[0][k], t1 = -d[2][k] * d[1][k], t2 = 1.0 - d[2][k] * d[2][k];
        const double tt = t0 * t0 + t1 * t1 + t2 * t2;
        const double gt = g[0][k] * t0 + g[1][k] * t1 + g[2][k] * t2;
        if (gt >= 0.0 || tt == 0.0) continue;
        g[0][k] -= gt / tt * t0;
        g[1][k] -= gt / tt * t1;
        g[2][k] -= gt / tt * t2;
    }
}

double max_magnitude(const Vector3Field& g)
{
    double m = 0.0;
    for (std::size_t k = 0; k < g.grid().size(); ++k)
        m = std::max(m, g[0][k] * g[0][k] + g[1][k] * g[1][k] + g[2][k] * g[2][k]);
    return std::sqrt(m);
}

bool nondegenerate(const RatioTerms& t) noexcept { return t.lap_l2_sq > degenerate_lap_sq; }

struct StartOutcome {
    StartTrace trace;
    std::optional<DirectorField> best;
    double best_ratio = -1.0;
    double max_feasible_iterate = 0.0;
};

StartOutcome ascend(const DirectorField& start, const RigidityProblem& pb, int index, bool warm)
{
    const OptimizerSettings& opt = pb.optimizer;
    StartOutcome out{{index, warm, 0.0, 0.0, 0, false}, std::nullopt, -1.0, 0.0};

    DirectorField d = start;
    RatioTerms terms = ratio_terms(d);
    out.trace.initial_ratio = nondegenerate(terms) ? terms.ratio() : 0.0;
    const auto consider = [&](const DirectorField& f, const RatioTerms& t) {
        if (!is_feasible(f, t, pb.epsilon0, pb.C0)) return;
        const double r = t.ratio();
        out.max_feasible_iterate = std::max(out.max_feasible_iterate, r);
        if (r > out.best_ratio) {
            out.best_ratio = r;
            out.best.emplace(f);
        }
    };
    consider(d, terms);
    if (!nondegenerate(terms)) return out;

    double J = objective_value(terms, pb.C0, opt.penalty);
    double step = opt.step;
    for (int it = 0; it < opt.max_iterations && step >= opt.min_step; ++it) {
        Vector3Field g = objective_gradient(d.raw(), pb.C0, opt.penalty);
        tangent_project(g, d);
        precondition(g, opt.preconditioner_mode);
        tangent_project(g, d);
        remove_active(g, d, pb.epsilon0);
        const double m = max_magnitude(g);
        if (!(m > 0.0)) break;
        bool accepted = false;
        while (step >= opt.min_step) {
            Vector3Field trial(d.grid());
            for (int c = 0; c < 3; ++c)
                for (std::size_t k = 0; k < d.grid().size(); ++k) trial[c][k] = d[c][k] + step / m * g[c][k];
            DirectorField cand = cap_project(normalize(trial), pb.epsilon0);
            const RatioTerms ct = ratio_terms(cand);
            const double Jc = nondegenerate(ct) ? objective_value(ct, pb.C0, opt.penalty) : -1.0;
            if (Jc > J) {
                d = std::move(cand);
                terms = ct;
                J = Jc;
                step *= 1.2;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        ++out.trace.iterations;
        consider(d, terms);
    }
    if (!is_feasible(d, terms, pb.epsilon0, pb.C0)) {
        if (auto fixed = repair(d, pb.epsilon0, pb.C0)) {
            const RatioTerms t = ratio_terms(*fixed);
            consider(*fixed, t);
        }
    }
    out.trace.feasible = out.best.has_value();
    out.trace.final_ratio = out.best ? out.best_ratio : 0.0;
    return out;
}

std::optional<DirectorField> random_start(const RigidityProblem& pb, std::uint64_t seed, int roughness,
                                          double amplitude)
{
    const HemisphereData data = hemisphere_random_data(pb.epsilon0, roughness, amplitude, seed, pb.grid);
    return repair(data.d, pb.epsilon0, pb.C0);
}

}  // namespace

RigidityProblem::RigidityProblem(double epsilon0_, double C0_, const Grid2D& grid_, OptimizerSettings optimizer_)
    : epsilon0(epsilon0_), C0(C0_), grid(grid_), optimizer(optimizer_)
{
    if (!(epsilon0 > 0.0 && epsilon0 < 1.0)) throw InvalidArgument("RigidityProblem: epsilon0 must lie in (0,1)");
    if (!(C0 > 0.0)) throw InvalidArgument("RigidityProblem: C0 must be positive");
    if (optimizer.starts < 0 || optimizer.max_iterations < 0)
        throw InvalidArgument("RigidityProblem: starts and max_iterations must be nonnegative");
    if (!(optimizer.step > 0.0)) throw InvalidArgument("RigidityProblem: step must be positive");
}

RatioTerms ratio_terms(const Vector3Field& d) { return derivatives(d).terms; }

RatioTerms ratio_terms(const DirectorField& d) { return ratio_terms(d.raw()); }

double objective_value(const RatioTerms& t, double C0, double penalty) noexcept
{
    const double e = penalty_excess(t.grad_l2_sq, C0);
    return t.ratio() - penalty * e * e;
}

Vector3Field objective_gradient(const Vector3Field& d, double C0, double penalty)
{
    const Grid2D& grid = d.grid();
    const auto F = Fourier::of(grid);
    const int rows = F->n(), cols = F->half_cols();
    const Derivatives D = derivatives(d);
    const RatioTerms& t = D.terms;
    if (!nondegenerate(t)) throw DegenerateInput("objective_gradient: ||Lap d||_2 vanishes");
    const double w = grid.cell_area();
    const double R = t.ratio();
    const double pen = 2.0 * penalty * penalty_excess(t.grad_l2_sq, C0) / (C0 * C0);

    Vector3Field out(grid);
    ScalarField prod(grid);
    std::array<HalfSpectrum, 2> flux{F->make_spectrum(), F->make_spectrum()};
    HalfSpectrum total = F->make_spectrum();
    for (int c = 0; c < 3; ++c) {
        for (int dir = 0; dir < 2; ++dir) {
            for (std::size_t k = 0; k < grid.size(); ++k) prod[k] = D.G[k] * D.grad[dir][c][k];
            F->forward(prod.data(), flux[dir].data());
        }
        const HalfSpectrum& dc = D.spectra[c];
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                const std::size_t s = static_cast<std::size_t>(i) * cols + j;
                const double k1 = F->dxi1(i), k2 = F->dxi2(j);
                // dA = -4 w sum_i D_i(G D_i d), dB = 2 w Lap^2 d, dP = -2 w sum_i D_i^2 d.
                const Complex dA = -4.0 * w * (times_i(k1, flux[0][s]) + times_i(k2, flux[1][s]));
                const Complex dB = 2.0 * w * F->xi_sq(s) * F->xi_sq(s) * dc[s];
                const Complex dP = 2.0 * w * (k1 * k1 + k2 * k2) * dc[s];
                total[s] = (dA - R * dB) / t.lap_l2_sq - pen * dP;
            }
        F->inverse_destroying(total.data(), out[c].data());
    }
    return out;
}

DirectorField cap_project(const DirectorField& d, double epsilon0)
{
    Vector3Field v = d.raw();
    const double horizontal = std::sqrt(1.0 - epsilon0 * epsilon0);
    for (std::size_t k = 0; k < d.grid().size(); ++k) {
        if (v[2][k] >= epsilon0) continue;
        const double hn = std::hypot(v[0][k], v[1][k]);
        v[2][k] = epsilon0;
        if (hn > 0.0) {
            v[0][k] *= horizontal / hn;
            v[1][k] *= horizontal / hn;
        } else {
            v[0][k] = horizontal;
        }
    }
    return DirectorField(v);
}

bool is_feasible(const DirectorField& d, const RatioTerms& t, double epsilon0, double C0)
{
    if (!nondegenerate(t) || !(t.grad_l2_sq <= C0 * C0)) return false;
    for (std::size_t k = 0; k < d.grid().size(); ++k)
        if (d[2][k] < epsilon0 - cap_slack) return false;
    return true;
}

std::optional<DirectorField> repair(const DirectorField& d, double epsilon0, double C0)
{
    DirectorField cur = cap_project(d, epsilon0);
    RatioTerms t = ratio_terms(cur);
    if (t.grad_l2_sq <= C0 * C0) return nondegenerate(t) ? std::optional<DirectorField>(cur) : std::nullopt;
    const Vector3Field raw = cur.raw();
    double tau = d.grid().cell_area();
    for (int round = 0; round < repair_rounds; ++round, tau *= 2.0) {
        Vector3Field smooth(heat_semigroup(raw[0], tau), heat_semigroup(raw[1], tau), heat_semigroup(raw[2], tau));
        cur = cap_project(normalize(smooth), epsilon0);
        t = ratio_terms(cur);
        if (t.grad_l2_sq <= C0 * C0) return nondegenerate(t) ? std::optional<DirectorField>(cur) : std::nullopt;
    }
    return std::nullopt;
}

RigidityResult estimate_delta0(const RigidityProblem& pb, const std::vector<DirectorField>& warm)
{
    const OptimizerSettings& opt = pb.optimizer;
    RigidityResult result;
    result.best_ratio = -1.0;
    const auto absorb = [&](StartOutcome o) {
        result.iterations += o.trace.iterations;
        result.max_feasible_iterate_ratio = std::max(result.max_feasible_iterate_ratio, o.max_feasible_iterate);
        if (o.best && o.best_ratio > result.best_ratio) {
            result.best_ratio = o.best_ratio;
            result.best_field = std::move(o.best);
        }
        result.history.push_back(o.trace);
    };
    const CounterRng rng(opt.seed);
    for (int k = 0; k < opt.starts; ++k) {
        const int roughness = 1 + k % std::max(1, opt.max_start_roughness);
        const double amplitude = opt.start_amplitude * (0.25 + 0.75 * rng.uniform(11, static_cast<std::uint64_t>(k)));
        const auto start = random_start(pb, opt.seed * 7919 + static_cast<std::uint64_t>(k), roughness, amplitude);
        if (!start) {
            result.history.push_back({k, false, 0.0, 0.0, 0, false});
            continue;
        }
        absorb(ascend(*start, pb, k, false));
    }
    for (std::size_t w = 0; w < warm.size(); ++w) {
        const int index = opt.starts + static_cast<int>(w);
        if (!(warm[w].grid() == pb.grid)) throw InvalidArgument("estimate_delta0: warm start on a different grid");
        const auto start = repair(warm[w], pb.epsilon0, pb.C0);
        if (!start) {
            result.history.push_back({index, true, 0.0, 0.0, 0, false});
            continue;
        }
        absorb(ascend(*start, pb, index, true));
    }
    if (!result.best_field) throw Infeasible("estimate_delta0: no start produced a nondegenerate feasible field");
    result.delta0_estimate = 1.0 - result.best_ratio;
    return result;
}

RandomSearchReport random_search(const RigidityProblem& pb, int samples, std::uint64_t seed)
{
    RandomSearchReport out{0.0, 0, 0};
    const CounterRng rng(seed);
    const int max_rough = std::min(6, pb.grid.n() / 2 - 1);
    for (int k = 0; k < samples; ++k) {
        const auto kk = static_cast<std::uint64_t>(k);
        const int roughness = 1 + static_cast<int>(rng.uniform(1, kk) * max_rough);
        const double amplitude = 0.05 + 2.95 * rng.uniform(2, kk);
        const auto field = random_start(pb, seed * 1000003 + kk, std::min(roughness, max_rough), amplitude);
        if (!field) {
            ++out.rejected;
            continue;
        }
        const RatioTerms t = ratio_terms(*field);
        if (!is_feasible(*field, t, pb.epsilon0, pb.C0)) {
            ++out.rejected;
            continue;
        }
        out.max_ratio = std::max(out.max_ratio, t.ratio());
        ++out.feasible_samples;
    }
    return out;
}

std::vector<SweepRow> rigidity_sweep(const std::vector<double>& epsilon0s, const std::vector<double>& C0s,
                                     const Grid2D& grid, const OptimizerSettings& optimizer)
{
    const std::size_t ne = epsilon0s.size(), nc = C0s.size();
    std::vector<std::size_t> eo(ne), co(nc);
    for (std::size_t i = 0; i < ne; ++i) eo[i] = i;
    for (std::size_t i = 0; i < nc; ++i) co[i] = i;
    std::sort(eo.begin(), eo.end(), [&](auto a, auto b) { return epsilon0s[a] > epsilon0s[b]; });
    std::sort(co.begin(), co.end(), [&](auto a, auto b) { return C0s[a] < C0s[b]; });

    std::vector<std::optional<DirectorField>> best(ne * nc);
    std::vector<SweepRow> rows(ne * nc);
    for (std::size_t a = 0; a < ne; ++a)
        for (std::size_t b = 0; b < nc; ++b) {
            const std::size_t ie = eo[a], ic = co[b];
            std::vector<DirectorField> warm;
            if (a > 0 && best[eo[a - 1] * nc + ic]) warm.push_back(*best[eo[a - 1] * nc + ic]);
            if (b > 0 && best[ie * nc + co[b - 1]]) warm.push_back(*best[ie * nc + co[b - 1]]);
            const RigidityProblem pb(epsilon0s[ie], C0s[ic], grid, optimizer);
            RigidityResult r = estimate_delta0(pb, warm);
            rows[ie * nc + ic] = {pb.epsilon0,    pb.C0,
                                  grid.n(),       grid.length(),
                                  r.best_ratio,   r.delta0_estimate,
                                  static_cast<int>(r.history.size()), r.iterations,
                                  r.max_feasible_iterate_ratio};
            best[ie * nc + ic] = std::move(r.best_field);
        }
    return rows;
}

ConcentrationPoint concentration_center(const ScalarField& f, double N)
{
    if (!(N >= 2.0)) throw InvalidArgument("concentration_center: N must be at least 2");
    const ScalarField band = lp_band(f, 1.0 / N, N);
    const int n = f.grid().n();
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < band.size(); ++k)
        if (std::abs(band[k]) > best) {
            best = std::abs(band[k]);
            arg = k;
        }
    const int i = static_cast<int>(arg) / n, j = static_cast<int>(arg) % n;
    const double h = f.grid().spacing();
    return {i, j, {i * h, j * h}, best};
}

BandSplitReport band_split_bounds(const DirectorField& d, double N)
{
    if (!(N >= 2.0)) throw InvalidArgument("band_split_bounds: N must be at least 2");
    const Vector3Field raw = d.raw();
    const Derivatives D = derivatives(raw);
    const ScalarField& f = D.G;
    BandSplitReport r{};
    r.high = lp_norm(lp_high(f, N), 2.0);
    r.low = lp_norm(lp_low(f, 1.0 / N), 2.0);
    r.mid = lp_norm(lp_band(f, 1.0 / N, N), 2.0);
    r.total = lp_norm(f, 2.0);
    r.l1 = lp_norm(f, 1.0);
    r.low_bound = discrete_bernstein_constant(d.grid(), 1.0 / N) / N * r.l1;
    r.low_holds = r.low <= r.low_bound * (1.0 + 1e-6);
    r.mid_holds = r.mid >= r.total - r.high - r.low;
    const double scale = std::sqrt(D.terms.lap_l2_sq * D.terms.grad_l2_sq) / std::sqrt(N);
    r.high_ratio = scale > 0.0 ? r.high / scale : 0.0;
    return r;
}

}  // namespace lcflow
