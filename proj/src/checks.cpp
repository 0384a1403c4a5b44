#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lcflow/director.hpp"
#include "lcflow/iface.hpp"
#include "lcflow/norms.hpp"
#include "lcflow/scenarios.hpp"
#include "lcflow/spectral.hpp"

namespace lcflow {

namespace {

std::string fmt(const char* f, double a, double b = 0.0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

ScalarField white_noise(const Grid2D& grid, std::uint64_t seed, std::uint64_t stream)
{
    const CounterRng rng(seed);
    ScalarField f(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) f[k] = 2.0 * rng.uniform(stream, k) - 1.0;
    return f;
}

double l2(const ScalarField& f) { return lp_norm(f, 2.0); }
double l2(const VectorField2& v) { return lp_norm(v, 2.0); }

VectorField2 minus(const VectorField2& a, const VectorField2& b) { return VectorField2(a[0] - b[0], a[1] - b[1]); }

std::vector<CheckLine> spectral_suite()
{
    std::vector<CheckLine> out;
    const Grid2D grid(64, 2 * M_PI * 10);
    const double tol = 1e-12;
    const ScalarField f = white_noise(grid, 11, 0);

    const ScalarField back = to_physical(to_spectral(f));
    const double rt = l2(back - f) / l2(f);
    out.push_back({"round_trip", rt <= tol, fmt("relative error %.3e", rt)});

    const SpectralCoeffs c = to_spectral(f);
    double sum = 0.0;
    for (const auto& v : c.data()) sum += std::norm(v);
    const double parseval = std::abs(grid.length() * grid.length() * sum - l2(f) * l2(f)) / (l2(f) * l2(f));
    out.push_back({"parseval", parseval <= tol, fmt("relative error %.3e", parseval)});

    const VectorField2 v(white_noise(grid, 11, 1), white_noise(grid, 11, 2));
    const VectorField2 w(white_noise(grid, 11, 3), white_noise(grid, 11, 4));
    const VectorField2 pv = leray_project(v);
    const double idem = l2(minus(leray_project(pv), pv)) / l2(v);
    out.push_back({"leray_idempotent", idem <= tol, fmt("relative error %.3e", idem)});
    const double adj = std::abs(inner(pv, w) - inner(v, leray_project(w))) / (l2(v) * l2(w));
    out.push_back({"leray_self_adjoint", adj <= tol, fmt("relative error %.3e", adj)});

    double part = 0.0;
    for (double beta : {0.05, 0.3, 1.0, 2.5}) part = std::max(part, l2(lp_low(f, beta) + lp_high(f, beta) - f) / l2(f));
    out.push_back({"lp_partition", part <= tol, fmt("relative error %.3e", part)});
    return out;
}

double identity_gap(const DirectorField& d)
{
    const DirectorGeometry g(d);
    return std::abs(g.tension_sq - (g.lap_l2_sq - g.grad_l4_4)) / g.lap_l2_sq;
}

std::vector<CheckLine> sphere_suite()
{
    double worst = 0.0, gain = INFINITY;
    for (int s = 0; s < 50; ++s) {
        double r[2];
        for (int q = 0; q < 2; ++q) {
            const Grid2D grid(64 << q, 2 * M_PI);
            r[q] = identity_gap(hemisphere_random_data(0.2, 5, 0.15, 1000 + s, grid).d);
        }
        worst = std::max({worst, r[0], r[1]});
        gain = std::min(gain, r[0] / r[1]);
    }
    return {{"sphere_identity", worst <= 1e-6, fmt("worst relative gap %.3e", worst)},
            {"sphere_identity_refinement", gain >= 4.0, fmt("smallest gain from n=64 to n=128 %.3g", gain)}};
}

template <class Ratio>
std::vector<CheckLine> corpus_suite(const std::string& name, Ratio ratio, double bound)
{
    double worst_change = 0.0, largest = 0.0;
    for (int s = 0; s < 100; ++s) {
        double r[2];
        for (int q = 0; q < 2; ++q) r[q] = ratio(band_limited_field(Grid2D(64 << q, 2 * M_PI), 500 + s, 3, 8));
        worst_change = std::max(worst_change, std::abs(r[1] / r[0] - 1.0));
        largest = std::max({largest, r[0], r[1]});
    }
    return {{name + "_bounded", largest <= bound, fmt("largest ratio %.4f, bound %.4f", largest, bound)},
            {name + "_refinement", worst_change <= 0.1, fmt("largest change under n -> 2n %.3e", worst_change)}};
}

}  // namespace

const std::vector<std::string>& check_suites()
{
    static const std::vector<std::string> names = {"spectral", "sphere", "bernstein", "gn"};
    return names;
}

std::vector<CheckLine> run_check_suite(const std::string& name)
{
    if (name == "spectral") return spectral_suite();
    if (name == "sphere") return sphere_suite();
    if (name == "bernstein") {
        const double N = 4.0;
        // For p = 2, q = inf the bound sum |phi c_k| <= |phi|_2 |c|_2 is exact on the grid.
        const double bound = discrete_bernstein_constant(Grid2D(128, 2 * M_PI), N);
        return corpus_suite(
            "bernstein", [&](const ScalarField& f) { return bernstein_check(f, N, 2.0, INFINITY).ratio; }, bound);
    }
    if (name == "gn") return corpus_suite("gn", [](const ScalarField& f) { return gn_check(f).ratio; }, std::pow(2.0, 0.25));
    throw InvalidArgument("unknown check suite '" + name + "'");
}

}  // namespace lcflow
