#include "lcflow/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lcflow/director.hpp"
#include "lcflow/norms.hpp"
#include "lcflow/spectral.hpp"

namespace lcflow {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double wrap(double x, double L) noexcept
{
    x = std::fmod(x, L);
    if (x < -0.5 * L) x += L;
    if (x >= 0.5 * L) x -= L;
    return x;
}

constexpr int bisection_steps = 60;

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t counter) const noexcept
{
    return splitmix64(seed_ ^ splitmix64(stream ^ splitmix64(counter)));
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t counter) const noexcept
{
    return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t stream, std::uint64_t counter) const noexcept
{
    const double u1 = 1.0 - uniform(stream, 2 * counter);  // (0, 1]
    const double u2 = uniform(stream, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

ScalarField band_limited_field(const Grid2D& grid, std::uint64_t seed, std::uint64_t stream, int max_mode)
{
    const int n = grid.n();
    if (max_mode < 1 || 2 * max_mode >= n)
        throw InvalidArgument("band_limited_field: max_mode must lie in [1, n/2)");
    const auto fourier = Fourier::of(grid);
    const int cols = fourier->half_cols();
    HalfSpectrum c = fourier->make_spectrum();
    const CounterRng rng(seed);
    const int side = 2 * max_mode + 1;
    double power = 0.0;
    for (int k1 = -max_mode; k1 <= max_mode; ++k1)
        for (int k2 = 0; k2 <= max_mode; ++k2) {
            if (k2 == 0 && k1 <= 0) continue;
            if (k1 * k1 + k2 * k2 > max_mode * max_mode) continue;
            const auto counter = static_cast<std::uint64_t>((k1 + max_mode) * side + k2);
            const Complex v(rng.normal(stream, 2 * counter), rng.normal(stream, 2 * counter + 1));
            const int row = k1 >= 0 ? k1 : k1 + n;
            c[static_cast<std::size_t>(row) * cols + k2] = v;
            if (k2 == 0) c[static_cast<std::size_t>(n - k1) * cols] = std::conj(v);
            power += 2.0 * std::norm(v);
        }
    const double scale = 1.0 / std::sqrt(power);
    for (auto& v : c) v *= scale;
    return fourier->inverse(c);
}

RadialProfile::RadialProfile(double amplitude_, double width_, double r_cut_)
    : amplitude(amplitude_), width(width_), r_cut(r_cut_)
{
    if (!(width > 0.0) || !(r_cut > 0.0)) throw InvalidArgument("RadialProfile: width and r_cut must be positive");
}

double RadialProfile::operator()(double r) const noexcept
{
    const double a = r / width, b = r / r_cut;
    return amplitude * (1.0 - std::exp(-a * a)) * std::exp(-b * b * b * b);
}

double RadialProfile::peak() const
{
    // The shape factor vanishes at 0 and decays past ~2 r_cut; it is unimodal.
    const double rmax = 3.0 * r_cut;
    const int samples = 4096;
    int best = 0;
    double best_val = -1.0;
    for (int i = 0; i <= samples; ++i) {
        const double v = std::abs((*this)(rmax * i / samples));
        if (v > best_val) best_val = v, best = i;
    }
    double a = rmax * std::max(0, best - 1) / samples, b = rmax * std::min(samples, best + 1) / samples;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 100; ++it) {
        const double x1 = b - g * (b - a), x2 = a + g * (b - a);
        if (std::abs((*this)(x1)) > std::abs((*this)(x2)))
            b = x2;
        else
            a = x1;
    }
    return (*this)(0.5 * (a + b));
}

RadialProfile RadialProfile::with_peak(double peak_value, double width, double r_cut)
{
    const RadialProfile unit(1.0, width, r_cut);
    return RadialProfile(peak_value / unit.peak(), width, r_cut);
}

DirectorField radial_data(const RadialProfile& profile, std::array<double, 2> center, const Grid2D& grid)
{
    const int n = grid.n();
    const double h = grid.spacing(), L = grid.length();
    ScalarField d1(grid), d2(grid), d3(grid);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x1 = wrap(i * h - center[0], L), x2 = wrap(j * h - center[1], L);
            const double r = std::hypot(x1, x2);
            if (r == 0.0) {
                d3(i, j) = 1.0;
                continue;
            }
            const double psi = profile(r);
            const double s = std::sin(psi);
            d1(i, j) = x1 / r * s;
            d2(i, j) = x2 / r * s;
            d3(i, j) = std::cos(psi);
        }
    return DirectorField(std::move(d1), std::move(d2), std::move(d3));
}

HemisphereData hemisphere_random_data(double epsilon0, int roughness, double amplitude, std::uint64_t seed,
                                      const Grid2D& grid)
{
    if (!(epsilon0 > 0.0 && epsilon0 < 1.0)) throw InvalidArgument("hemisphere_random_data: epsilon0 must lie in (0,1)");
    if (!(amplitude >= 0.0)) throw InvalidArgument("hemisphere_random_data: amplitude must be nonnegative");
    const int max_mode = std::max(1, roughness);
    const Vector3Field w(band_limited_field(grid, seed, 0, max_mode), band_limited_field(grid, seed, 1, max_mode),
                         band_limited_field(grid, seed, 2, max_mode));
    const auto build = [&](double a) {
        Vector3Field v(grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            v[0][k] = a * w[0][k];
            v[1][k] = a * w[1][k];
            v[2][k] = 1.0 + a * w[2][k];
        }
        return v;
    };
    const auto feasible = [&](double a) {
        const Vector3Field v = build(a);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double norm = std::sqrt(v[0][k] * v[0][k] + v[1][k] * v[1][k] + v[2][k] * v[2][k]);
            if (!(norm >= norm_floor) || v[2][k] < epsilon0 * norm) return false;
        }
        return true;
    };
    double a = amplitude;
    if (!feasible(a)) {
        double lo = 0.0, hi = amplitude;
        for (int it = 0; it < bisection_steps; ++it) {
            const double mid = 0.5 * (lo + hi);
            (feasible(mid) ? lo : hi) = mid;
        }
        a = lo;
    }
    DirectorField d = normalize(build(a));
    const double inf_d3 = angle_infimum(d);
    const double grad_l2 = std::sqrt(DirectorGeometry(d).grad_l2_sq);
    return {std::move(d), a, inf_d3, grad_l2};
}

VectorField2 divergence_free_velocity(std::uint64_t seed, int max_mode, double energy, const Grid2D& grid)
{
    if (!(energy >= 0.0)) throw InvalidArgument("divergence_free_velocity: energy must be nonnegative");
    const ScalarField psi = band_limited_field(grid, seed, 7, max_mode);
    ScalarField u1 = partial(psi, 1);
    u1 *= -1.0;
    VectorField2 u(std::move(u1), partial(psi, 0));
    const double current = 0.5 * inner(u, u);
    const double s = std::sqrt(energy / current);
    u[0] *= s;
    u[1] *= s;
    return u;
}

VectorField2 taylor_green_velocity(double amplitude, int mode, const Grid2D& grid)
{
    const double k = grid.frequency(mode);
    return VectorField2(
        sample(grid, [&](double x1, double x2) { return amplitude * std::sin(k * x1) * std::cos(k * x2); }),
        sample(grid, [&](double x1, double x2) { return -amplitude * std::cos(k * x1) * std::sin(k * x2); }));
}

DirectorField equator_map(int mode, const Grid2D& grid)
{
    const double k = grid.frequency(mode);
    return DirectorField(sample(grid, [&](double x1, double) { return std::cos(k * x1); }),
                         sample(grid, [&](double x1, double) { return std::sin(k * x1); }), ScalarField(grid));
}

double smooth_step(double t) noexcept
{
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

BubbleData stereographic_bubble(double scale, std::array<double, 2> center, const Grid2D& grid, double blend_start,
                                double blend_end)
{
    if (!(scale > 0.0)) throw InvalidArgument("stereographic_bubble: scale must be positive");
    if (!(0.0 < blend_start && blend_start < blend_end))
        throw InvalidArgument("stereographic_bubble: need 0 < blend_start < blend_end");
    const int n = grid.n();
    const double h = grid.spacing(), L = grid.length();
    const double r1 = blend_start * L, r2 = blend_end * L;
    ScalarField d1(grid), d2(grid), d3(grid);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x1 = wrap(i * h - center[0], L), x2 = wrap(j * h - center[1], L);
            const double r2sq = x1 * x1 + x2 * x2;
            if (r2sq == 0.0) {
                d3(i, j) = -1.0;
                continue;
            }
            const double chi = 1.0 - smooth_step((std::sqrt(r2sq) - r1) / (r2 - r1));
            const double z1 = chi * scale * x1 / r2sq, z2 = chi * scale * x2 / r2sq;
            const double zz = z1 * z1 + z2 * z2;
            d1(i, j) = 2.0 * z1 / (1.0 + zz);
            d2(i, j) = 2.0 * z2 / (1.0 + zz);
            d3(i, j) = (1.0 - zz) / (1.0 + zz);
        }
    DirectorField d(std::move(d1), std::move(d2), std::move(d3));
    const double e = DirectorGeometry(d).grad_l2_sq;
    return {std::move(d), e};
}

}  // namespace lcflow
