#include "lcflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "lcflow/norms.hpp"

namespace lcflow {

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

template <class Multiplier>
ScalarField apply_multiplier(const ScalarField& f, Multiplier&& m)
{
    const auto fourier = Fourier::of(f.grid());
    HalfSpectrum c = fourier->forward(f);
    const int rows = fourier->n(), cols = fourier->half_cols();
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const std::size_t s = static_cast<std::size_t>(i) * cols + j;
            c[s] *= m(*fourier, i, j, s);
        }
    ScalarField out(f.grid());
    fourier->inverse_destroying(c.data(), out.data());
    return out;
}

double bump_step(double t)
{
    auto g = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
    const double a = g(t), b = g(1.0 - t);
    return a / (a + b);
}

double radial_xi(const Fourier& fourier, int i, int j)
{
    return std::hypot(fourier.xi1(i), fourier.xi2(j));
}

}  // namespace

std::shared_ptr<const Fourier> Fourier::of(const Grid2D& grid)
{
    static std::mutex cache_mutex;
    static std::map<std::pair<int, double>, std::shared_ptr<const Fourier>> cache;
    std::lock_guard lock(cache_mutex);
    auto& slot = cache[{grid.n(), grid.length()}];
    if (!slot) slot = std::make_shared<const Fourier>(grid);
    return slot;
}

Fourier::Fourier(const Grid2D& grid) : grid_(grid)
{
    const int n = grid.n();
    const int cols = n / 2 + 1;
    {
        std::lock_guard lock(planner_mutex());
        AlignedVector<double> real(grid.size());
        AlignedVector<Complex> spec(half_size());
        forward_plan_ = fftw_plan_dft_r2c_2d(n, n, real.data(), as_fftw(spec.data()), FFTW_MEASURE);
        inverse_plan_ = fftw_plan_dft_c2r_2d(n, n, as_fftw(spec.data()), real.data(), FFTW_MEASURE);
    }
    if (forward_plan_ == nullptr || inverse_plan_ == nullptr) throw Error("FFTW planning failed");

    xi1_.resize(static_cast<std::size_t>(n));
    dxi1_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int k = signed_wavenumber(i, n);
        xi1_[static_cast<std::size_t>(i)] = grid.frequency(k);
        dxi1_[static_cast<std::size_t>(i)] = (k == -n / 2) ? 0.0 : grid.frequency(k);
    }
    xi2_.resize(static_cast<std::size_t>(cols));
    dxi2_.resize(static_cast<std::size_t>(cols));
    for (int j = 0; j < cols; ++j) {
        // Column n/2 stores the Nyquist mode, k2 = -n/2 by convention.
        const int k = (j == n / 2) ? -n / 2 : j;
        xi2_[static_cast<std::size_t>(j)] = grid.frequency(k);
        dxi2_[static_cast<std::size_t>(j)] = (j == n / 2) ? 0.0 : grid.frequency(k);
    }
    xi_sq_.resize(half_size());
    weight_.resize(half_size());
    keep_.resize(half_size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < cols; ++j) {
            const std::size_t s = static_cast<std::size_t>(i) * cols + j;
            const double a = xi1_[static_cast<std::size_t>(i)], b = xi2_[static_cast<std::size_t>(j)];
            xi_sq_[s] = a * a + b * b;
            weight_[s] = (j == 0 || j == n / 2) ? 1.0 : 2.0;
            const int k1 = std::abs(signed_wavenumber(i, n));
            keep_[s] = (3 * k1 < n && 3 * j < n) ? 1 : 0;
        }
}

Fourier::~Fourier()
{
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void Fourier::forward(const double* in, Complex* out) const
{
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in), as_fftw(out));
    const double scale = 1.0 / static_cast<double>(grid_.size());
    for (std::size_t s = 0; s < half_size(); ++s) out[s] *= scale;
}

void Fourier::inverse_destroying(Complex* in, double* out) const
{
    fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), as_fftw(in), out);
}

void Fourier::inverse(const Complex* in, double* out) const
{
    thread_local HalfSpectrum scratch;
    scratch.resize(half_size());
    std::memcpy(static_cast<void*>(scratch.data()), in, half_size() * sizeof(Complex));
    inverse_destroying(scratch.data(), out);
}

HalfSpectrum Fourier::forward(const ScalarField& f) const
{
    HalfSpectrum c(half_size());
    forward(f.data(), c.data());
    return c;
}

ScalarField Fourier::inverse(const HalfSpectrum& c) const
{
    ScalarField out(grid_);
    inverse(c.data(), out.data());
    return out;
}

void Fourier::dealias(Complex* c) const noexcept
{
    for (std::size_t s = 0; s < half_size(); ++s)
        if (!keep_[s]) c[s] = 0.0;
}

SpectralCoeffs to_spectral(const ScalarField& f)
{
    const auto fourier = Fourier::of(f.grid());
    const HalfSpectrum half = fourier->forward(f);
    const int n = fourier->n(), cols = fourier->half_cols();
    SpectralCoeffs out(f.grid());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < cols; ++j) {
            const Complex c = half[static_cast<std::size_t>(i) * cols + j];
            const int k1 = signed_wavenumber(i, n);
            const int k2 = (j == n / 2) ? -n / 2 : j;
            out.at(k1, k2) = c;
            // Mirror into the negative-k2 half. Row/column Nyquist map to themselves.
            const int m1 = (k1 == -n / 2) ? k1 : -k1;
            const int m2 = (k2 == -n / 2) ? k2 : -k2;
            out.at(m1, m2) = std::conj(c);
        }
    return out;
}

ScalarField to_physical(const SpectralCoeffs& c)
{
    const Grid2D& grid = c.grid();
    const auto fourier = Fourier::of(grid);
    const int n = fourier->n(), cols = fourier->half_cols();
    HalfSpectrum half(fourier->half_size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < cols; ++j) {
            const int k1 = signed_wavenumber(i, n);
            const int k2 = (j == n / 2) ? -n / 2 : j;
            const int m1 = (k1 == -n / 2) ? k1 : -k1;
            const int m2 = (k2 == -n / 2) ? k2 : -k2;
            half[static_cast<std::size_t>(i) * cols + j] = 0.5 * (c.at(k1, k2) + std::conj(c.at(m1, m2)));
        }
    ScalarField out(grid);
    fourier->inverse_destroying(half.data(), out.data());
    return out;
}

ScalarField partial(const ScalarField& f, int direction)
{
    if (direction != 0 && direction != 1) throw InvalidArgument("partial: direction must be 0 or 1");
    return apply_multiplier(f, [direction](const Fourier& F, int i, int j, std::size_t) {
        return Complex(0.0, direction == 0 ? F.dxi1(i) : F.dxi2(j));
    });
}

VectorField2 gradient(const ScalarField& f)
{
    const auto fourier = Fourier::of(f.grid());
    const HalfSpectrum c = fourier->forward(f);
    const int rows = fourier->n(), cols = fourier->half_cols();
    HalfSpectrum g1(c.size()), g2(c.size());
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const std::size_t s = static_cast<std::size_t>(i) * cols + j;
            g1[s] = times_i(fourier->dxi1(i), c[s]);
            g2[s] = times_i(fourier->dxi2(j), c[s]);
        }
    ScalarField a(f.grid()), b(f.grid());
    fourier->inverse_destroying(g1.data(), a.data());
    fourier->inverse_destroying(g2.data(), b.data());
    return VectorField2(std::move(a), std::move(b));
}

ScalarField divergence(const VectorField2& v)
{
    const auto fourier = Fourier::of(v.grid());
    HalfSpectrum a = fourier->forward(v.u1());
    const HalfSpectrum b = fourier->forward(v.u2());
    const int rows = fourier->n(), cols = fourier->half_cols();
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const std::size_t s = static_cast<std::size_t>(i) * cols + j;
            a[s] = times_i(fourier->dxi1(i), a[s]) + times_i(fourier->dxi2(j), b[s]);
        }
    ScalarField out(v.grid());
    fourier->inverse_destroying(a.data(), out.data());
    return out;
}

ScalarField laplacian(const ScalarField& f)
{
    return apply_multiplier(f, [](const Fourier& F, int, int, std::size_t s) { return Complex(-F.xi_sq(s)); });
}

ScalarField fractional_laplacian(const ScalarField& f, double s)
{
    if (!(s > 0.0)) throw InvalidArgument("fractional_laplacian: order s must be positive");
    return apply_multiplier(f, [s](const Fourier& F, int, int, std::size_t slot) {
        return Complex(std::pow(F.xi_sq(slot), 0.5 * s));
    });
}

ScalarField heat_semigroup(const ScalarField& f, double t)
{
    if (!(t >= 0.0)) throw InvalidArgument("heat_semigroup: time must be nonnegative");
    return apply_multiplier(f, [t](const Fourier& F, int, int, std::size_t s) {
        return Complex(std::exp(-t * F.xi_sq(s)));
    });
}

ScalarField dealias(const ScalarField& f)
{
    return apply_multiplier(f, [](const Fourier& F, int, int, std::size_t s) {
        return Complex(F.keeps(s) ? 1.0 : 0.0);
    });
}

VectorField2 leray_project(const VectorField2& v)
{
    const auto fourier = Fourier::of(v.grid());
    HalfSpectrum a = fourier->forward(v.u1());
    HalfSpectrum b = fourier->forward(v.u2());
    const int rows = fourier->n(), cols = fourier->half_cols();
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const std::size_t s = static_cast<std::size_t>(i) * cols + j;
            const double k1 = fourier->dxi1(i), k2 = fourier->dxi2(j);
            const double kk = k1 * k1 + k2 * k2;
            if (kk == 0.0) continue;
            const Complex dot = (k1 * a[s] + k2 * b[s]) / kk;
            a[s] -= k1 * dot;
            b[s] -= k2 * dot;
        }
    ScalarField p(v.grid()), q(v.grid());
    fourier->inverse_destroying(a.data(), p.data());
    fourier->inverse_destroying(b.data(), q.data());
    return VectorField2(std::move(p), std::move(q));
}

double lp_bump(double r) noexcept
{
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    return bump_step(2.0 - r);
}

ScalarField lp_low(const ScalarField& f, double beta)
{
    if (!(beta > 0.0)) throw InvalidArgument("lp_low: cutoff must be positive");
    return apply_multiplier(f, [beta](const Fourier& F, int i, int j, std::size_t) {
        return Complex(lp_bump(radial_xi(F, i, j) / beta));
    });
}

ScalarField lp_high(const ScalarField& f, double alpha)
{
    if (!(alpha > 0.0)) throw InvalidArgument("lp_high: cutoff must be positive");
    return apply_multiplier(f, [alpha](const Fourier& F, int i, int j, std::size_t) {
        return Complex(1.0 - lp_bump(radial_xi(F, i, j) / alpha));
    });
}

ScalarField lp_band(const ScalarField& f, double alpha, double beta)
{
    if (!(alpha > 0.0) || !(alpha < beta)) throw InvalidArgument("lp_band: requires 0 < alpha < beta");
    return apply_multiplier(f, [alpha, beta](const Fourier& F, int i, int j, std::size_t) {
        const double r = radial_xi(F, i, j);
        return Complex(lp_bump(r / beta) - lp_bump(r / alpha));
    });
}

BernsteinReport bernstein_check(const ScalarField& f, double N, double p, double q)
{
    if (!(p >= 1.0) || !(q >= p)) throw InvalidArgument("bernstein_check: requires 1 <= p <= q");
    if (!(N > 0.0)) throw InvalidArgument("bernstein_check: N must be positive");
    const double lhs = lp_norm(lp_low(f, N), q);
    const double fp = lp_norm(f, p);
    const double inv_p = 1.0 / p;
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    const double scale = std::pow(N, 2.0 * inv_p - 2.0 * inv_q) * fp;
    return {lhs, scale > 0.0 ? lhs / scale : 0.0};
}

double discrete_bernstein_constant(const Grid2D& grid, double M)
{
    if (!(M > 0.0)) throw InvalidArgument("discrete_bernstein_constant: M must be positive");
    const int n = grid.n();
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double xi = std::hypot(grid.frequency(signed_wavenumber(i, n)),
                                         grid.frequency(signed_wavenumber(j, n)));
            const double m = lp_bump(xi / M);
            sum += m * m;
        }
    return std::sqrt(sum) / (grid.length() * M);
}

}  // namespace lcflow
