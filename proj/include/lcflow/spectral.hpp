#pragma once

#include <complex>
#include <memory>
#include <span>

#include "lcflow/fields.hpp"

namespace lcflow {

using Complex = std::complex<double>;
/// Half spectrum produced by a real-to-complex transform: slot i*(n/2+1)+j
/// holds c_k for k = (signed(i), j), j in [0, n/2].
using HalfSpectrum = AlignedVector<Complex>;

/// i k v without the general complex product.
inline Complex times_i(double k, Complex v) noexcept { return {-k * v.imag(), k * v.real()}; }

/// Cached FFTW plans and wavenumber tables for one grid.
///
/// Forward transforms are scaled by 1/n^2 so the zero mode is the sample
/// mean. Derivative tables zero the Nyquist wavenumber; the |xi|^2 table
/// keeps it.
class Fourier {
public:
    /// Shared instance for the grid; lookup is safe from concurrent threads.
    static std::shared_ptr<const Fourier> of(const Grid2D& grid);

    explicit Fourier(const Grid2D& grid);
    ~Fourier();
    Fourier(const Fourier&) = delete;
    Fourier& operator=(const Fourier&) = delete;

    const Grid2D& grid() const noexcept { return grid_; }
    int n() const noexcept { return grid_.n(); }
    int half_cols() const noexcept { return grid_.n() / 2 + 1; }
    std::size_t half_size() const noexcept { return static_cast<std::size_t>(n()) * half_cols(); }
    HalfSpectrum make_spectrum() const { return HalfSpectrum(half_size()); }

    /// Physical frequency of row i (first coordinate) and column j (second).
    double xi1(int i) const noexcept { return xi1_[static_cast<std::size_t>(i)]; }
    double xi2(int j) const noexcept { return xi2_[static_cast<std::size_t>(j)]; }
    /// Derivative multipliers: xi with the Nyquist entry set to zero.
    double dxi1(int i) const noexcept { return dxi1_[static_cast<std::size_t>(i)]; }
    double dxi2(int j) const noexcept { return dxi2_[static_cast<std::size_t>(j)]; }
    double xi_sq(std::size_t slot) const noexcept { return xi_sq_[slot]; }
    /// True when the mode survives the 2/3 truncation.
    bool keeps(std::size_t slot) const noexcept { return keep_[slot] != 0; }
    /// Weight of a half-spectrum slot in full-spectrum sums (1 or 2).
    double weight(std::size_t slot) const noexcept { return weight_[slot]; }

    /// in: n^2 aligned reals. out: half_size() aligned coefficients.
    void forward(const double* in, Complex* out) const;
    /// Destroys `in`.
    void inverse_destroying(Complex* in, double* out) const;
    /// Preserves `in` by copying it to a thread-local scratch buffer.
    void inverse(const Complex* in, double* out) const;

    HalfSpectrum forward(const ScalarField& f) const;
    ScalarField inverse(const HalfSpectrum& c) const;

    /// Zeroes modes outside the 2/3-rule box |k_j| < n/3.
    void dealias(Complex* c) const noexcept;

private:
    Grid2D grid_;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
    std::vector<double> xi1_, xi2_, dxi1_, dxi2_;
    std::vector<double> xi_sq_, weight_;
    std::vector<unsigned char> keep_;
};

SpectralCoeffs to_spectral(const ScalarField& f);
/// Real part of the inverse transform (the Hermitian part of c is used).
ScalarField to_physical(const SpectralCoeffs& c);

ScalarField partial(const ScalarField& f, int direction);
VectorField2 gradient(const ScalarField& f);
ScalarField divergence(const VectorField2& v);
ScalarField laplacian(const ScalarField& f);
/// |nabla|^s f, multiplier |xi|^s. Throws InvalidArgument for s <= 0.
ScalarField fractional_laplacian(const ScalarField& f, double s);
/// Multiplier exp(-t |xi|^2), t >= 0.
ScalarField heat_semigroup(const ScalarField& f, double t);
/// 2/3-rule truncation.
ScalarField dealias(const ScalarField& f);
/// Projection onto divergence-free fields; the mean mode passes unchanged.
VectorField2 leray_project(const VectorField2& v);

/// Radial profile of the Littlewood-Paley bump: 1 on [0,1], 0 on [2,inf),
/// smooth and nonincreasing in between.
double lp_bump(double r) noexcept;

/// P_{<beta} f, multiplier phi(xi / beta).
ScalarField lp_low(const ScalarField& f, double beta);
/// P_{>alpha} f, multiplier 1 - phi(xi / alpha).
ScalarField lp_high(const ScalarField& f, double alpha);
/// P_{alpha<.<beta} f, multiplier phi(xi / beta) - phi(xi / alpha). Requires alpha < beta.
ScalarField lp_band(const ScalarField& f, double alpha, double beta);

struct BernsteinReport {
    double lhs;    ///< ||P_{<N} f||_q
    double ratio;  ///< lhs / (N^{2/p - 2/q} ||f||_p), 0 when f = 0
};

/// Bernstein estimate probe ||P_{<N} f||_q <~ N^{2/p-2/q} ||f||_p. Requires 1 <= p <= q.
BernsteinReport bernstein_check(const ScalarField& f, double N, double p, double q);

/// Smallest C with ||P_{<M} f||_2 <= C M ||f||_1 for every f >= 0 on this
/// torus: sqrt(sum_k phi(xi_k/M)^2) / (L M).
double discrete_bernstein_constant(const Grid2D& grid, double M);

}  // namespace lcflow
