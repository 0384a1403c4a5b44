#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "lcflow/aligned.hpp"
#include "lcflow/errors.hpp"

namespace lcflow {

/// Unit-norm tolerance for constructed director fields.
inline constexpr double tol_unit = 1e-9;
/// Unit-norm tolerance accepted between renormalizations during evolution.
inline constexpr double tol_evolve = 1e-6;
/// Samples shorter than this cannot be projected onto the sphere.
inline constexpr double norm_floor = 1e-8;

/// Periodic square [0, L)^2 sampled on an n x n lattice at (i h, j h).
class Grid2D {
public:
    /// Throws InvalidArgument unless n is a power of two >= 8 and length > 0.
    Grid2D(int n, double length);

    int n() const noexcept { return n_; }
    double length() const noexcept { return length_; }
    double spacing() const noexcept { return spacing_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }
    /// Quadrature weight h^2 of one sample.
    double cell_area() const noexcept { return spacing_ * spacing_; }
    /// Physical frequency of the integer wavenumber k.
    double frequency(int k) const noexcept;

    bool operator==(const Grid2D& other) const noexcept
    {
        return n_ == other.n_ && length_ == other.length_;
    }

private:
    int n_;
    double length_;
    double spacing_;
};

Grid2D new_grid(int n, double length);

/// Real samples of a scalar function, row-major: index i*n + j holds f(i h, j h).
class ScalarField {
public:
    explicit ScalarField(const Grid2D& grid, double value = 0.0);
    ScalarField(const Grid2D& grid, std::span<const double> values);
    ScalarField(const Grid2D& grid, AlignedVector<double> values);

    const Grid2D& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& operator()(int i, int j) { return values_[index(i, j)]; }
    double operator()(int i, int j) const { return values_[index(i, j)]; }
    double& operator[](std::size_t k) { return values_[k]; }
    double operator[](std::size_t k) const { return values_[k]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    double* data() noexcept { return values_.data(); }
    const double* data() const noexcept { return values_.data(); }

    bool all_finite() const noexcept;

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double s);

private:
    std::size_t index(int i, int j) const noexcept
    {
        return static_cast<std::size_t>(i) * grid_.n() + j;
    }

    Grid2D grid_;
    AlignedVector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Samples f(x) for x = (i h, j h).
template <class F>
ScalarField sample(const Grid2D& grid, F&& f)
{
    ScalarField out(grid);
    const double h = grid.spacing();
    for (int i = 0; i < grid.n(); ++i)
        for (int j = 0; j < grid.n(); ++j) out(i, j) = f(i * h, j * h);
    return out;
}

/// Planar vector field (u1, u2) on one grid.
class VectorField2 {
public:
    explicit VectorField2(const Grid2D& grid);
    VectorField2(ScalarField u1, ScalarField u2);

    const Grid2D& grid() const noexcept { return u1_.grid(); }
    ScalarField& operator[](int c) { return c == 0 ? u1_ : u2_; }
    const ScalarField& operator[](int c) const { return c == 0 ? u1_ : u2_; }
    const ScalarField& u1() const noexcept { return u1_; }
    const ScalarField& u2() const noexcept { return u2_; }

private:
    ScalarField u1_;
    ScalarField u2_;
};

/// Three-component field without a norm constraint (raw input to normalize).
struct Vector3Field {
    explicit Vector3Field(const Grid2D& grid);
    Vector3Field(ScalarField a, ScalarField b, ScalarField c);

    const Grid2D& grid() const noexcept { return comp[0].grid(); }
    ScalarField& operator[](int c) { return comp[static_cast<std::size_t>(c)]; }
    const ScalarField& operator[](int c) const { return comp[static_cast<std::size_t>(c)]; }

    std::array<ScalarField, 3> comp;
};

/// S^2-valued field. Every sample satisfies | |d|^2 - 1 | <= tolerance.
class DirectorField {
public:
    /// Throws InvariantViolation if any sample is off the sphere beyond tolerance.
    DirectorField(ScalarField d1, ScalarField d2, ScalarField d3, double tolerance = tol_unit);
    DirectorField(const Vector3Field& raw, double tolerance = tol_unit);

    /// The constant map x -> v (v normalized).
    static DirectorField constant(const Grid2D& grid, std::array<double, 3> v = {0.0, 0.0, 1.0});

    const Grid2D& grid() const noexcept { return comp_[0].grid(); }
    const ScalarField& operator[](int c) const { return comp_[static_cast<std::size_t>(c)]; }
    const ScalarField& d1() const noexcept { return comp_[0]; }
    const ScalarField& d2() const noexcept { return comp_[1]; }
    const ScalarField& d3() const noexcept { return comp_[2]; }

    /// max_x | |d(x)|^2 - 1 |
    double max_unit_defect() const noexcept;
    Vector3Field raw() const;

private:
    std::array<ScalarField, 3> comp_;
};

/// Pointwise projection onto the sphere. Throws DegenerateDirector if any
/// sample has Euclidean norm below norm_floor.
DirectorField normalize(const Vector3Field& raw);

/// Full Fourier coefficients c_k, k in [-n/2, n/2)^2, with
/// f(x) = sum_k c_k exp(i xi_k . x), xi_k = 2 pi k / L.
class SpectralCoeffs {
public:
    explicit SpectralCoeffs(const Grid2D& grid);

    const Grid2D& grid() const noexcept { return grid_; }
    std::complex<double>& at(int k1, int k2) { return coeffs_[slot(k1, k2)]; }
    const std::complex<double>& at(int k1, int k2) const { return coeffs_[slot(k1, k2)]; }
    std::span<const std::complex<double>> data() const noexcept { return coeffs_; }

    /// max_k |c(-k) - conj(c(k))|
    double hermitian_defect() const noexcept;

private:
    std::size_t slot(int k1, int k2) const;

    Grid2D grid_;
    std::vector<std::complex<double>> coeffs_;
};

/// Signed wavenumber of FFT slot idx in [0, n).
inline int signed_wavenumber(int idx, int n) noexcept { return idx < n / 2 ? idx : idx - n; }

}  // namespace lcflow
