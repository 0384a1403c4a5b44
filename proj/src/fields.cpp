#include "lcflow/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace lcflow {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what)
{
    if (!(a == b)) throw InvalidArgument(std::string(what) + ": components live on different grids");
}

}  // namespace

Grid2D::Grid2D(int n, double length) : n_(n), length_(length), spacing_(0.0)
{
    if (!is_power_of_two(n) || n < 8) {
        std::ostringstream msg;
        msg << "grid size " << n << " is not a power of two >= 8";
        throw InvalidArgument(msg.str());
    }
    if (!(length > 0.0) || !std::isfinite(length))
        throw InvalidArgument("grid length must be positive and finite");
    spacing_ = length / n;
}

double Grid2D::frequency(int k) const noexcept { return 2.0 * std::numbers::pi * k / length_; }

Grid2D new_grid(int n, double length) { return Grid2D(n, length); }

ScalarField::ScalarField(const Grid2D& grid, double value) : grid_(grid), values_(grid.size(), value) {}

ScalarField::ScalarField(const Grid2D& grid, std::span<const double> values)
    : grid_(grid), values_(values.begin(), values.end())
{
    if (values_.size() != grid_.size()) throw InvalidArgument("ScalarField: sample count does not match grid");
}

ScalarField::ScalarField(const Grid2D& grid, AlignedVector<double> values)
    : grid_(grid), values_(std::move(values))
{
    if (values_.size() != grid_.size()) throw InvalidArgument("ScalarField: sample count does not match grid");
}

bool ScalarField::all_finite() const noexcept
{
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& other)
{
    require_same_grid(grid_, other.grid_, "ScalarField +=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other)
{
    require_same_grid(grid_, other.grid_, "ScalarField -=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

ScalarField& ScalarField::operator*=(double s)
{
    for (auto& v : values_) v *= s;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

VectorField2::VectorField2(const Grid2D& grid) : u1_(grid), u2_(grid) {}

VectorField2::VectorField2(ScalarField u1, ScalarField u2) : u1_(std::move(u1)), u2_(std::move(u2))
{
    require_same_grid(u1_.grid(), u2_.grid(), "VectorField2");
}

Vector3Field::Vector3Field(const Grid2D& grid) : comp{ScalarField(grid), ScalarField(grid), ScalarField(grid)} {}

Vector3Field::Vector3Field(ScalarField a, ScalarField b, ScalarField c)
    : comp{std::move(a), std::move(b), std::move(c)}
{
    require_same_grid(comp[0].grid(), comp[1].grid(), "Vector3Field");
    require_same_grid(comp[0].grid(), comp[2].grid(), "Vector3Field");
}

DirectorField::DirectorField(ScalarField d1, ScalarField d2, ScalarField d3, double tolerance)
    : comp_{std::move(d1), std::move(d2), std::move(d3)}
{
    require_same_grid(comp_[0].grid(), comp_[1].grid(), "DirectorField");
    require_same_grid(comp_[0].grid(), comp_[2].grid(), "DirectorField");
    for (const auto& c : comp_)
        if (!c.all_finite()) throw InvariantViolation("DirectorField: non-finite sample");
    const double defect = max_unit_defect();
    if (defect > tolerance) {
        std::ostringstream msg;
        msg << "DirectorField: unit-norm defect " << defect << " exceeds tolerance " << tolerance;
        throw InvariantViolation(msg.str());
    }
}

DirectorField::DirectorField(const Vector3Field& raw, double tolerance)
    : DirectorField(raw[0], raw[1], raw[2], tolerance)
{
}

DirectorField DirectorField::constant(const Grid2D& grid, std::array<double, 3> v)
{
    const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (norm < norm_floor) throw DegenerateDirector("constant director of zero length");
    return DirectorField(ScalarField(grid, v[0] / norm), ScalarField(grid, v[1] / norm),
                         ScalarField(grid, v[2] / norm));
}

double DirectorField::max_unit_defect() const noexcept
{
    double worst = 0.0;
    for (std::size_t k = 0; k < comp_[0].size(); ++k) {
        const double s = comp_[0][k] * comp_[0][k] + comp_[1][k] * comp_[1][k] + comp_[2][k] * comp_[2][k];
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

Vector3Field DirectorField::raw() const { return Vector3Field(comp_[0], comp_[1], comp_[2]); }

DirectorField normalize(const Vector3Field& raw)
{
    const Grid2D& grid = raw.grid();
    ScalarField a(grid), b(grid), c(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double x = raw[0][k], y = raw[1][k], z = raw[2][k];
        const double norm = std::sqrt(x * x + y * y + z * z);
        if (!(norm >= norm_floor)) {
            std::ostringstream msg;
            msg << "normalize: sample " << k << " has norm " << norm << " below " << norm_floor;
            throw DegenerateDirector(msg.str());
        }
        a[k] = x / norm;
        b[k] = y / norm;
        c[k] = z / norm;
    }
    return DirectorField(std::move(a), std::move(b), std::move(c));
}

SpectralCoeffs::SpectralCoeffs(const Grid2D& grid) : grid_(grid), coeffs_(grid.size()) {}

std::size_t SpectralCoeffs::slot(int k1, int k2) const
{
    const int n = grid_.n();
    if (k1 < -n / 2 || k1 >= n / 2 || k2 < -n / 2 || k2 >= n / 2)
        throw InvalidArgument("SpectralCoeffs: wavenumber out of range");
    const int i = k1 < 0 ? k1 + n : k1;
    const int j = k2 < 0 ? k2 + n : k2;
    return static_cast<std::size_t>(i) * n + j;
}

double SpectralCoeffs::hermitian_defect() const noexcept
{
    const int n = grid_.n();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto c = coeffs_[static_cast<std::size_t>(i) * n + j];
            const int mi = (n - i) % n, mj = (n - j) % n;
            const auto m = coeffs_[static_cast<std::size_t>(mi) * n + mj];
            worst = std::max(worst, std::abs(m - std::conj(c)));
        }
    return worst;
}

}  // namespace lcflow
