#include "lcflow/norms.hpp"

#include <algorithm>
#include <cmath>

#include "lcflow/spectral.hpp"

namespace lcflow {

namespace {

template <class Magnitude>
double lp_norm_impl(const Grid2D& grid, double p, Magnitude&& mag)
{
    if (!(p >= 1.0)) throw InvalidArgument("lp_norm: exponent must be >= 1");
    const std::size_t count = grid.size();
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t k = 0; k < count; ++k) m = std::max(m, mag(k));
        return m;
    }
    double sum = 0.0;
    if (p == 2.0) {
        for (std::size_t k = 0; k < count; ++k) {
            const double v = mag(k);
            sum += v * v;
        }
        return std::sqrt(grid.cell_area() * sum);
    }
    for (std::size_t k = 0; k < count; ++k) sum += std::pow(mag(k), p);
    return std::pow(grid.cell_area() * sum, 1.0 / p);
}

constexpr double gn_floor = 1e-14;

}  // namespace

double lp_norm(const ScalarField& f, double p)
{
    return lp_norm_impl(f.grid(), p, [&](std::size_t k) { return std::abs(f[k]); });
}

double lp_norm(const VectorField2& f, double p)
{
    return lp_norm_impl(f.grid(), p, [&](std::size_t k) { return std::hypot(f.u1()[k], f.u2()[k]); });
}

double lp_norm(const Vector3Field& f, double p)
{
    return lp_norm_impl(f.grid(), p, [&](std::size_t k) {
        return std::sqrt(f[0][k] * f[0][k] + f[1][k] * f[1][k] + f[2][k] * f[2][k]);
    });
}

double sobolev_norm(const ScalarField& f, double s)
{
    if (!(s > 0.0)) throw InvalidArgument("sobolev_norm: order s must be positive");
    const auto fourier = Fourier::of(f.grid());
    const HalfSpectrum c = fourier->forward(f);
    double sum = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double xs = fourier->xi_sq(k);
        if (xs == 0.0) continue;
        sum += fourier->weight(k) * std::pow(xs, s) * std::norm(c[k]);
    }
    const double L = f.grid().length();
    return std::sqrt(L * L * sum);
}

double inner(const ScalarField& f, const ScalarField& g)
{
    if (!(f.grid() == g.grid())) throw InvalidArgument("inner: grids differ");
    double sum = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) sum += f[k] * g[k];
    return f.grid().cell_area() * sum;
}

double inner(const VectorField2& f, const VectorField2& g)
{
    return inner(f.u1(), g.u1()) + inner(f.u2(), g.u2());
}

GNReport gn_check(const ScalarField& u)
{
    const VectorField2 g = gradient(u);
    const double l2 = lp_norm(u, 2.0);
    const double gl2 = lp_norm(g, 2.0);
    if (l2 < gn_floor || gl2 < gn_floor) throw DegenerateInput("gn_check: vanishing L2 or gradient norm");
    const double l4 = lp_norm(u, 4.0);
    return {l4 / std::sqrt(l2 * gl2), l4, l2, gl2};
}

GNReport gn_check(const VectorField2& u)
{
    const VectorField2 g1 = gradient(u.u1());
    const VectorField2 g2 = gradient(u.u2());
    const double l2 = lp_norm(u, 2.0);
    const double gl2 = std::sqrt(std::pow(lp_norm(g1, 2.0), 2) + std::pow(lp_norm(g2, 2.0), 2));
    if (l2 < gn_floor || gl2 < gn_floor) throw DegenerateInput("gn_check: vanishing L2 or gradient norm");
    const double l4 = lp_norm(u, 4.0);
    return {l4 / std::sqrt(l2 * gl2), l4, l2, gl2};
}

SpaceTimeAccumulator& SpaceTimeAccumulator::add(double dt, double value)
{
    if (!(dt > 0.0)) throw InvalidArgument("accumulate: dt must be positive");
    if (!(value >= 0.0)) throw InvalidArgument("accumulate: value must be nonnegative");
    total_ += dt * value;
    ++steps_;
    return *this;
}

SpaceTimeAccumulator accumulate(SpaceTimeAccumulator acc, double dt, double value)
{
    acc.add(dt, value);
    return acc;
}

}  // namespace lcflow
