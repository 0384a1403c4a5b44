#include "lcflow/director.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lcflow/spectral.hpp"

namespace lcflow {

namespace {

constexpr double laplacian_floor = 1e-12;

}  // namespace

DirectorGeometry::DirectorGeometry(const DirectorField& d)
    : DirectorGeometry(d, [&] {
          const auto fourier = Fourier::of(d.grid());
          std::array<HalfSpectrum, 3> spectra;
          for (int c = 0; c < 3; ++c) spectra[c] = fourier->forward(d[c]);
          return spectra;
      }())
{
}

DirectorGeometry::DirectorGeometry(const DirectorField& d, const std::array<HalfSpectrum, 3>& owned)
    : DirectorGeometry(d, std::array<const Complex*, 3>{owned[0].data(), owned[1].data(), owned[2].data()})
{
}

DirectorGeometry::DirectorGeometry(const DirectorField& d, const std::array<const Complex*, 3>& spectra)
    : grad{{{ScalarField(d.grid()), ScalarField(d.grid()), ScalarField(d.grid())},
            {ScalarField(d.grid()), ScalarField(d.grid()), ScalarField(d.grid())}}},
      lap(d.grid()),
      grad_sq(d.grid())
{
    const Grid2D& grid = d.grid();
    const auto fourier = Fourier::of(grid);
    const int rows = fourier->n(), cols = fourier->half_cols();
    HalfSpectrum work(fourier->half_size());
    for (int c = 0; c < 3; ++c) {
        const Complex* dc = spectra[c];
        for (int dir = 0; dir < 2; ++dir) {
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < cols; ++j) {
                    const std::size_t s = static_cast<std::size_t>(i) * cols + j;
                    const double k = dir == 0 ? fourier->dxi1(i) : fourier->dxi2(j);
                    work[s] = times_i(k, dc[s]);
                }
            fourier->inverse_destroying(work.data(), grad[dir][c].data());
        }
        for (std::size_t s = 0; s < work.size(); ++s) work[s] = -fourier->xi_sq(s) * dc[s];
        fourier->inverse_destroying(work.data(), lap[c].data());
    }

    double g2 = 0.0, g4 = 0.0, l2 = 0.0, t2 = 0.0, r2 = 0.0, gmax = 0.0;
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double gs = 0.0;
        for (int dir = 0; dir < 2; ++dir)
            for (int c = 0; c < 3; ++c) gs += grad[dir][c][k] * grad[dir][c][k];
        grad_sq[k] = gs;
        double lap_dot_d = 0.0, lap_sq = 0.0, ten_sq = 0.0;
        for (int c = 0; c < 3; ++c) {
            const double lc = lap[c][k];
            lap_dot_d += lc * d[c][k];
            lap_sq += lc * lc;
            const double gc = lc + gs * d[c][k];
            ten_sq += gc * gc;
        }
        g2 += gs;
        g4 += gs * gs;
        l2 += lap_sq;
        t2 += ten_sq;
        r2 += (lap_dot_d + gs) * (lap_dot_d + gs);
        gmax = std::max(gmax, gs);
        dmin = std::min(dmin, d[2][k]);
    }
    const double w = grid.cell_area();
    grad_l2_sq = w * g2;
    grad_l4_4 = w * g4;
    lap_l2_sq = w * l2;
    tension_sq = w * t2;
    identity_residual = std::sqrt(w * r2);
    max_grad = std::sqrt(gmax);
    inf_d3 = dmin;
}

double TensionField::max_normal_component(const DirectorField& d) const
{
    double worst = 0.0;
    for (std::size_t k = 0; k < d.grid().size(); ++k) {
        const double dot = g[0][k] * d[0][k] + g[1][k] * d[1][k] + g[2][k] * d[2][k];
        worst = std::max(worst, std::abs(dot));
    }
    return worst;
}

TensionField tension(const DirectorField& d)
{
    const DirectorGeometry geo(d);
    Vector3Field g(d.grid());
    for (int c = 0; c < 3; ++c)
        for (std::size_t k = 0; k < d.grid().size(); ++k) g[c][k] = geo.lap[c][k] + geo.grad_sq[k] * d[c][k];
    return TensionField{std::move(g)};
}

double sphere_identity_residual(const DirectorField& d) { return DirectorGeometry(d).identity_residual; }

double harmonic_energy(const DirectorField& d) { return DirectorGeometry(d).tension_sq; }

double coercivity_ratio(const DirectorGeometry& geometry)
{
    if (!(std::sqrt(geometry.lap_l2_sq) > laplacian_floor))
        throw DegenerateInput("coercivity_ratio: ||Lap d||_2 vanishes (constant map)");
    return geometry.grad_l4_4 / geometry.lap_l2_sq;
}

double coercivity_ratio(const DirectorField& d) { return coercivity_ratio(DirectorGeometry(d)); }

double angle_infimum(const DirectorField& d)
{
    const auto v = d.d3().values();
    return *std::min_element(v.begin(), v.end());
}

CoercivityReport coercivity_check(const DirectorField& d, double delta0)
{
    if (!(delta0 > 0.0 && delta0 < 1.0)) throw InvalidArgument("coercivity_check: delta0 must lie in (0,1)");
    const DirectorGeometry geo(d);
    const double rhs = 0.5 * delta0 * (geo.lap_l2_sq + geo.grad_l4_4);
    return {geo.tension_sq, rhs, geo.tension_sq >= rhs};
}

DirectorField rotate(const DirectorField& d, const std::array<std::array<double, 3>, 3>& r)
{
    const Grid2D& grid = d.grid();
    Vector3Field out(grid);
    for (std::size_t k = 0; k < grid.size(); ++k)
        for (int a = 0; a < 3; ++a)
            out[a][k] = r[a][0] * d[0][k] + r[a][1] * d[1][k] + r[a][2] * d[2][k];
    return DirectorField(out, tol_evolve);
}

}  // namespace lcflow
