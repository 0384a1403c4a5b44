#pragma once

#include <array>
#include <cstdint>

#include "lcflow/fields.hpp"

namespace lcflow {

/// Stateless counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so fields do not depend on evaluation order.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const noexcept;
    /// Uniform in [0, 1).
    double uniform(std::uint64_t stream, std::uint64_t counter) const noexcept;
    /// Standard normal (Box-Muller on counters 2k, 2k+1).
    double normal(std::uint64_t stream, std::uint64_t counter) const noexcept;

private:
    std::uint64_t seed_;
};

/// Real trigonometric polynomial with modes 0 < |k| <= max_mode drawn from
/// the seeded generator, scaled to unit root-mean-square. The function is
/// fixed by (seed, stream, max_mode, L); refining n samples the same function.
/// Requires 1 <= max_mode < n/2.
ScalarField band_limited_field(const Grid2D& grid, std::uint64_t seed, std::uint64_t stream, int max_mode);

/// psi0(r) = A (1 - exp(-(r/w)^2)) exp(-(r/R_cut)^4).
struct RadialProfile {
    double amplitude;
    double width;
    double r_cut;

    /// Throws InvalidArgument unless width > 0 and r_cut > 0.
    RadialProfile(double amplitude, double width, double r_cut);
    /// Profile whose supremum equals `peak`.
    static RadialProfile with_peak(double peak, double width, double r_cut);

    double operator()(double r) const noexcept;
    /// sup_r psi0(r), located by dense sampling plus golden-section refinement.
    double peak() const;
};

/// d0 = (x1/r sin psi0, x2/r sin psi0, cos psi0) about `center`, with
/// minimal-image displacements on the torus and d0(center) = e3.
DirectorField radial_data(const RadialProfile& profile, std::array<double, 2> center, const Grid2D& grid);

struct HemisphereData {
    DirectorField d;
    double amplitude;  ///< achieved amplitude a
    double inf_d3;
    double grad_l2;    ///< ||grad d0||_2
};

/// normalize(e3 + a w) for a seeded band-limited 3-vector field w, with a the
/// largest amplitude <= `amplitude` (found by bisection) keeping inf d3 >= epsilon0.
HemisphereData hemisphere_random_data(double epsilon0, int roughness, double amplitude, std::uint64_t seed,
                                      const Grid2D& grid);

/// Stream function curl (-d2 psi, d1 psi) of a seeded band-limited psi,
/// rescaled so that (1/2)||u||_2^2 = energy.
VectorField2 divergence_free_velocity(std::uint64_t seed, int max_mode, double energy, const Grid2D& grid);

/// u = A (sin(k x1) cos(k x2), -cos(k x1) sin(k x2)), k = 2 pi mode / L.
VectorField2 taylor_green_velocity(double amplitude, int mode, const Grid2D& grid);

/// d = (cos(2 pi m x1 / L), sin(2 pi m x1 / L), 0), a harmonic map with d3 = 0.
DirectorField equator_map(int mode, const Grid2D& grid);

struct BubbleData {
    DirectorField d;
    double grad_l2_sq;  ///< ||grad d||_2^2, tends to 8 pi as L/s grows
};

/// Degree-one harmonic map (2 s x, |x|^2 - s^2) / (|x|^2 + s^2) about
/// `center`, written as the inverse stereographic image of z = s x / |x|^2.
/// z is multiplied by a smooth cutoff that is 1 for r <= blend_start * L and
/// 0 for r >= blend_end * L, so the map equals e3 near the torus boundary.
BubbleData stereographic_bubble(double scale, std::array<double, 2> center, const Grid2D& grid,
                                double blend_start = 0.1, double blend_end = 0.5);

/// Smooth step: 0 for t <= 0, 1 for t >= 1, C-infinity in between.
double smooth_step(double t) noexcept;

}  // namespace lcflow
