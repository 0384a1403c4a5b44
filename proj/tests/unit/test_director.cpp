#include <doctest.h>

#include "helpers.hpp"
#include "lcflow/director.hpp"
#include "lcflow/norms.hpp"
#include "lcflow/spectral.hpp"

using namespace lcflow;

namespace {

DirectorField perturbed(const Grid2D& g, double a)
{
    const double w = 2 * M_PI / g.length();
    Vector3Field v(g);
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j) {
            const double x = i * g.spacing(), y = j * g.spacing();
            v[0](i, j) = a * std::sin(w * x) * std::cos(w * y);
            v[1](i, j) = a * std::cos(2 * w * x + 0.3);
            v[2](i, j) = 1.0 + a * std::sin(w * (x + y));
        }
    return normalize(v);
}

std::array<std::array<double, 3>, 3> rotation(double a, double b)
{
    const double ca = std::cos(a), sa = std::sin(a), cb = std::cos(b), sb = std::sin(b);
    return {{{ca, -sa * cb, sa * sb}, {sa, ca * cb, -ca * sb}, {0.0, sb, cb}}};
}

}  // namespace

TEST_CASE("tension of constant and equator maps")
{
    const Grid2D g(64, 2 * M_PI);
    const DirectorField c = DirectorField::constant(g);
    const TensionField tc = tension(c);
    for (int k = 0; k < 3; ++k) CHECK(testing::max_abs(tc.g[k]) == 0.0);
    CHECK(harmonic_energy(c) == 0.0);
    CHECK(sphere_identity_residual(c) == 0.0);

    const DirectorField e = equator_map(3, g);
    const TensionField te = tension(e);
    for (int k = 0; k < 3; ++k) CHECK(testing::max_abs(te.g[k]) <= 1e-10);
    CHECK(sphere_identity_residual(e) <= 1e-10);
    CHECK(harmonic_energy(e) <= 1e-18);
    CHECK(coercivity_ratio(e) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(angle_infimum(e) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(angle_infimum(c) == 1.0);
    CHECK_THROWS_AS(coercivity_ratio(c), DegenerateInput);
}

TEST_CASE("tension is tangent")
{
    const Grid2D g(64, 2 * M_PI);
    const DirectorField d = perturbed(g, 0.2);
    CHECK(tension(d).max_normal_component(d) <= 1e-6);
}

TEST_CASE("sphere identity on a smooth field")
{
    const Grid2D g(64, 2 * M_PI);
    const DirectorField d = perturbed(g, 0.2);
    const DirectorGeometry geo(d);
    CHECK(std::abs(harmonic_energy(d) - (geo.lap_l2_sq - geo.grad_l4_4)) <= 1e-8 * geo.lap_l2_sq);
    CHECK(geo.tension_sq == doctest::Approx(harmonic_energy(d)).epsilon(1e-14));
}

TEST_CASE("sphere identity residual shrinks under refinement")
{
    double r[2];
    for (int q = 0; q < 2; ++q) r[q] = sphere_identity_residual(perturbed(Grid2D(16 << q, 2 * M_PI), 0.6));
    CHECK(r[0] > 0.0);
    CHECK(r[1] <= r[0] / 4);
}

TEST_CASE("coercivity ratio of a perturbed pole")
{
    const Grid2D g(128, 2 * M_PI);
    const DirectorField d = perturbed(g, 0.2);
    const double ratio = coercivity_ratio(d);
    CHECK(ratio > 0.0);
    CHECK(ratio < 1.0);

    // Centered-difference oracle for both norms on the same samples.
    const int n = g.n();
    const double h = g.spacing();
    double l4 = 0.0, lap = 0.0;
    const auto at = [&](int c, int i, int j) { return d[c]((i + n) % n, (j + n) % n); };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double gs = 0.0, ls = 0.0;
            for (int c = 0; c < 3; ++c) {
                const double dx = (at(c, i + 1, j) - at(c, i - 1, j)) / (2 * h);
                const double dy = (at(c, i, j + 1) - at(c, i, j - 1)) / (2 * h);
                const double lp = (at(c, i + 1, j) + at(c, i - 1, j) + at(c, i, j + 1) + at(c, i, j - 1) - 4 * at(c, i, j)) / (h * h);
                gs += dx * dx + dy * dy;
                ls += lp * lp;
            }
            l4 += gs * gs;
            lap += ls;
        }
    const DirectorGeometry geo(d);
    CHECK(h * h * l4 == doctest::Approx(geo.grad_l4_4).epsilon(1e-2));
    CHECK(h * h * lap == doctest::Approx(geo.lap_l2_sq).epsilon(1e-2));
}

TEST_CASE("coercivity check")
{
    const Grid2D g(64, 2 * M_PI);
    const auto c = coercivity_check(DirectorField::constant(g), 0.3);
    CHECK(c.lhs == 0.0);
    CHECK(c.rhs == 0.0);
    CHECK(c.holds);
    CHECK_FALSE(coercivity_check(equator_map(1, g), 0.1).holds);
    const DirectorField d = perturbed(g, 0.2);
    CHECK(coercivity_check(d, 1.0 - coercivity_ratio(d)).holds);
    CHECK_THROWS_AS(coercivity_check(d, 0.0), InvalidArgument);
    CHECK_THROWS_AS(coercivity_check(d, 1.0), InvalidArgument);
}

TEST_CASE("rotation and antipodal invariance")
{
    const Grid2D g(64, 2 * M_PI);
    const DirectorField d = perturbed(g, 0.4);
    const DirectorField r = rotate(d, rotation(0.7, 1.1));
    CHECK(std::abs(harmonic_energy(r) - harmonic_energy(d)) <= 1e-12 * harmonic_energy(d));
    CHECK(std::abs(coercivity_ratio(r) - coercivity_ratio(d)) <= 1e-12);
    const DirectorGeometry a(d), b(r);
    CHECK(std::abs(a.grad_l2_sq - b.grad_l2_sq) <= 1e-12 * a.grad_l2_sq);
    CHECK(std::abs(a.grad_l4_4 - b.grad_l4_4) <= 1e-12 * a.grad_l4_4);
    CHECK(angle_infimum(r) != doctest::Approx(angle_infimum(d)));

    const DirectorField m(-1.0 * d[0], -1.0 * d[1], -1.0 * d[2]);
    CHECK(std::abs(coercivity_ratio(m) - coercivity_ratio(d)) <= 1e-14);
}

TEST_CASE("ratio is scale invariant")
{
    const Grid2D g(64, 2 * M_PI), s(64, 2 * M_PI / 3.0);
    const DirectorField d = perturbed(g, 0.3);
    const DirectorField e(ScalarField(s, d[0].values()), ScalarField(s, d[1].values()), ScalarField(s, d[2].values()));
    CHECK(std::abs(coercivity_ratio(d) - coercivity_ratio(e)) <= 1e-8);
}
