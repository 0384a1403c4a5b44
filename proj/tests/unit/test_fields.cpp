#include <doctest.h>

#include "helpers.hpp"
#include "lcflow/spectral.hpp"

using namespace lcflow;

TEST_CASE("grid construction")
{
    const Grid2D a = new_grid(64, 2 * M_PI * 10);
    CHECK(a.spacing() == doctest::Approx(20 * M_PI / 64).epsilon(1e-15));
    CHECK(new_grid(8, 1.0).spacing() == 0.125);
    CHECK_THROWS_AS(new_grid(65, 1.0), InvalidArgument);
    CHECK_THROWS_AS(new_grid(4, 1.0), InvalidArgument);
    CHECK_THROWS_AS(new_grid(64, 0.0), InvalidArgument);
    CHECK_THROWS_AS(new_grid(64, -1.0), InvalidArgument);
}

TEST_CASE("normalize")
{
    const Grid2D g(8, 1.0);
    Vector3Field raw(g);
    for (std::size_t k = 0; k < g.size(); ++k) raw[2][k] = 2.0;
    const DirectorField d = normalize(raw);
    for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(d[0][k] == 0.0);
        CHECK(d[2][k] == 1.0);
    }

    Vector3Field v(testing::noise(g, 1, 0), testing::noise(g, 1, 1), testing::noise(g, 1, 2));
    for (std::size_t k = 0; k < g.size(); ++k) v[2][k] += 3.0;
    const DirectorField once = normalize(v);
    const DirectorField twice = normalize(once.raw());
    CHECK(testing::max_abs_diff(once, twice) <= tol_unit);
    CHECK(once.max_unit_defect() <= 1e-15);

    raw[2][5] = 0.0;
    CHECK_THROWS_AS(normalize(raw), DegenerateDirector);
}

TEST_CASE("director invariant enforced on construction")
{
    const Grid2D g(8, 1.0);
    ScalarField one(g, 1.0), zero(g);
    CHECK_NOTHROW(DirectorField(zero, zero, one));
    ScalarField off(g, 1.0);
    off[3] = 1.0 + 1e-8;
    CHECK_THROWS_AS(DirectorField(zero, zero, off), InvariantViolation);
    CHECK_NOTHROW(DirectorField(zero, zero, off, tol_evolve));
}

TEST_CASE("real fields have Hermitian coefficients")
{
    const Grid2D g(16, 3.0);
    CHECK(to_spectral(testing::noise(g, 4)).hermitian_defect() <= 1e-15);
}
