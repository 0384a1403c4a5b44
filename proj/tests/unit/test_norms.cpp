#include <doctest.h>

#include "helpers.hpp"
#include "lcflow/norms.hpp"
#include "lcflow/spectral.hpp"

using namespace lcflow;

TEST_CASE("Lebesgue norms")
{
    const double L = 3.7;
    const Grid2D g(32, L);
    CHECK(lp_norm(ScalarField(g, 1.0), 2.0) == doctest::Approx(L).epsilon(1e-15));
    const ScalarField s = sample(g, [&](double x, double) { return std::sin(2 * M_PI * x / L); });
    CHECK(std::abs(lp_norm(s, 2.0) - L / std::sqrt(2.0)) <= 1e-12);
    const ScalarField f = testing::noise(g, 2);
    CHECK(lp_norm(f, INFINITY) == testing::max_abs(f));
    CHECK_THROWS_AS(lp_norm(f, 0.5), InvalidArgument);

    const double lhs = lp_norm(f, 2.0);
    CHECK(lhs <= std::sqrt(lp_norm(f, 1.0) * lp_norm(f, INFINITY)));

    const VectorField2 v(s, s);
    CHECK(lp_norm(v, 2.0) == doctest::Approx(L).epsilon(1e-12));
}

TEST_CASE("Sobolev norms")
{
    const Grid2D g(32, 5.0);
    const ScalarField p = testing::plane_wave(g, 2, 1, 0.2);
    CHECK(std::abs(sobolev_norm(p, 1.0) - lp_norm(gradient(p), 2.0)) <= 1e-12 * sobolev_norm(p, 1.0));
    const ScalarField f = testing::noise(g, 3);
    CHECK(std::abs(sobolev_norm(f, 2.0) - lp_norm(laplacian(f), 2.0)) <= 1e-12 * sobolev_norm(f, 2.0));
    CHECK(sobolev_norm(ScalarField(g), 1.0) == 0.0);
    CHECK_THROWS_AS(sobolev_norm(f, 0.0), InvalidArgument);
}

TEST_CASE("Gagliardo-Nirenberg ratio")
{
    const Grid2D g(64, 2 * M_PI);
    CHECK_THROWS_AS(gn_check(ScalarField(g)), DegenerateInput);
    CHECK_THROWS_AS(gn_check(ScalarField(g, 1.0)), DegenerateInput);
    double largest = 0.0, smallest = 1e9;
    for (int k = 1; k < 20; ++k) {
        const double r = gn_check(testing::plane_wave(g, k, 0)).ratio;
        largest = std::max(largest, r);
        smallest = std::min(smallest, r);
    }
    CHECK(largest <= 1.0);
    CHECK(smallest > 0.0);
    const auto v = gn_check(VectorField2(testing::plane_wave(g, 1, 2), testing::plane_wave(g, 2, 1)));
    CHECK(v.ratio > 0.0);
    CHECK(v.ratio < 1.0);
}

TEST_CASE("space-time accumulator")
{
    CHECK(accumulate(SpaceTimeAccumulator{}, 0.1, 2.0).total() == doctest::Approx(0.2).epsilon(1e-15));
    SpaceTimeAccumulator a;
    for (int k = 0; k < 8; ++k) a.add(0.125, 3.0);
    CHECK(a.total() == 3.0);
    CHECK(a.steps() == 8);

    SpaceTimeAccumulator whole, halves;
    whole.add(0.5, 1.7);
    halves.add(0.25, 1.7).add(0.25, 1.7);
    CHECK(whole.total() == halves.total());

    SpaceTimeAccumulator z;
    z.add(0.1, 0.0);
    CHECK(z.total() == 0.0);
    CHECK_THROWS_AS(z.add(-0.1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(z.add(0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(z.add(0.1, -1.0), InvalidArgument);
}
