#include <doctest.h>

#include "helpers.hpp"
#include "lcflow/diagnostics.hpp"
#include "lcflow/director.hpp"
#include "lcflow/dynamics.hpp"

using namespace lcflow;

namespace {

DiagnosticsRecord rec(double t, double inf_d3)
{
    DiagnosticsRecord r;
    r.t = t;
    r.inf_d3 = inf_d3;
    return r;
}

}  // namespace

TEST_CASE("record of closed-form states")
{
    const double L = 2 * M_PI, A = 0.7;
    const Grid2D g(32, L);
    const int m = 2;
    const double k = 2 * M_PI * m / L;
    const SimState s(0.0, taylor_green_velocity(A, 1, g), equator_map(m, g));
    const DiagnosticsRecord r = record(s, 0.0, std::nullopt);

    const double area = L * L;
    CHECK(r.u_L2_sq == doctest::Approx(A * A * area / 2).epsilon(1e-12));
    CHECK(r.grad_u_sq == doctest::Approx(A * A * area).epsilon(1e-12));
    CHECK(r.grad_d_sq() == doctest::Approx(k * k * area).epsilon(1e-12));
    CHECK(r.E == doctest::Approx(0.5 * (A * A * area / 2 + k * k * area)).epsilon(1e-12));
    CHECK(r.lap_d_sq == doctest::Approx(std::pow(k, 4) * area).epsilon(1e-12));
    CHECK(r.grad_d_L4_4 == doctest::Approx(std::pow(k, 4) * area).epsilon(1e-12));
    CHECK(r.tension_sq <= 1e-20 * r.lap_d_sq);
    CHECK(std::abs(r.inf_d3) <= 1e-15);
    CHECK(r.d_minus_e3_sq == doctest::Approx(2 * area).epsilon(1e-12));
    CHECK(r.max_grad_d == doctest::Approx(k).epsilon(1e-12));
    CHECK(r.energy_residual == 0.0);
    CHECK(r.int_D == 0.0);

    // |u|^4 summed directly on the lattice
    double u4 = 0.0;
    for (std::size_t q = 0; q < g.size(); ++q) {
        const double a = s.u[0][q], b = s.u[1][q];
        u4 += (a * a + b * b) * (a * a + b * b) * g.cell_area();
    }
    CHECK(r.u_L4_4 == doctest::Approx(u4).epsilon(1e-12));
    CHECK(r.u_L4_4 == doctest::Approx(A * A * A * A * area * 5.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("record integrals use left endpoints")
{
    const Grid2D g(32, 2 * M_PI);
    const SimState s0(0.0, taylor_green_velocity(1.0, 1, g), equator_map(1, g));
    const DiagnosticsRecord r0 = record(s0, 0.0, std::nullopt);
    const SimState s1(0.1, taylor_green_velocity(0.5, 1, g), equator_map(2, g));
    const DiagnosticsRecord r1 = record(s1, 0.1, r0);
    CHECK(r1.int_D == doctest::Approx(0.1 * r0.dissipation()));
    CHECK(r1.int_u_L4_4 == doctest::Approx(0.1 * r0.u_L4_4));
    CHECK(r1.int_grad_d_L4_4 == doctest::Approx(0.1 * r0.grad_d_L4_4));
    CHECK(r1.int_lap_d_sq == doctest::Approx(0.1 * r0.lap_d_sq));
    CHECK(r1.int_grad_d_sq == doctest::Approx(0.1 * r0.grad_d_sq()));
    CHECK(r1.int_grad_u_sq == doctest::Approx(0.1 * r0.grad_u_sq));
    CHECK(r1.energy_residual == doctest::Approx(r1.E + r1.int_D - r0.E));
}

TEST_CASE("record with cached spectra matches the plain call")
{
    const Grid2D g(32, 5.0);
    const SimState s(0.0, divergence_free_velocity(3, 2, 1.0, g), hemisphere_random_data(0.3, 2, 1.0, 9, g).d);
    Stepper st(g);
    const DiagnosticsRecord a = st.observe(s, 0.0, std::nullopt);
    const DiagnosticsRecord b = record(s, 0.0, std::nullopt);
    CHECK(a.E == doctest::Approx(b.E).epsilon(1e-14));
    CHECK(a.tension_sq == doctest::Approx(b.tension_sq).epsilon(1e-12));
    CHECK(a.grad_d_L4_4 == doctest::Approx(b.grad_d_L4_4).epsilon(1e-14));
    CHECK(a.u_L4_4 == doctest::Approx(b.u_L4_4).epsilon(1e-14));
}

TEST_CASE("maximum principle check")
{
    const Trajectory up = {rec(0, 0.5), rec(1, 0.6), rec(2, 0.7)};
    auto r = max_principle_check(up);
    CHECK(r.applicable);
    CHECK(r.holds);
    CHECK(r.min_inf_d3 == 0.5);

    const Trajectory dip = {rec(0, 0.5), rec(1, 0.5 - 5e-5), rec(2, 0.4)};
    r = max_principle_check(dip);
    CHECK_FALSE(r.holds);
    CHECK(r.min_inf_d3 == 0.4);
    CHECK(max_principle_check({rec(0, 0.5), rec(1, 0.5 - 5e-5)}).holds);

    r = max_principle_check({rec(0, 0.0), rec(1, 0.3)});
    CHECK_FALSE(r.applicable);
    CHECK_FALSE(r.holds);
}

TEST_CASE("gronwall check")
{
    Trajectory t(3);
    t[0].d_minus_e3_sq = 1.0;
    t[1].d_minus_e3_sq = 0.5;
    t[1].int_grad_d_sq = 0.6;
    t[1].int_lap_d_sq = std::log(2.0);
    t[2].d_minus_e3_sq = 0.2;
    t[2].int_grad_d_sq = 2.0;
    t[2].int_lap_d_sq = std::log(4.0);
    const auto r = gronwall_check(t);
    CHECK(r.lhs_max == doctest::Approx(2.2));
    CHECK(r.ratio_max == doctest::Approx(1.0));
    CHECK(r.bound == doctest::Approx(1.0));

    Trajectory z(2);
    CHECK(gronwall_check(z).ratio_max == 0.0);
}

TEST_CASE("blowup monitor")
{
    Trajectory plateau;
    for (int k = 0; k <= 10; ++k) {
        DiagnosticsRecord r = rec(0.1 * k, 1.0);
        const double v = 1.0 - std::exp(-20.0 * r.t);
        r.int_grad_d_L4_4 = r.int_u_L4_4 = r.int_lap_d_sq = r.int_grad_d_sq = v;
        r.max_grad_d = 1.0 + r.t;
        plateau.push_back(r);
    }
    auto b = blowup_monitor(plateau);
    CHECK(b.global_like);
    CHECK(b.gradient_growth == doctest::Approx(2.0));
    CHECK(b.growth_lap_d_sq < 0.01);
    CHECK_FALSE(blowup_monitor(plateau, 1.5).global_like);

    Trajectory linear = plateau;
    for (auto& r : linear) r.int_lap_d_sq = r.t;
    b = blowup_monitor(linear);
    CHECK_FALSE(b.global_like);
    CHECK(b.growth_lap_d_sq == doctest::Approx(0.2));
}

TEST_CASE("coercivity tracker and L4 chain")
{
    Trajectory t(3);
    t[0].lap_d_sq = 4.0;
    t[0].grad_d_L4_4 = 1.0;
    t[1].lap_d_sq = 0.0;
    t[2].lap_d_sq = 2.0;
    t[2].grad_d_L4_4 = 1.0;
    const auto c = coercivity_tracker(t);
    CHECK(c.used == 2);
    CHECK(c.min_gap == doctest::Approx(0.5));
    CHECK(coercivity_tracker(Trajectory(2)).empty());

    Trajectory u(2);
    u[0].u_L2_sq = 2.0;
    u[1].u_L2_sq = 1.0;
    u[1].int_u_L4_4 = 3.0;
    u[1].int_grad_u_sq = 1.0;
    const auto l = l4_chain_check(u, std::pow(2.0, 0.25));
    CHECK(l.rhs == doctest::Approx(4.0));
    CHECK(l.holds);
    CHECK_FALSE(l4_chain_check(u, 1.0).holds);
}
