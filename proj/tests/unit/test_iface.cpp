#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <cstring>

#include "helpers.hpp"
#include "lcflow/iface.hpp"
#include "lcflow/director.hpp"
#include "lcflow/norms.hpp"

using namespace lcflow;
namespace fs = std::filesystem;

namespace {

const std::string base = "system = liquid_crystal\n"
                         "grid.n = 32\n"
                         "grid.L = 5\n"
                         "scenario.name = hemisphere\n"
                         "scenario.epsilon0 = 0.5\n"
                         "run.t_end = 0.1\n";

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "lcflow_unit";
    fs::create_directories(dir);
    return dir / name;
}

std::string read_all(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

void write_all(const fs::path& p, const std::string& data)
{
    std::ofstream f(p, std::ios::binary);
    f << data;
}

std::string validation_key(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ValidationError& e) {
        return e.key();
    }
    return "";
}

int parse_line(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST_CASE("config parsing")
{
    const Config c = parse_config("# comment\n" + base + "step.cfl = 0.3   # trailing\nvelocity.energy = 1\n");
    CHECK(c.system == SystemKind::liquid_crystal);
    CHECK(c.n == 32);
    CHECK(c.L == 5.0);
    CHECK(c.scenario.kind == ScenarioKind::hemisphere);
    CHECK(c.scenario.epsilon0 == 0.5);
    CHECK(c.policy.cfl_number == 0.3);
    CHECK(c.policy.dt_min == doctest::Approx(1e-10));
    CHECK(c.scenario.velocity_energy == 1.0);
    CHECK(c.output_dir == ".");

    CHECK(parse_config(base + "step.dt_min = 1e-6\n").policy.dt_min == 1e-6);

    const SimState s = initial_state(c);
    CHECK(s.d.grid() == Grid2D(32, 5.0));
    CHECK(0.5 * std::pow(lp_norm(s.u, 2.0), 2) == doctest::Approx(1.0));
    CHECK(angle_infimum(s.d) >= 0.5);
    const RunConfig r = run_config(c);
    CHECK(r.t_end == 0.1);
    CHECK(r.policy.cfl_number == 0.3);
}

TEST_CASE("config errors")
{
    CHECK(validation_key(base + "grid.m = 3\n") == "grid.m");
    CHECK(validation_key(base + "scenario.peak_over_pi = 1\n") == "scenario.peak_over_pi");
    CHECK(validation_key(base + "step.cfl = 1.5\n") == "step.cfl");
    CHECK(validation_key(base + "step.cfl = abc\n") == "step.cfl");
    CHECK(validation_key("system = heat_flow\ngrid.n = 48\ngrid.L = 1\nscenario.name = equator\nrun.t_end = 1\n") ==
          "grid.n");
    CHECK(validation_key("system = heat_flow\ngrid.n = 32\ngrid.L = 1\nscenario.name = radial\nrun.t_end = 1\n") ==
          "scenario.peak_over_pi");
    CHECK(validation_key("system = liquid_crystal\ngrid.n = 32\ngrid.L = 1\nscenario.name = radial\n"
                         "scenario.peak_over_pi = 1\n") == "run.t_end");
    CHECK(validation_key("system = heat_flow\ngrid.n = 32\ngrid.L = 1\nscenario.name = taylor_green\nrun.t_end = 1\n") ==
          "scenario.name");

    CHECK(parse_line(base + "grid.n = 64\n") == 7);
    CHECK(parse_line(base + "step.cfl\n") == 7);
    CHECK(parse_line(base + "step.cfl =\n") == 7);
    try {
        parse_config(base + "\ngrid.L = 3\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("lines 3 and 8") != std::string::npos);
    }
    CHECK_THROWS_AS(load_config(scratch("missing.cfg").string() + ".nope"), IoError);
}

TEST_CASE("diagnostics csv")
{
    const auto& cols = diagnostics_columns();
    const std::vector<std::string> fixed = {"t", "E", "grad_u_sq", "tension_sq", "grad_d_L4_4", "lap_d_sq",
                                            "inf_d3", "d_minus_e3_sq", "int_u_L4_4", "int_grad_d_L4_4",
                                            "int_lap_d_sq", "int_grad_d_sq", "int_D", "energy_residual", "u_L4_4"};
    REQUIRE(cols.size() >= fixed.size());
    for (std::size_t k = 0; k < fixed.size(); ++k) CHECK(cols[k] == fixed[k]);

    const fs::path p = scratch("diag.csv");
    Trajectory t(2);
    t[0].t = 0.0;
    t[0].E = 1.0 / 3.0;
    t[0].inf_d3 = 0.5;
    t[0].max_grad_d = 7.25;
    t[1].t = 0.01;
    t[1].E = 0.3;
    t[1].energy_residual = -1e-300;
    t[1].sphere_drift = 3e-17;
    write_diagnostics(t, p.string());
    const Trajectory back = read_diagnostics(p.string());
    REQUIRE(back.size() == 2);
    CHECK(back[0].E == t[0].E);
    CHECK(back[0].max_grad_d == 7.25);
    CHECK(back[1].energy_residual == -1e-300);
    CHECK(back[1].sphere_drift == 3e-17);

    // a minimal two-line file with only the fixed columns
    std::string header, row;
    for (std::size_t k = 0; k < fixed.size(); ++k) {
        header += (k ? "," : "") + fixed[k];
        row += (k ? "," : "") + std::to_string(k);
    }
    write_all(p, header + "\n" + row + "\n");
    const Trajectory two = read_diagnostics(p.string());
    REQUIRE(two.size() == 1);
    CHECK(two[0].u_L4_4 == 14.0);
    CHECK(two[0].max_grad_d == 0.0);

    write_all(p, header + ",extra\n" + row + ",9\n");
    CHECK(read_diagnostics(p.string()).size() == 1);

    std::string swapped = header;
    swapped.replace(0, 3, "E,t");
    write_all(p, swapped + "\n" + row + "\n");
    CHECK_THROWS_AS(read_diagnostics(p.string()), ParseError);

    write_all(p, header + "\n" + row + "\n" + row + ",1\n");
    try {
        read_diagnostics(p.string());
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    write_all(p, header + "\n" + row.substr(0, row.size() - 2) + "x\n");
    CHECK_THROWS_AS(read_diagnostics(p.string()), ParseError);
}

TEST_CASE("snapshots")
{
    const Grid2D g(16, 3.0);
    const SimState s(0.25, divergence_free_velocity(4, 2, 1.0, g), hemisphere_random_data(0.4, 2, 1.0, 8, g).d);
    const fs::path p = scratch("state.hfld");
    write_snapshot(s, p.string());
    const std::string bytes = read_all(p);
    CHECK(bytes.size() == 32 + 5 * 8 * g.size());
    CHECK(bytes.substr(0, 4) == "HFLD");

    const SimState back = read_snapshot(p.string());
    CHECK(back.t == 0.25);
    CHECK(back.d.grid() == g);
    CHECK(testing::max_abs_diff(back.d, s.d) == 0.0);
    CHECK(testing::max_abs_diff(back.u[0], s.u[0]) == 0.0);
    CHECK(testing::max_abs_diff(back.u[1], s.u[1]) == 0.0);

    write_all(p, bytes.substr(0, bytes.size() - 8));
    CHECK_THROWS_AS(read_snapshot(p.string()), IoError);
    write_all(p, bytes.substr(0, 20));
    CHECK_THROWS_AS(read_snapshot(p.string()), IoError);

    std::string bad = bytes;
    bad[0] = 'X';
    write_all(p, bad);
    CHECK_THROWS_AS(read_snapshot(p.string()), BadMagic);

    bad = bytes;
    bad[4] = 2;
    write_all(p, bad);
    CHECK_THROWS_AS(read_snapshot(p.string()), VersionMismatch);

    // push the first d3 sample off the sphere
    bad = bytes;
    const std::size_t at = 32 + 4 * 8 * g.size();
    const double off = 2.0;
    std::memcpy(&bad[at], &off, 8);
    write_all(p, bad);
    CHECK_THROWS_AS(read_snapshot(p.string()), InvariantViolation);
}

TEST_CASE("resume through snapshot and csv reproduces an uninterrupted run")
{
    Config c = parse_config(base + "velocity.energy = 1\nrun.record_interval = 0.01\n");
    const SimState s0 = initial_state(c);
    RunConfig full = run_config(c);
    full.t_end = 0.06;
    const RunResult whole = run(s0, full);

    RunConfig first = full;
    first.t_end = 0.03;
    const RunResult a = run(s0, first);
    const fs::path snap = scratch("resume.hfld"), csv = scratch("resume.csv");
    write_snapshot(*a.final_state, snap.string());
    write_diagnostics(a.records, csv.string());
    const RunResult b = run(read_snapshot(snap.string()), full, read_diagnostics(csv.string()));

    REQUIRE(b.records.size() == whole.records.size());
    const auto& x = whole.records.back();
    const auto& y = b.records.back();
    CHECK(y.t == x.t);
    CHECK(std::abs(y.E - x.E) <= 1e-12 * x.E);
    CHECK(std::abs(y.int_D - x.int_D) <= 1e-12 * x.int_D);
    CHECK(std::abs(y.int_lap_d_sq - x.int_lap_d_sq) <= 1e-12 * x.int_lap_d_sq);
    CHECK(testing::max_abs_diff(b.final_state->d, whole.final_state->d) <= 1e-12);
}

TEST_CASE("energy spectrum sums to the energy")
{
    const Grid2D g(32, 5.0);
    const SimState s(0.0, divergence_free_velocity(4, 3, 2.0, g), hemisphere_random_data(0.4, 3, 1.0, 8, g).d);
    const auto bins = energy_spectrum(s);
    CHECK(bins.size() == static_cast<std::size_t>(std::lround(32 / std::sqrt(2.0)) + 1));
    double u = 0.0, d = 0.0;
    for (const auto& b : bins) {
        u += b.u_energy;
        d += b.grad_d_energy;
    }
    const DiagnosticsRecord r = record(s, 0.0, std::nullopt);
    CHECK(u == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(u + d == doctest::Approx(r.E).epsilon(1e-6));
    CHECK(bins[0].u_energy == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(bins[4].frequency == doctest::Approx(2 * M_PI * 4 / 5.0));
}

TEST_CASE("check suites")
{
    CHECK(check_suites().size() == 4);
    for (const auto& line : run_check_suite("spectral")) CHECK_MESSAGE(line.pass, line.name << ": " << line.detail);
    CHECK_THROWS_AS(run_check_suite("nope"), InvalidArgument);
}
