#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "lcflow/iface.hpp"
#include "lcflow/rigidity.hpp"

namespace fs = std::filesystem;
using namespace lcflow;

namespace {

int simulate(const std::string& config_path, const std::string& resume)
{
    const Config cfg = load_config(config_path);
    fs::create_directories(cfg.output_dir);
    const fs::path out(cfg.output_dir);
    const std::string csv = (out / "diagnostics.csv").string();

    SimState start = resume.empty() ? initial_state(cfg) : read_snapshot(resume);
    if (!(start.d.grid() == config_grid(cfg))) throw InvalidArgument("snapshot grid differs from the config grid");
    Trajectory history;
    if (!resume.empty()) {
        if (!fs::exists(csv)) throw IoError("resume needs " + csv + " for the running integrals");
        for (const auto& r : read_diagnostics(csv)) {
            if (r.t > start.t) break;
            history.push_back(r);
        }
        if (history.empty() || history.back().t != start.t)
            throw InvalidArgument("no diagnostics record at the snapshot time");
    }

    RunConfig rc = run_config(cfg);
    long next_snapshot = cfg.snapshot_interval > 0.0 ? std::lround(std::floor(start.t / cfg.snapshot_interval)) + 1 : 0;
    rc.on_record = [&](const SimState& s, const DiagnosticsRecord&) {
        if (cfg.snapshot_interval <= 0.0) return;
        if (s.t + 1e-12 * cfg.snapshot_interval < next_snapshot * cfg.snapshot_interval) return;
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%06ld.hfld", next_snapshot);
        write_snapshot(s, (out / name).string());
        next_snapshot = std::lround(std::floor(s.t / cfg.snapshot_interval + 1e-9)) + 1;
    };

    const RunResult r = run(start, rc, history);
    write_diagnostics(r.records, csv);
    write_snapshot(*r.final_state, (out / "final.hfld").string());

    const auto& first = r.records.front();
    const auto& last = r.records.back();
    std::printf("status %s%s%s\n", to_string(r.status).c_str(), r.reason.empty() ? "" : ": ", r.reason.c_str());
    std::printf("t %.6g  steps %d  E %.6g -> %.6g  energy_residual %.3e\n", last.t, r.steps, first.E, last.E,
                last.energy_residual);
    const auto mp = max_principle_check(r.records, cfg.max_principle_tolerance);
    if (mp.applicable)
        std::printf("max principle %s: inf d3 %.6f -> min %.6f\n", mp.holds ? "holds" : "violated", mp.initial_inf_d3,
                    mp.min_inf_d3);
    const auto b = blowup_monitor(r.records, cfg.growth_factor);
    const char* verdict = r.status == RunStatus::blowup_detected ? "blowup" : b.global_like ? "global-like" : "not settled";
    std::printf("verdict %s  gradient growth %.3g\n", verdict, b.gradient_growth);

    switch (r.status) {
    case RunStatus::completed: return 0;
    case RunStatus::blowup_detected: return 2;
    case RunStatus::aborted: return 1;
    }
    return 1;
}

int rigidity(double eps0, double c0, int n, double L, int starts, std::uint64_t seed, int iterations,
             const std::string& out)
{
    OptimizerSettings opt;
    opt.starts = starts;
    opt.seed = seed;
    opt.max_iterations = iterations;
    const RigidityProblem pb(eps0, c0, Grid2D(n, L), opt);
    const RigidityResult r = estimate_delta0(pb);
    char row[256];
    std::snprintf(row, sizeof row, "%.17g,%.17g,%d,%.17g,%.17g,%.17g,%d,%d,%.17g\n", eps0, c0, n, L, r.best_ratio,
                  r.delta0_estimate, starts, r.iterations, r.max_feasible_iterate_ratio);
    const char* header = "epsilon0,C0,n,L,best_ratio,delta0_estimate,starts,iterations,max_feasible_iterate_ratio\n";
    if (out.empty()) {
        std::cout << header << row;
    } else {
        const bool fresh = !fs::exists(out);
        std::FILE* f = std::fopen(out.c_str(), "a");
        if (!f) throw IoError("cannot write " + out);
        if (fresh) std::fputs(header, f);
        std::fputs(row, f);
        std::fclose(f);
    }
    return 0;
}

int check(const std::string& suite)
{
    std::vector<std::string> names = suite.empty() ? check_suites() : std::vector<std::string>{suite};
    bool all = true;
    for (const auto& name : names)
        for (const auto& line : run_check_suite(name)) {
            all = all && line.pass;
            std::printf("%s %s/%s: %s\n", line.pass ? "PASS" : "FAIL", name.c_str(), line.name.c_str(),
                        line.detail.c_str());
        }
    return all ? 0 : 1;
}

int spectrum(const std::string& snapshot, const std::string& out)
{
    write_spectrum(energy_spectrum(read_snapshot(snapshot)), out);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Liquid crystal flow and harmonic map heat flow on the periodic square"};
    app.require_subcommand(1);

    std::string config_path, resume;
    auto* sim = app.add_subcommand("simulate", "Run a configured simulation");
    sim->add_option("--config", config_path, "Config file")->required();
    sim->add_option("--resume", resume, "Snapshot to continue from");

    double eps0 = 0.5, c0 = 5.0, L = 2 * M_PI;
    int n = 64, starts = 6, iterations = 150;
    std::uint64_t seed = 1;
    std::string rig_out;
    auto* rig = app.add_subcommand("rigidity", "Estimate the coercivity gap for one constraint pair");
    rig->add_option("--epsilon0", eps0)->required();
    rig->add_option("--c0", c0)->required();
    rig->add_option("--grid-n", n);
    rig->add_option("--length", L);
    rig->add_option("--starts", starts);
    rig->add_option("--seed", seed);
    rig->add_option("--iterations", iterations);
    rig->add_option("--out", rig_out, "Append the row to this CSV");

    std::string suite;
    auto* chk = app.add_subcommand("check", "Run property suites");
    chk->add_option("--suite", suite)->check(CLI::IsMember(check_suites()));

    std::string snap, spec_out;
    auto* spec = app.add_subcommand("spectrum", "Shell-binned spectra of a snapshot");
    spec->add_option("--snapshot", snap)->required();
    spec->add_option("--out", spec_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*sim) return simulate(config_path, resume);
        if (*rig) return rigidity(eps0, c0, n, L, starts, seed, iterations, rig_out);
        if (*chk) return check(suite);
        if (*spec) return spectrum(snap, spec_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return 1;
}
