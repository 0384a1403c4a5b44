#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "lcflow/iface.hpp"
#include "lcflow/scenarios.hpp"

namespace lcflow {

std::string to_string(ScenarioKind k)
{
    switch (k) {
    case ScenarioKind::hemisphere: return "hemisphere";
    case ScenarioKind::radial: return "radial";
    case ScenarioKind::bubble: return "bubble";
    case ScenarioKind::equator: return "equator";
    case ScenarioKind::taylor_green: return "taylor_green";
    }
    return "unknown";
}

namespace {

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(x))
        throw ValidationError("not a finite number: '" + v + "'", key);
    return x;
}

long long to_integer(const std::string& key, const std::string& v)
{
    errno = 0;
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0' || errno == ERANGE) throw ValidationError("not an integer: '" + v + "'", key);
    return x;
}

int to_int(const std::string& key, const std::string& v)
{
    const long long x = to_integer(key, v);
    if (x < -1000000000LL || x > 1000000000LL) throw ValidationError("integer out of range", key);
    return static_cast<int>(x);
}

std::uint64_t to_seed(const std::string& key, const std::string& v)
{
    const long long x = to_integer(key, v);
    if (x < 0) throw ValidationError("seed must be nonnegative", key);
    return static_cast<std::uint64_t>(x);
}

using Setter = std::function<void(Config&, const std::string& key, const std::string& value)>;

struct KeySpec {
    Setter set;
    std::set<ScenarioKind> scenarios;  ///< empty: valid for every scenario
};

const std::map<std::string, KeySpec>& key_table()
{
    using K = ScenarioKind;
    static const std::map<std::string, KeySpec> table = {
        {"system",
         {[](Config& c, const std::string& k, const std::string& v) {
              if (v == "liquid_crystal") c.system = SystemKind::liquid_crystal;
              else if (v == "heat_flow") c.system = SystemKind::heat_flow;
              else throw ValidationError("expected liquid_crystal or heat_flow", k);
          },
          {}}},
        {"grid.n", {[](Config& c, const std::string& k, const std::string& v) { c.n = to_int(k, v); }, {}}},
        {"grid.L", {[](Config& c, const std::string& k, const std::string& v) { c.L = to_double(k, v); }, {}}},
        {"scenario.name",
         {[](Config& c, const std::string& k, const std::string& v) {
              static const std::map<std::string, K> names = {{"hemisphere", K::hemisphere},
                                                             {"radial", K::radial},
                                                             {"bubble", K::bubble},
                                                             {"equator", K::equator},
                                                             {"taylor_green", K::taylor_green}};
              const auto it = names.find(v);
              if (it == names.end()) throw ValidationError("unknown scenario '" + v + "'", k);
              c.scenario.kind = it->second;
          },
          {}}},
        {"scenario.epsilon0",
         {[](Config& c, const std::string& k, const std::string& v) { c.scenario.epsilon0 = to_double(k, v); },
          {K::hemisphere}}},
        {"scenario.roughness",
         {[](Config& c, const std::string& k, const std::string& v) { c.scenario.roughness = to_int(k, v); },
          {K::hemisphere}}},
        {"scenario.amplitude",
         {[](Config& c, const std::string& k, const std::string& v) { c.scenario.amplitude = to_double(k, v); },
          {K::hemisphere}}},
        {"scenario.seed",
         {[](Config& c, const std::string& k, const std::string& v) { c.scenario.seed = to_seed(k, v); },
          {K::hemisphere}}},
        {"scenario.peak_over_pi",
         {[](Config& c, const std::string& k, const std::string& v) { c.scenario.peak_over_pi = to_double(k, v); },
          {K::radial}}},
        {"scenario.width",
         {[](Config& c, const std::string& k, const std::string& v) { c.scenario.width = to_double(k, v); },
          {K::radial}}},
        {"scenario.r_cut",
         {[](Config& c, const std::string& k, const std::string& v) { c.scenario.r_cut = to_double(k, v); },
          {K::radial}}},
        {"scenario.scale",
         {[](Config& c, const std::string& k, const std::string& v) { c.scenario.scale = to_double(k, v); },
          {K::bubble}}},
        {"scenario.mode",
         {[](Config& c, const std::string& k, const std::string& v) { c.scenario.mode = to_int(k, v); },
          {K::equator, K::taylor_green}}},
        {"scenario.u_amplitude",
         {[](Config& c, const std::string& k, const std::string& v) { c.scenario.tg_amplitude = to_double(k, v); },
          {K::taylor_green}}},
        {"velocity.energy",
         {[](Config& c, const std::string& k, const std::string& v) { c.scenario.velocity_energy = to_double(k, v); },
          {K::hemisphere, K::radial, K::bubble, K::equator}}},
        {"velocity.modes",
         {[](Config& c, const std::string& k, const std::string& v) { c.scenario.velocity_modes = to_int(k, v); },
          {K::hemisphere, K::radial, K::bubble, K::equator}}},
        {"velocity.seed",
         {[](Config& c, const std::string& k, const std::string& v) { c.scenario.velocity_seed = to_seed(k, v); },
          {K::hemisphere, K::radial, K::bubble, K::equator}}},
        {"step.mode",
         {[](Config& c, const std::string& k, const std::string& v) {
              if (v == "cfl") c.policy.mode = StepMode::cfl;
              else if (v == "fixed") c.policy.mode = StepMode::fixed;
              else throw ValidationError("expected cfl or fixed", k);
          },
          {}}},
        {"step.dt", {[](Config& c, const std::string& k, const std::string& v) { c.policy.dt_fixed = to_double(k, v); }, {}}},
        {"step.cfl",
         {[](Config& c, const std::string& k, const std::string& v) { c.policy.cfl_number = to_double(k, v); }, {}}},
        {"step.dt_min", {[](Config& c, const std::string& k, const std::string& v) { c.policy.dt_min = to_double(k, v); }, {}}},
        {"step.dt_max", {[](Config& c, const std::string& k, const std::string& v) { c.policy.dt_max = to_double(k, v); }, {}}},
        {"step.h2_safety",
         {[](Config& c, const std::string& k, const std::string& v) { c.policy.h2_safety = to_double(k, v); }, {}}},
        {"step.resolution_limit",
         {[](Config& c, const std::string& k, const std::string& v) { c.policy.resolution_limit = to_double(k, v); },
          {}}},
        {"run.t_end", {[](Config& c, const std::string& k, const std::string& v) { c.t_end = to_double(k, v); }, {}}},
        {"run.record_interval",
         {[](Config& c, const std::string& k, const std::string& v) { c.record_interval = to_double(k, v); }, {}}},
        {"run.snapshot_interval",
         {[](Config& c, const std::string& k, const std::string& v) { c.snapshot_interval = to_double(k, v); }, {}}},
        {"tolerance.growth_factor",
         {[](Config& c, const std::string& k, const std::string& v) { c.growth_factor = to_double(k, v); }, {}}},
        {"tolerance.drift_limit",
         {[](Config& c, const std::string& k, const std::string& v) { c.drift_limit = to_double(k, v); }, {}}},
        {"tolerance.max_principle",
         {[](Config& c, const std::string& k, const std::string& v) { c.max_principle_tolerance = to_double(k, v); },
          {}}},
        {"output.dir", {[](Config& c, const std::string&, const std::string& v) { c.output_dir = v; }, {}}},
    };
    return table;
}

void require(bool ok, const std::string& key, const std::string& what)
{
    if (!ok) throw ValidationError(key + ": " + what, key);
}

void validate(const Config& c, const std::set<std::string>& present)
{
    for (const char* key : {"system", "grid.n", "grid.L", "scenario.name", "run.t_end"})
        require(present.count(key) > 0, key, "required key is missing");
    const auto& table = key_table();
    for (const auto& key : present) {
        const auto& allowed = table.at(key).scenarios;
        if (!allowed.empty() && !allowed.count(c.scenario.kind))
            throw ValidationError(key + ": not a parameter of scenario " + to_string(c.scenario.kind), key);
    }

    require(c.n >= 8 && (c.n & (c.n - 1)) == 0, "grid.n", "must be a power of two >= 8");
    require(c.L > 0.0, "grid.L", "must be positive");
    require(c.t_end > 0.0, "run.t_end", "must be positive");
    require(c.record_interval > 0.0, "run.record_interval", "must be positive");
    require(c.snapshot_interval >= 0.0, "run.snapshot_interval", "must be nonnegative");
    require(c.growth_factor > 1.0, "tolerance.growth_factor", "must exceed 1");
    require(c.drift_limit >= 0.0, "tolerance.drift_limit", "must be nonnegative");
    require(c.max_principle_tolerance >= 0.0, "tolerance.max_principle", "must be nonnegative");

    const StepPolicy& p = c.policy;
    require(p.dt_fixed > 0.0, "step.dt", "must be positive");
    require(p.cfl_number > 0.0 && p.cfl_number < 1.0, "step.cfl", "must lie in (0,1)");
    require(p.dt_min > 0.0, "step.dt_min", "must be positive");
    require(p.dt_max >= 0.0, "step.dt_max", "must be nonnegative");
    require(p.h2_safety >= 0.0, "step.h2_safety", "must be nonnegative");
    require(p.resolution_limit >= 0.0, "step.resolution_limit", "must be nonnegative");

    const ScenarioConfig& s = c.scenario;
    const int half = c.n / 2;
    switch (s.kind) {
    case ScenarioKind::hemisphere:
        require(present.count("scenario.epsilon0") > 0, "scenario.epsilon0", "required by scenario hemisphere");
        require(s.epsilon0 > 0.0 && s.epsilon0 < 1.0, "scenario.epsilon0", "must lie in (0,1)");
        require(s.roughness >= 1 && 2 * s.roughness < c.n, "scenario.roughness", "must lie in [1, n/2)");
        require(s.amplitude >= 0.0, "scenario.amplitude", "must be nonnegative");
        break;
    case ScenarioKind::radial:
        require(present.count("scenario.peak_over_pi") > 0, "scenario.peak_over_pi", "required by scenario radial");
        require(s.peak_over_pi >= 0.0, "scenario.peak_over_pi", "must be nonnegative");
        require(s.width >= 0.0, "scenario.width", "must be nonnegative");
        require(s.r_cut >= 0.0, "scenario.r_cut", "must be nonnegative");
        break;
    case ScenarioKind::bubble:
        require(present.count("scenario.scale") > 0, "scenario.scale", "required by scenario bubble");
        require(s.scale > 0.0, "scenario.scale", "must be positive");
        break;
    case ScenarioKind::equator:
    case ScenarioKind::taylor_green:
        require(s.mode >= 1 && s.mode < half, "scenario.mode", "must lie in [1, n/2)");
        break;
    }
    require(s.velocity_energy >= 0.0, "velocity.energy", "must be nonnegative");
    require(s.velocity_modes >= 1 && 2 * s.velocity_modes < c.n, "velocity.modes", "must lie in [1, n/2)");
    if (c.system == SystemKind::heat_flow) {
        require(s.velocity_energy == 0.0, "velocity.energy", "must be 0 for heat_flow");
        require(s.kind != ScenarioKind::taylor_green, "scenario.name", "taylor_green needs liquid_crystal");
    }
}

}  // namespace

Config parse_config(const std::string& text)
{
    Config c;
    std::map<std::string, int> seen;
    std::set<std::string> present;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    const auto& table = key_table();
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ParseError("line " + std::to_string(line) + ": expected key = value", line);
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) throw ParseError("line " + std::to_string(line) + ": empty key", line);
        if (value.empty()) throw ParseError("line " + std::to_string(line) + ": empty value for " + key, line);
        if (const auto it = seen.find(key); it != seen.end())
            throw ParseError("duplicate key '" + key + "' on lines " + std::to_string(it->second) + " and " +
                                 std::to_string(line),
                             line);
        seen[key] = line;
        const auto spec = table.find(key);
        if (spec == table.end()) throw ValidationError("unknown key '" + key + "'", key);
        spec->second.set(c, key, value);
        present.insert(key);
    }
    if (!present.count("step.dt_min") && c.t_end > 0.0) c.policy.dt_min = 1e-9 * c.t_end;
    validate(c, present);
    return c;
}

Config load_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

Grid2D config_grid(const Config& c) { return Grid2D(c.n, c.L); }

SimState initial_state(const Config& c)
{
    const Grid2D grid = config_grid(c);
    const ScenarioConfig& s = c.scenario;
    const std::array<double, 2> center{c.L / 2, c.L / 2};
    const auto velocity = [&] {
        if (s.velocity_energy == 0.0) return VectorField2(grid);
        return divergence_free_velocity(s.velocity_seed, s.velocity_modes, s.velocity_energy, grid);
    };
    switch (s.kind) {
    case ScenarioKind::hemisphere:
        return SimState(0.0, velocity(), hemisphere_random_data(s.epsilon0, s.roughness, s.amplitude, s.seed, grid).d);
    case ScenarioKind::radial: {
        const double w = s.width > 0.0 ? s.width : c.L / 40;
        const double rc = s.r_cut > 0.0 ? s.r_cut : c.L / 4;
        const auto profile = RadialProfile::with_peak(s.peak_over_pi * M_PI, w, rc);
        return SimState(0.0, velocity(), radial_data(profile, center, grid));
    }
    case ScenarioKind::bubble: return SimState(0.0, velocity(), stereographic_bubble(s.scale, center, grid).d);
    case ScenarioKind::equator: return SimState(0.0, velocity(), equator_map(s.mode, grid));
    case ScenarioKind::taylor_green:
        return SimState(0.0, taylor_green_velocity(s.tg_amplitude, s.mode, grid), DirectorField::constant(grid));
    }
    throw InvalidArgument("initial_state: unknown scenario");
}

RunConfig run_config(const Config& c)
{
    RunConfig r;
    r.system = c.system;
    r.policy = c.policy;
    r.t_end = c.t_end;
    r.record_interval = c.record_interval;
    r.growth_factor = c.growth_factor;
    r.drift_limit = c.drift_limit;
    return r;
}

}  // namespace lcflow
