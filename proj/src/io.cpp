#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "lcflow/iface.hpp"
#include "lcflow/spectral.hpp"

namespace lcflow {

namespace {

using Member = double DiagnosticsRecord::*;

const std::vector<std::pair<std::string, Member>>& column_members()
{
    static const std::vector<std::pair<std::string, Member>> cols = {
        {"t", &DiagnosticsRecord::t},
        {"E", &DiagnosticsRecord::E},
        {"grad_u_sq", &DiagnosticsRecord::grad_u_sq},
        {"tension_sq", &DiagnosticsRecord::tension_sq},
        {"grad_d_L4_4", &DiagnosticsRecord::grad_d_L4_4},
        {"lap_d_sq", &DiagnosticsRecord::lap_d_sq},
        {"inf_d3", &DiagnosticsRecord::inf_d3},
        {"d_minus_e3_sq", &DiagnosticsRecord::d_minus_e3_sq},
        {"int_u_L4_4", &DiagnosticsRecord::int_u_L4_4},
        {"int_grad_d_L4_4", &DiagnosticsRecord::int_grad_d_L4_4},
        {"int_lap_d_sq", &DiagnosticsRecord::int_lap_d_sq},
        {"int_grad_d_sq", &DiagnosticsRecord::int_grad_d_sq},
        {"int_D", &DiagnosticsRecord::int_D},
        {"energy_residual", &DiagnosticsRecord::energy_residual},
        {"u_L4_4", &DiagnosticsRecord::u_L4_4},
        {"max_grad_d", &DiagnosticsRecord::max_grad_d},
        {"u_L2_sq", &DiagnosticsRecord::u_L2_sq},
        {"int_grad_u_sq", &DiagnosticsRecord::int_grad_u_sq},
        {"sphere_drift", &DiagnosticsRecord::sphere_drift},
    };
    return cols;
}

constexpr std::size_t fixed_columns = 15;

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

void put_u32(std::string& b, std::uint32_t v)
{
    for (int k = 0; k < 4; ++k) b.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

void put_f64(std::string& b, double x)
{
    std::uint64_t v;
    std::memcpy(&v, &x, 8);
    for (int k = 0; k < 8; ++k) b.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

std::uint64_t get_bytes(const std::string& b, std::size_t at, int count)
{
    std::uint64_t v = 0;
    for (int k = 0; k < count; ++k) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[at + k])) << (8 * k);
    return v;
}

double get_f64(const std::string& b, std::size_t at)
{
    const std::uint64_t v = get_bytes(b, at, 8);
    double x;
    std::memcpy(&x, &v, 8);
    return x;
}

constexpr std::size_t header_bytes = 32;
constexpr std::uint32_t snapshot_components = 5;

}  // namespace

const std::vector<std::string>& diagnostics_columns()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& c : column_members()) v.push_back(c.first);
        return v;
    }();
    return names;
}

void write_diagnostics(const Trajectory& records, const std::string& path)
{
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    const auto& cols = column_members();
    for (std::size_t k = 0; k < cols.size(); ++k) f << (k ? "," : "") << cols[k].first;
    f << '\n';
    char buf[40];
    for (const auto& r : records) {
        for (std::size_t k = 0; k < cols.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", r.*(cols[k].second));
            f << (k ? "," : "") << buf;
        }
        f << '\n';
    }
    if (!f) throw IoError("write failed for " + path);
}

Trajectory read_diagnostics(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw ParseError(path + ": missing header", 1);
    const auto header = split(line);
    const auto& cols = column_members();
    if (header.size() < fixed_columns) throw ParseError(path + ": header has too few columns", 1);
    std::vector<Member> members;
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (k < fixed_columns) {
            if (header[k] != cols[k].first)
                throw ParseError(path + ": column " + std::to_string(k + 1) + " is '" + header[k] + "', expected '" +
                                     cols[k].first + "'",
                                 1);
            members.push_back(cols[k].second);
            continue;
        }
        Member m = nullptr;
        for (std::size_t j = fixed_columns; j < cols.size(); ++j)
            if (header[k] == cols[j].first) m = cols[j].second;
        members.push_back(m);
    }

    Trajectory out;
    int row = 1;
    while (std::getline(f, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw ParseError(path + ": row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                                 " fields, expected " + std::to_string(header.size()),
                             row);
        DiagnosticsRecord r;
        for (std::size_t k = 0; k < cells.size(); ++k) {
            errno = 0;
            char* end = nullptr;
            const double x = std::strtod(cells[k].c_str(), &end);
            if (cells[k].empty() || *end != '\0' || errno == ERANGE)
                throw ParseError(path + ": row " + std::to_string(row) + ", column '" + header[k] + "': bad number '" +
                                     cells[k] + "'",
                                 row);
            if (members[k]) r.*(members[k]) = x;
        }
        out.push_back(r);
    }
    return out;
}

void write_snapshot(const SimState& state, const std::string& path)
{
    const Grid2D& g = state.d.grid();
    std::string b = "HFLD";
    put_u32(b, snapshot_version);
    put_u32(b, static_cast<std::uint32_t>(g.n()));
    put_f64(b, g.length());
    put_f64(b, state.t);
    put_u32(b, snapshot_components);
    b.reserve(header_bytes + snapshot_components * g.size() * 8);
    const std::array<const ScalarField*, 5> comps{&state.u[0], &state.u[1], &state.d[0], &state.d[1], &state.d[2]};
    for (const ScalarField* c : comps)
        for (std::size_t k = 0; k < g.size(); ++k) put_f64(b, (*c)[k]);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    f.write(b.data(), static_cast<std::streamsize>(b.size()));
    if (!f) throw IoError("write failed for " + path);
}

SimState read_snapshot(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    const std::string b((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (b.size() < 4 || b.compare(0, 4, "HFLD") != 0) throw BadMagic(path + ": not a field snapshot");
    if (b.size() < header_bytes) throw IoError(path + ": truncated header");
    const auto version = static_cast<std::uint32_t>(get_bytes(b, 4, 4));
    if (version != snapshot_version)
        throw VersionMismatch(path + ": version " + std::to_string(version) + ", expected " +
                              std::to_string(snapshot_version));
    const auto n = static_cast<int>(get_bytes(b, 8, 4));
    const double L = get_f64(b, 12);
    const double t = get_f64(b, 20);
    const auto count = static_cast<std::uint32_t>(get_bytes(b, 28, 4));
    if (count != snapshot_components) throw IoError(path + ": expected 5 components");
    if (n < 8 || n > (1 << 15) || (n & (n - 1)) != 0 || !(L > 0.0) || !std::isfinite(L) || !std::isfinite(t))
        throw IoError(path + ": invalid grid or time in header");
    const Grid2D grid(n, L);
    const std::size_t expected = header_bytes + count * grid.size() * 8;
    if (b.size() != expected)
        throw IoError(path + ": size " + std::to_string(b.size()) + " bytes, expected " + std::to_string(expected));

    std::array<ScalarField, 5> comps{ScalarField(grid), ScalarField(grid), ScalarField(grid), ScalarField(grid),
                                     ScalarField(grid)};
    std::size_t at = header_bytes;
    for (auto& c : comps)
        for (std::size_t k = 0; k < grid.size(); ++k, at += 8) c[k] = get_f64(b, at);
    for (const auto& c : comps)
        if (!c.all_finite()) throw InvariantViolation(path + ": non-finite sample");
    SimState s(t, VectorField2(std::move(comps[0]), std::move(comps[1])),
               DirectorField(std::move(comps[2]), std::move(comps[3]), std::move(comps[4]), tol_evolve));
    s.validate();
    return s;
}

std::vector<SpectrumBin> energy_spectrum(const SimState& state)
{
    const Grid2D& grid = state.d.grid();
    const auto F = Fourier::of(grid);
    const int n = grid.n(), cols = F->half_cols();
    const int shells = static_cast<int>(std::lround(std::sqrt(0.5) * n)) + 1;
    std::vector<SpectrumBin> bins(static_cast<std::size_t>(shells));
    for (int s = 0; s < shells; ++s) bins[s] = {s, grid.frequency(s), 0.0, 0.0};
    const double L2 = grid.length() * grid.length();
    const auto add = [&](const ScalarField& f, bool gradient) {
        const HalfSpectrum c = F->forward(f);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < cols; ++j) {
                const std::size_t s = static_cast<std::size_t>(i) * cols + j;
                const int k1 = signed_wavenumber(i, n);
                const auto shell = static_cast<std::size_t>(std::lround(std::hypot(k1, j)));
                const double e = 0.5 * L2 * F->weight(s) * std::norm(c[s]);
                if (gradient) bins[shell].grad_d_energy += F->xi_sq(s) * e;
                else bins[shell].u_energy += e;
            }
    };
    for (int a = 0; a < 2; ++a) add(state.u[a], false);
    for (int c = 0; c < 3; ++c) add(state.d[c], true);
    return bins;
}

void write_spectrum(const std::vector<SpectrumBin>& bins, const std::string& path)
{
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    f << "shell,frequency,u_energy,grad_d_energy\n";
    char buf[128];
    for (const auto& b : bins) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", b.shell, b.frequency, b.u_energy, b.grad_d_energy);
        f << buf;
    }
    if (!f) throw IoError("write failed for " + path);
}

}  // namespace lcflow
