#pragma once

#include <algorithm>
#include <cmath>

#include "lcflow/fields.hpp"
#include "lcflow/scenarios.hpp"

namespace testing {

inline double max_abs_diff(const lcflow::ScalarField& a, const lcflow::ScalarField& b)
{
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

inline double max_abs(const lcflow::ScalarField& a)
{
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k]));
    return m;
}

inline double max_abs_diff(const lcflow::DirectorField& a, const lcflow::DirectorField& b)
{
    return std::max({max_abs_diff(a[0], b[0]), max_abs_diff(a[1], b[1]), max_abs_diff(a[2], b[2])});
}

inline lcflow::ScalarField noise(const lcflow::Grid2D& g, std::uint64_t seed, std::uint64_t stream = 0)
{
    const lcflow::CounterRng rng(seed);
    lcflow::ScalarField f(g);
    for (std::size_t k = 0; k < g.size(); ++k) f[k] = 2.0 * rng.uniform(stream, k) - 1.0;
    return f;
}

inline lcflow::ScalarField plane_wave(const lcflow::Grid2D& g, int k1, int k2, double phase = 0.0)
{
    const double w = 2 * M_PI / g.length();
    return lcflow::sample(g, [&](double x, double y) { return std::cos(w * (k1 * x + k2 * y) + phase); });
}

}  // namespace testing
