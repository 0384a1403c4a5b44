#pragma once

#include <array>
#include <complex>

#include "lcflow/fields.hpp"

namespace lcflow {

/// Samples of g = Lap d + |grad d|^2 d, the tension of a sphere-valued map.
struct TensionField {
    Vector3Field g;

    /// max_x |g(x) . d(x)|; vanishes (up to discretization) when |d| = 1.
    double max_normal_component(const DirectorField& d) const;
};

/// Derivative data of a director field, computed once and shared by the
/// scalar diagnostics below.
struct DirectorGeometry {
    explicit DirectorGeometry(const DirectorField& d);
    /// Same, reusing the forward transforms of d1, d2, d3.
    DirectorGeometry(const DirectorField& d, const std::array<const std::complex<double>*, 3>& spectra);

    /// d_i d_c for direction i in {0,1} and component c in {0,1,2}.
    std::array<std::array<ScalarField, 3>, 2> grad;
    Vector3Field lap;
    /// |grad d|^2 = sum_{i,c} (d_i d_c)^2, pointwise.
    ScalarField grad_sq;

    double grad_l2_sq = 0.0;   ///< ||grad d||_2^2
    double grad_l4_4 = 0.0;    ///< ||grad d||_4^4
    double lap_l2_sq = 0.0;    ///< ||Lap d||_2^2
    double tension_sq = 0.0;   ///< ||Lap d + |grad d|^2 d||_2^2
    double identity_residual = 0.0;  ///< ||Lap d . d + |grad d|^2||_2
    double max_grad = 0.0;     ///< max_x |grad d|
    double inf_d3 = 0.0;

private:
    DirectorGeometry(const DirectorField& d, const std::array<AlignedVector<std::complex<double>>, 3>& owned);
};

TensionField tension(const DirectorField& d);

/// ||Lap d . d + |grad d|^2||_2.
double sphere_identity_residual(const DirectorField& d);

/// ||Lap d + |grad d|^2 d||_2^2.
double harmonic_energy(const DirectorField& d);

/// ||grad d||_4^4 / ||Lap d||_2^2. Throws DegenerateInput when ||Lap d||_2 <= 1e-12.
double coercivity_ratio(const DirectorField& d);
double coercivity_ratio(const DirectorGeometry& geometry);

/// min over samples of d_3.
double angle_infimum(const DirectorField& d);

struct CoercivityReport {
    double lhs;  ///< ||Lap d + |grad d|^2 d||_2^2
    double rhs;  ///< (delta0/2) (||Lap d||_2^2 + ||grad d||_4^4)
    bool holds;
};

/// Evaluates ||g||^2 >= (delta0/2)(||Lap d||^2 + ||grad d||_4^4). Requires delta0 in (0,1).
CoercivityReport coercivity_check(const DirectorField& d, double delta0);

/// Applies a fixed 3x3 rotation pointwise.
DirectorField rotate(const DirectorField& d, const std::array<std::array<double, 3>, 3>& r);

}  // namespace lcflow
