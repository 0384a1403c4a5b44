#pragma once

#include <array>
#include <complex>

#include "lcflow/fields.hpp"

namespace lcflow {

/// Solver state (t, u, d). The pressure is never stored.
struct SimState {
    double t = 0.0;
    VectorField2 u;
    DirectorField d;

    SimState(double t_, VectorField2 u_, DirectorField d_);

    /// Throws InvariantViolation if the grids differ, u is not divergence-free
    /// to 1e-10 max(||u||_2, 1), or d is off the sphere beyond tol_evolve.
    void validate() const;
};

/// Forward transforms of a state's components in the half-spectrum layout
/// of Fourier (d1, d2, d3 and u1, u2).
struct StateSpectra {
    std::array<const std::complex<double>*, 3> d;
    std::array<const std::complex<double>*, 2> u;
};

/// ||div u||_2 evaluated spectrally (Nyquist-free wavenumbers).
double divergence_defect(const VectorField2& u);

}  // namespace lcflow
