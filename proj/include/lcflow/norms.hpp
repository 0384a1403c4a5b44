#pragma once

#include "lcflow/fields.hpp"

namespace lcflow {

/// (h^2 sum |f|^p)^{1/p}; p = infinity gives the grid max of |f|.
/// Throws InvalidArgument for p < 1.
double lp_norm(const ScalarField& f, double p);
/// Same, applied to the pointwise Euclidean magnitude.
double lp_norm(const VectorField2& f, double p);
double lp_norm(const Vector3Field& f, double p);

/// ||f||_{H^s} = ||(|nabla|^s f)||_2, computed by Parseval.
double sobolev_norm(const ScalarField& f, double s);

/// Grid inner product h^2 sum f g.
double inner(const ScalarField& f, const ScalarField& g);
double inner(const VectorField2& f, const VectorField2& g);

/// ||u||_4 / (||u||_2^{1/2} ||grad u||_2^{1/2}).
struct GNReport {
    double ratio;
    double l4;
    double l2;
    double grad_l2;
};

/// Gagliardo-Nirenberg ratio. Throws DegenerateInput when ||u||_2 or
/// ||grad u||_2 is below 1e-14.
GNReport gn_check(const ScalarField& u);
GNReport gn_check(const VectorField2& u);

/// Running integral of dt * value with the left-endpoint rule.
class SpaceTimeAccumulator {
public:
    SpaceTimeAccumulator() = default;
    explicit SpaceTimeAccumulator(double initial_total) : total_(initial_total) {}

    double total() const noexcept { return total_; }
    int steps() const noexcept { return steps_; }

    /// Throws InvalidArgument for dt <= 0 or value < 0.
    SpaceTimeAccumulator& add(double dt, double value);

private:
    double total_ = 0.0;
    int steps_ = 0;
};

SpaceTimeAccumulator accumulate(SpaceTimeAccumulator acc, double dt, double value);

}  // namespace lcflow
