#pragma once

#include <cstddef>
#include <memory>

#include "core/element.hpp"
#include "core/grid.hpp"
#include "core/matrix.hpp"

namespace stablecone {

enum class SemigroupOp { VectorSum, PointwiseMax, MeasureSum };
enum class ScalingKind { Multiplicative, OperatorExp, TimeReparam, WeightScaling };
enum class InvolutionKind { Negation, Identity };

// Interval of stability indices for which plain (uncompensated) series
// summation is valid. Sum cones with value scaling get (0,1), extended to
// (0,2) when the spectral law is symmetric; max and measure cones and
// time-reparametrized sums admit every positive index.
struct AlphaWindow {
    double lo = 0.0;
    double hi = 1.0;
    double hi_symmetric = 2.0;

    bool admits(double alpha, bool symmetric) const {
        if (!(alpha > lo)) return false;
        return alpha < (symmetric ? hi_symmetric : hi);
    }
};

// Static description of a concrete cone: payload variant, semigroup
// operation, scaling action, involution, and dimensional data. The heavy
// wiring (transversal, probe characters) lives in cones/factory.
struct ConeDescriptor {
    ConeVariant variant = ConeVariant::Euclidean;
    SemigroupOp op = SemigroupOp::VectorSum;
    ScalingKind scaling = ScalingKind::Multiplicative;
    InvolutionKind involution = InvolutionKind::Negation;
    std::size_t dimension = 1;   // coordinates, or atom location dimension
    GridPtr grid;                // grid cones only
    SquareMatrix matrix;         // OperatorExp only

    AlphaWindow alpha_admissible;

    ConeElement neutral() const;
};

// Throws ContractViolation when x does not belong to this cone: wrong
// variant, wrong dimension, foreign grid object, negative values on a max
// cone, or a non-vanishing origin value on a time-reparametrized cone.
void validate_element(const ConeDescriptor& desc, const ConeElement& x);

ConeElement add(const ConeDescriptor& desc, const ConeElement& x, const ConeElement& y);

// t must be strictly positive and finite; DomainError otherwise.
ConeElement scale(const ConeDescriptor& desc, double t, const ConeElement& x);

ConeElement involve(const ConeDescriptor& desc, const ConeElement& x);

} // namespace stablecone
