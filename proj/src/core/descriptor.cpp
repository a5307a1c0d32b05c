#include "core/descriptor.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace stablecone {

ConeElement ConeDescriptor::neutral() const {
    switch (variant) {
        case ConeVariant::Euclidean: return ConeElement::neutral_euclidean(dimension);
        case ConeVariant::GridFunction: return ConeElement::neutral_grid(grid);
        case ConeVariant::AtomicMeasure: return ConeElement::neutral_measure(dimension);
    }
    throw ContractViolation("unknown cone variant");
}

void validate_element(const ConeDescriptor& desc, const ConeElement& x) {
    if (x.variant() != desc.variant)
        throw ContractViolation("element variant does not match the cone");
    switch (desc.variant) {
        case ConeVariant::Euclidean:
            if (x.dim() != desc.dimension)
                throw ContractViolation("element dimension does not match the cone");
            break;
        case ConeVariant::GridFunction:
            if (x.grid().get() != desc.grid.get())
                throw ContractViolation("element references a foreign grid object");
            if (desc.op == SemigroupOp::PointwiseMax)
                for (double v : x.values())
                    if (v < 0.0)
                        throw ContractViolation("max-cone values must be non-negative");
            if (desc.scaling == ScalingKind::TimeReparam && x.values().front() != 0.0)
                throw ContractViolation("time-reparametrized elements must vanish at the first grid point");
            break;
        case ConeVariant::AtomicMeasure:
            if (x.dim() != desc.dimension)
                throw ContractViolation("atom location dimension does not match the cone");
            break;
    }
}

ConeElement add(const ConeDescriptor& desc, const ConeElement& x, const ConeElement& y) {
    validate_element(desc, x);
    validate_element(desc, y);
    switch (desc.op) {
        case SemigroupOp::VectorSum: {
            std::vector<double> v(x.values());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] += y.values()[i];
            if (desc.variant == ConeVariant::Euclidean) return ConeElement::euclidean(std::move(v));
            return ConeElement::grid_function(desc.grid, std::move(v));
        }
        case SemigroupOp::PointwiseMax: {
            std::vector<double> v(x.values());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(v[i], y.values()[i]);
            return ConeElement::grid_function(desc.grid, std::move(v));
        }
        case SemigroupOp::MeasureSum: {
            std::vector<Atom> atoms(x.atoms());
            atoms.insert(atoms.end(), y.atoms().begin(), y.atoms().end());
            return ConeElement::atomic_measure(desc.dimension, std::move(atoms));
        }
    }
    throw ContractViolation("unknown semigroup operation");
}

ConeElement scale(const ConeDescriptor& desc, double t, const ConeElement& x) {
    if (!std::isfinite(t) || t <= 0.0)
        throw DomainError("scaling factor must be strictly positive and finite");
    validate_element(desc, x);
    switch (desc.scaling) {
        case ScalingKind::Multiplicative: {
            std::vector<double> v(x.values());
            for (double& e : v) e *= t;
            if (desc.variant == ConeVariant::Euclidean) return ConeElement::euclidean(std::move(v));
            return ConeElement::grid_function(desc.grid, std::move(v));
        }
        case ScalingKind::OperatorExp: {
            const SquareMatrix e = expm(desc.matrix.scaled(std::log(t)));
            std::vector<double> out(x.values().size());
            e.apply(x.values().data(), out.data());
            return ConeElement::euclidean(std::move(out));
        }
        case ScalingKind::TimeReparam: {
            // (t.x)(s) = x(t s), resampled onto the shared grid
            const auto& pts = desc.grid->points();
            std::vector<double> v(pts.size());
            for (std::size_t i = 0; i < pts.size(); ++i)
                v[i] = desc.grid->eval(x.values(), t * pts[i]);
            return ConeElement::grid_function(desc.grid, std::move(v));
        }
        case ScalingKind::WeightScaling: {
            std::vector<Atom> atoms(x.atoms());
            for (auto& a : atoms) a.weight *= t;
            return ConeElement::atomic_measure(desc.dimension, std::move(atoms));
        }
    }
    throw ContractViolation("unknown scaling kind");
}

ConeElement involve(const ConeDescriptor& desc, const ConeElement& x) {
    validate_element(desc, x);
    if (desc.involution == InvolutionKind::Identity) return x;
    if (desc.variant == ConeVariant::AtomicMeasure)
        throw ContractViolation("measure cones only support the identity involution");
    std::vector<double> v(x.values());
    for (double& e : v) e = -e;
    if (desc.variant == ConeVariant::Euclidean) return ConeElement::euclidean(std::move(v));
    return ConeElement::grid_function(desc.grid, std::move(v));
}

} // namespace stablecone
