#include "lepage/spectral.hpp"

#include <cmath>

#include "errors.hpp"

namespace stablecone {

namespace {

constexpr std::size_t kNeutralRedrawCap = 1000;

// E |N(0,1)|-vector norm: sqrt(2) Gamma((d+1)/2) / Gamma(d/2)
double gaussian_mean_norm(std::size_t d) {
    const double dd = static_cast<double>(d);
    return std::exp(0.5 * std::log(2.0) + std::lgamma(0.5 * (dd + 1.0)) - std::lgamma(0.5 * dd));
}

bool is_sum_values_cone(const ConeDescriptor& desc) {
    return desc.op == SemigroupOp::VectorSum &&
           (desc.scaling == ScalingKind::Multiplicative || desc.scaling == ScalingKind::OperatorExp);
}

} // namespace

ConeElement SpectralSampler::draw(RngStream& rng, std::size_t* rejected) const {
    for (std::size_t attempt = 0; attempt < kNeutralRedrawCap; ++attempt) {
        ConeElement e = make_element(rng);
        if (!e.is_neutral()) return e;
        if (rejected) ++*rejected;
    }
    throw PreconditionError("spectral law keeps drawing the neutral element");
}

SpectralSampler make_spectral(const ConeDescriptor& desc, const SpectralSpec& spec) {
    SpectralSampler s;
    s.kind = spec.kind;
    s.variant = desc.variant;

    const GridPtr grid = desc.grid;
    if (desc.variant == ConeVariant::GridFunction && !grid)
        throw ContractViolation("grid cone descriptor is missing its grid");
    const std::size_t width =
        desc.variant == ConeVariant::GridFunction ? grid->size() : desc.dimension;
    s.width = width;

    const ConeVariant variant = desc.variant;
    const auto wrap_fill = [variant, grid, width](std::function<void(RngStream&, double*)> fill) {
        return [fill = std::move(fill), variant, grid, width](RngStream& rng) {
            std::vector<double> v(width);
            fill(rng, v.data());
            if (variant == ConeVariant::GridFunction)
                return ConeElement::grid_function(grid, std::move(v));
            return ConeElement::euclidean(std::move(v));
        };
    };

    if (spec.kind == "constant_one") {
        if (!is_sum_values_cone(desc) && desc.op != SemigroupOp::PointwiseMax)
            throw DomainError("constant_one marks need a vector-sum or max cone");
        s.symmetric = false;
        s.mean_norm = std::sqrt(static_cast<double>(width));
        s.mean_abs = 1.0;
        s.mean_square = 1.0;
        s.sup_bound = 1.0;
        s.inf_bound = 1.0;
        s.fill = [width](RngStream&, double* buf) {
            for (std::size_t i = 0; i < width; ++i) buf[i] = 1.0;
        };
    } else if (spec.kind == "rademacher") {
        if (!is_sum_values_cone(desc))
            throw DomainError("rademacher marks need a vector-sum cone with value scaling");
        s.symmetric = true;
        s.mean_norm = std::sqrt(static_cast<double>(width));
        s.mean_abs = 1.0;
        s.mean_square = 1.0;
        s.sup_bound = 1.0;
        s.fill = [width](RngStream& rng, double* buf) {
            for (std::size_t i = 0; i < width; ++i) buf[i] = rng.raw() >> 63 ? 1.0 : -1.0;
        };
    } else if (spec.kind == "gaussian") {
        if (!is_sum_values_cone(desc))
            throw DomainError("gaussian marks need a vector-sum cone with value scaling");
        s.symmetric = true;
        s.mean_norm = gaussian_mean_norm(width);
        s.mean_abs = std::sqrt(2.0 / 3.14159265358979323846);
        s.mean_square = 1.0;
        s.fill = [width](RngStream& rng, double* buf) {
            for (std::size_t i = 0; i < width; ++i) buf[i] = rng.normal();
        };
    } else if (spec.kind == "uniform_profile") {
        if (desc.op != SemigroupOp::PointwiseMax)
            throw DomainError("uniform_profile marks need a max cone");
        if (!(spec.lo > 0.0) || !(spec.hi > spec.lo) || !std::isfinite(spec.hi))
            throw DomainError("uniform_profile needs 0 < lo < hi");
        const double lo = spec.lo, span = spec.hi - spec.lo;
        s.symmetric = false;
        s.sup_bound = spec.hi;
        s.inf_bound = spec.lo;
        s.fill = [width, lo, span](RngStream& rng, double* buf) {
            for (std::size_t i = 0; i < width; ++i) buf[i] = lo + span * rng.uniform01();
        };
    } else if (spec.kind == "step_rademacher") {
        if (desc.scaling != ScalingKind::TimeReparam)
            throw DomainError("step_rademacher marks need a time-reparametrized cone");
        std::size_t first = 0;
        while (first < width && !(grid->points()[first] > 0.0)) ++first;
        const std::size_t count = width - first;
        if (count == 0) throw DomainError("time grid has no positive points for step marks");
        s.symmetric = true;
        s.sup_bound = 1.0;
        s.mean_norm = 1.0;
        s.fill = [width, first, count](RngStream& rng, double* buf) {
            std::size_t k =
                first + static_cast<std::size_t>(static_cast<double>(count) * rng.uniform01());
            if (k >= width) k = width - 1;
            const double sign = rng.raw() >> 63 ? 1.0 : -1.0;
            for (std::size_t i = 0; i < width; ++i) buf[i] = i >= k ? sign : 0.0;
        };
    } else if (spec.kind == "single_atom") {
        if (desc.variant != ConeVariant::AtomicMeasure)
            throw DomainError("single_atom marks need a measure cone");
        const std::size_t d = desc.dimension;
        s.symmetric = false;
        s.mean_norm = 1.0;
        s.sup_bound = 1.0;
        s.make_element = [d](RngStream& rng) {
            Atom a;
            a.location.resize(d);
            for (std::size_t i = 0; i < d; ++i) a.location[i] = rng.uniform01();
            a.weight = 1.0;
            return ConeElement::atomic_measure(d, {std::move(a)});
        };
        return s;
    } else {
        throw DomainError("unknown spectral kind: " + spec.kind);
    }

    s.make_element = wrap_fill(s.fill);
    return s;
}

} // namespace stablecone
