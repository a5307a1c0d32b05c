#pragma once

// Shared helpers for the test binaries: default cone construction through the
// factory and random element generation per cone variant.

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "cones/factory.hpp"
#include "core/descriptor.hpp"
#include "core/element.hpp"
#include "core/rng.hpp"

namespace testsupport {

inline stablecone::WiredCone make_cone(const std::string& spec_json) {
    return stablecone::wire_cone(stablecone::parse_cone_spec(spec_json));
}

inline stablecone::ConeElement random_element(const stablecone::ConeDescriptor& desc,
                                              stablecone::RngStream& rng) {
    using namespace stablecone;
    switch (desc.variant) {
        case ConeVariant::Euclidean: {
            std::vector<double> v(desc.dimension);
            for (double& x : v) x = rng.normal();
            return ConeElement::euclidean(std::move(v));
        }
        case ConeVariant::GridFunction: {
            std::vector<double> v(desc.grid->size());
            if (desc.op == SemigroupOp::PointwiseMax) {
                for (double& x : v) x = std::abs(rng.normal()) + 0.05;
            } else {
                for (double& x : v) x = rng.normal();
                v[0] = 0.0;
            }
            return ConeElement::grid_function(desc.grid, std::move(v));
        }
        case ConeVariant::AtomicMeasure: {
            const std::size_t k = 1 + rng.raw() % 3;
            std::vector<Atom> atoms;
            for (std::size_t i = 0; i < k; ++i) {
                std::vector<double> loc(desc.dimension);
                for (double& c : loc) c = rng.uniform01();
                atoms.push_back({std::move(loc), rng.exp1() + 0.01});
            }
            return ConeElement::atomic_measure(desc.dimension, std::move(atoms));
        }
    }
    std::abort();
}

// Time-reparametrized elements whose polar round trip is representable on the
// lattice: values vanish strictly below the first phase-active grid point, so
// the radial shift keeps every read on the grid and loses nothing.
inline stablecone::ConeElement random_polar_element(const stablecone::ConeDescriptor& desc,
                                                    stablecone::RngStream& rng,
                                                    std::size_t octave_lo = 1,
                                                    std::size_t octave_hi = 0) {
    using namespace stablecone;
    if (desc.scaling != ScalingKind::TimeReparam) return random_element(desc, rng);
    const std::size_t n = desc.grid->size();
    if (octave_hi == 0 || octave_hi > n - 1) octave_hi = n - 1;
    std::vector<double> v(n, 0.0);
    const std::size_t a = octave_lo + rng.raw() % (octave_hi - octave_lo + 1);
    v[a] = 2.0 + rng.uniform01();
    for (std::size_t k = a + 1; k < n; ++k) v[k] = rng.normal();
    return ConeElement::grid_function(desc.grid, std::move(v));
}

inline const char* kEuclideanSpec = R"({"kind":"euclidean","dim":3,"alpha":0.7})";
inline const char* kOperatorSpec =
    R"({"kind":"operator","dim":2,"alpha":0.7,"matrix":[[1.0,0.25],[-0.25,1.5]]})";
inline const char* kMaxSpec = R"({"kind":"max","dim":4,"alpha":0.7})";
inline const char* kTimeSpec = R"({"kind":"time","alpha":0.5})";
inline const char* kMeasureSpec = R"({"kind":"measure","dim":2,"alpha":0.7})";

} // namespace testsupport
