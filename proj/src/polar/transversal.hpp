#pragma once

#include <vector>

#include "core/character.hpp"
#include "core/descriptor.hpp"
#include "core/element.hpp"

namespace stablecone {

enum class TransversalKind { VectorNorm, SupNorm, TotalMass, OrbitNorm, CharacterBased };

struct PolarPair {
    ConeElement angular;
    double radial = 0.0;
};

// A rule assigning every non-neutral element its radial coordinate tau(x),
// homogeneous under the cone scaling (tau(sx) = s tau(x)), with angular part
// scale(1/tau(x), x) a fixed point of decompose.
//
// Norm kinds read the radial coordinate off a gauge that is exactly
// 1-homogeneous for the cone's scaling. OrbitNorm inverts the scaling action
// itself, solving |scale(1/t, x)| = 1 by bisection; it requires the orbit
// norm t -> |scale(t, x)| to be strictly monotone (for operator scaling this
// holds when the symmetric part of the matrix is positive definite).
//
// CharacterBased follows the dyadic-bucket construction: with h_n = 1 - Re
// chi_n, pick the first n whose h_n is not identically zero along the orbit,
// bucket j from sup_t h_n(tx) (bucket 0 when the sup exceeds 1, otherwise
// sup in (2^-j, 2^-j+1]), and locate c(x) = inf{t > 0 : h_n(tx) > 2^-j} by a
// dyadic scan plus bisection. c is the time at which the orbit, parametrized
// from x, crosses the threshold, so it scales like c(sx) = c(x)/s and the
// crossing point c(x)x is the same for every element of the orbit; the
// homogeneous radial coordinate is tau(x) = 1/c(x).
class Transversal {
public:
    static Transversal vector_norm();
    static Transversal sup_norm();
    static Transversal total_mass();
    static Transversal orbit_norm();
    static Transversal character_based(std::vector<Character> chars);

    TransversalKind kind() const { return kind_; }
    const std::vector<Character>& characters() const { return chars_; }

    double tau(const ConeDescriptor& desc, const ConeElement& x) const;

    // CharacterBased only: the raw threshold-crossing time c(x) = 1/tau(x).
    double first_crossing_time(const ConeDescriptor& desc, const ConeElement& x) const;

    PolarPair decompose(const ConeDescriptor& desc, const ConeElement& x) const;

private:
    explicit Transversal(TransversalKind k) : kind_(k) {}

    TransversalKind kind_;
    std::vector<Character> chars_;
};

ConeElement compose(const ConeDescriptor& desc, const PolarPair& p);

} // namespace stablecone
