#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "core/character.hpp"
#include "core/descriptor.hpp"
#include "lepage/spectral.hpp"
#include "polar/transversal.hpp"

namespace stablecone {

// Build description for one concrete cone, normally parsed from JSON:
//   {"kind": "euclidean", "dim": 2, "alpha": 0.7, "probes": 16,
//    "spectral": {"kind": "gaussian"}}
//
// kinds:
//   euclidean  R^dim under vector sums, scalar scaling
//   operator   R^dim under vector sums, matrix-exponential scaling
//              ("matrix", row-major list of rows; defaults to the identity)
//   max        non-negative functions on a finite site grid under pointwise
//              max ("grid" holds the site labels; defaults to 0..dim-1)
//   time       cadlag step paths under pointwise sums with time scaling
//              (tx)(s) = x(ts); "grid" must start at 0 and defaults to the
//              geometric grid 0, 1, 2, 4, ..., 512
//   measure    finite atomic measures on [0,1]^dim under superposition,
//              scaling acts on weights
//
// "alpha" is the stability index the cone is wired for, "probes" the number
// of bounded characters generated for verification, and "spectral" the
// default mark law (per-kind default when omitted).
struct ConeSpec {
    std::string kind;
    std::size_t dim = 1;
    double alpha = 0.5;
    std::size_t probes = 16;
    std::vector<double> grid_points;
    std::vector<std::vector<double>> matrix_rows;
    SpectralSpec spectral{"", 0.5, 1.5};
};

ConeSpec parse_cone_spec(const std::string& json_text);

// fills per-kind defaults (grid, matrix, spectral law, grid-derived dim)
ConeSpec resolve_defaults(ConeSpec spec);

// deterministic serialization of a resolved spec (sorted keys); two specs
// that wire the same cone produce identical strings
std::string canonical_spec_json(const ConeSpec& spec);

struct WiredCone {
    ConeSpec spec;  // defaults resolved
    ConeDescriptor descriptor;
    Transversal transversal;
    std::vector<Character> probes;
};

// validates the spec and assembles descriptor, transversal, and probe
// characters; throws ContractViolation / DomainError on malformed input
WiredCone wire_cone(const ConeSpec& spec);

} // namespace stablecone
