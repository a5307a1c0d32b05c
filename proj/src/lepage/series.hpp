#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "core/descriptor.hpp"
#include "core/element.hpp"
#include "core/rng.hpp"
#include "lepage/spectral.hpp"
#include "polar/radial.hpp"
#include "polar/transversal.hpp"

namespace stablecone {

// Deliberate defects for mutation testing. RadialExponentOne replaces the
// radial weight Gamma^(-1/alpha) by Gamma^(-1) (breaks the stability
// identity whenever alpha != 1); RadialAlphaDoubled uses Gamma^(-1/(2 alpha))
// (breaks the exponent homogeneity phi(a chi) = a^alpha phi(chi)).
enum class Mutation { None, RadialExponentOne, RadialAlphaDoubled };

struct SeriesOptions {
    double truncation_r = 0.0;
    Mutation mutation = Mutation::None;
    bool keep_points = false;
    bool normalize_to_transversal = false;
    const Transversal* transversal = nullptr;
};

// A-priori tail-control certificate for the truncated series; value is NaN
// when the declared moments cannot support a bound. slow_decay warns that
// the decay exponent in r is below 0.1 and the bound shrinks impractically
// slowly.
struct BiasBound {
    double value = std::numeric_limits<double>::quiet_NaN();
    bool slow_decay = false;
};

struct SeriesSample {
    explicit SeriesSample(ConeElement v) : value(std::move(v)) {}

    ConeElement value;
    std::size_t term_count = 0;
    double truncation_r = 0.0;
    double bias_bound = std::numeric_limits<double>::quiet_NaN();
    bool slow_decay = false;
    // mean of tau(eps)^alpha over the drawn marks when the
    // normalize-to-transversal toggle is on; NaN otherwise
    double scale_constant = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
    std::size_t rejected_neutral_draws = 0;
    // populated only with keep_points
    std::vector<double> gammas;
    std::vector<ConeElement> marks;
};

// Successive arrival times of a unit-intensity Poisson process, emitted
// while <= r.
std::vector<double> gamma_sequence(RngStream& rng, double r);

// Exponent e such that the radial weight of an arrival is Gamma^e
// (-1/alpha unmutated).
double radial_weight_exponent(double alpha, Mutation m);

BiasBound truncation_bias_bound(const ConeDescriptor& desc, const RadialLaw& law,
                                const SpectralSampler& spectral, double r);

// One truncated series realization: aggregates scale(Gamma_i^(-1/alpha),
// eps_i) over Gamma_i <= r in increasing-Gamma order under the cone's
// semigroup operation. Throws PreconditionError when alpha sits outside the
// cone's admissible window for the sampler's symmetry.
SeriesSample sample_series(const ConeDescriptor& desc, const RadialLaw& law,
                           const SpectralSampler& spectral, const SeriesOptions& opts,
                           RngStream& rng);

} // namespace stablecone
