#pragma once

#include <complex>
#include <cstddef>
#include <limits>

#include "core/character.hpp"
#include "core/descriptor.hpp"
#include "core/rng.hpp"
#include "lepage/spectral.hpp"
#include "polar/radial.hpp"
#include "quad/quadrature.hpp"

namespace stablecone {

// E chi(series truncated at r) = exp(-phi_r(chi)) with
//   phi_r(chi) = integral over t in [r^(-1/alpha), inf) of
//                E[1 - chi(t eps)] alpha t^(-alpha-1) dt
// (substitute t = gamma^(-1/alpha) in the Poisson exponent over gamma <= r).
// The t-integral runs to t_hi; the remainder is bounded by 2 t_hi^(-alpha)
// and reported, not added.
struct LaplaceExponentConfig {
    double t_hi = 1e6;
    std::size_t samples = 4096;
    std::size_t batches = 16;
    QuadConfig quad{1e-8, 60, 2000000};
};

struct LaplaceExponentResult {
    std::complex<double> value;
    double std_error = 0.0;
    double tail_bound = 0.0;
    bool converged = true;
};

LaplaceExponentResult truncated_laplace_exponent(const ConeDescriptor& desc, const RadialLaw& law,
                                                 const SpectralSampler& spectral,
                                                 const Character& chi, double r, RngStream& rng,
                                                 const LaplaceExponentConfig& cfg = {});

// Integrability diagnostic for the spectral law against one character:
//   integral over t in (0, inf) of E[1 - Re chi(t eps)] alpha t^(-alpha-1) dt.
// G(t) = E[1 - Re chi(t eps)] is profiled on a quarter-octave grid; the
// fitted low-end slope s of log G decides convergence at 0 (the integrand
// slope s - alpha - 1 must exceed -1, flagged divergent when
// s <= alpha + 0.05). Finite cases are integrated on [2^log2_t_min,
// 2^log2_t_max] with a power-law extrapolation below and a reported bound
// 2^(1 - alpha log2_t_max) above. Divergence yields value = +inf.
struct EpsConditionConfig {
    double log2_t_min = -24.0;
    double log2_t_max = 16.0;
    std::size_t samples = 512;
    std::size_t batches = 8;
    QuadConfig quad{1e-8, 60, 2000000};
};

struct EpsConditionResult {
    double value = 0.0;
    double std_error = 0.0;
    double slope_low = std::numeric_limits<double>::quiet_NaN();
    double slope_high = std::numeric_limits<double>::quiet_NaN();
    bool divergent = false;
    double lower_tail = 0.0;
    double upper_tail_bound = 0.0;
    bool converged = true;
};

EpsConditionResult eps_condition_check(const ConeDescriptor& desc, const RadialLaw& law,
                                       const SpectralSampler& spectral, const Character& chi,
                                       RngStream& rng, const EpsConditionConfig& cfg = {});

} // namespace stablecone
