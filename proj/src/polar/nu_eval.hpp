#pragma once

#include <functional>
#include <limits>

#include "core/descriptor.hpp"
#include "core/element.hpp"
#include "core/rng.hpp"
#include "polar/radial.hpp"
#include "quad/quadrature.hpp"

namespace stablecone {

// Settings for evaluating nu(B) through its polar representation
//   nu(B) = integral over t in (0, inf) of alpha t^(alpha-1) P{(1/t) eps in B} dt.
// The probability under the spectral law is estimated by Monte Carlo (marks
// drawn once, reused across quadrature nodes) and the t-integral is computed
// by adaptive quadrature on [t_lo, t_hi] in log t. The omitted lower tail is
// bounded by t_lo^alpha; the upper tail needs a caller-declared decay bound
// P{(1/t) eps in B} <= c t^(-beta) for t >= t_hi with beta > alpha, and is
// reported as NaN when none is declared.
struct NuEvalConfig {
    double t_lo = 1e-10;
    double t_hi = 1e6;
    std::size_t samples = 2048;
    std::size_t batches = 16;
    double tail_decay_c = std::numeric_limits<double>::quiet_NaN();
    double tail_decay_beta = std::numeric_limits<double>::quiet_NaN();
    QuadConfig quad;
};

struct NuEvalResult {
    double value = 0.0;
    double std_error = 0.0;
    double lower_tail_bound = 0.0;
    double upper_tail_bound = std::numeric_limits<double>::quiet_NaN();
    bool quadrature_converged = true;
};

NuEvalResult nu_eval(const ConeDescriptor& desc, const RadialLaw& law,
                     const std::function<ConeElement(RngStream&)>& draw_mark,
                     const std::function<bool(const ConeElement&)>& in_set, RngStream& rng,
                     const NuEvalConfig& cfg);

} // namespace stablecone
