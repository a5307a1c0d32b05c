#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cones/factory.hpp"
#include "core/rng.hpp"
#include "lepage/series.hpp"
#include "verify/report.hpp"

namespace stablecone {

struct SuiteConfig {
    std::size_t n = 20000;
    double truncation_r = 1000.0;
    std::uint64_t master_seed = 20260816ull;
    std::size_t batches = 64;
    std::size_t permutations = 400;
    double level = 0.01;
    Mutation mutation = Mutation::None;
    // skip the scale-constant rescaling in the distributional comparison
    // (mutation knob: the test must then fail)
    bool cms_skip_rescale = false;
    double stability_a = 1.0;
    double stability_b = 1.0;
    std::vector<double> phi_scales{0.5, 2.0};
    std::vector<double> band_scales{0.5, 2.0, 3.0};
    // integrability scan is expensive per probe; only the first few run
    std::size_t eps_probe_cap = 4;
    double eps_log2_t_max = 10.0;
    std::size_t eps_samples = 256;
    std::size_t eps_batches = 4;
};

// alpha * int_0^inf (1 - cos t) t^(-alpha - 1) dt for alpha in (0, 2): the
// scale constant of the standard symmetric alpha-stable law on the line.
// Quadrature plus analytic tail corrections, absolute error < 1e-8. Cached.
double c_alpha(double alpha);

// One exact draw from the standard symmetric alpha-stable law
// (E exp(i u X) = exp(-c_alpha |u|^alpha)), alpha in (0, 2).
double cms_standard_sample(double alpha, RngStream& rng);

// Bound on |E chi(x_r) - E chi(x_inf)| where x_r is a rate-`rate` series
// truncated so that only arrivals <= r of the unit-rate superposition are
// kept, and every sampled element is rescaled by value_scale before chi is
// applied. NaN when the spectral law's declared moments cannot support a
// bound for this character family.
double ecf_truncation_allowance(const ConeDescriptor& desc, const SpectralSampler& spectral,
                                const Character& chi, double alpha, double rate, double r,
                                double value_scale);

// Bound on |phi_r(a chi) - a^alpha phi_r(chi)| caused by truncation alone;
// the identity phi_r(a chi) = a^alpha phi_{r a^(-alpha)}(chi) is exact, so
// the discrepancy is a^alpha times an integral of E[1 - chi(t eps)] over t
// between r^(-1/alpha) and a r^(-1/alpha).
double phi_shift_allowance(const ConeDescriptor& desc, const SpectralSampler& spectral,
                           const Character& chi, double alpha, double a, double r);

// scale(a^(1/alpha), X') + scale(b^(1/alpha), X'') against
// scale((a+b)^(1/alpha), X) across the cone's probe characters, with a
// permutation-calibrated max statistic and truncation allowances.
VerificationReport stability_test(const WiredCone& cone, const SuiteConfig& cfg);

// Estimated truncated exponent phi_r(a chi) against a^alpha phi_r(chi) for
// each configured scale, bootstrap-calibrated.
VerificationReport phi_homogeneity_test(const WiredCone& cone, const SuiteConfig& cfg);

// Counts of series points with rho = Gamma^(-1/alpha) tau(eps) in fixed
// bands against the v^(-alpha) power law: exact Poisson intervals for band
// [v, w) and its scaled copy [s v, s w) must overlap after s^alpha
// rescaling.
VerificationReport empirical_homogeneity_test(const WiredCone& cone, const SuiteConfig& cfg);

// One-dimensional series with symmetric unit marks, rescaled by
// c_alpha^(-1/alpha), against exact standard symmetric alpha-stable draws.
// Requires a one-dimensional cone under ordinary multiplication.
VerificationReport cms_comparison_test(const WiredCone& cone, const SuiteConfig& cfg);

// Integrability scan of E[1 - Re chi(t eps)] * alpha t^(-alpha-1) for the
// first few probes: flags divergence at the small-t end from the fitted
// log-log slope.
VerificationReport eps_integrability_report(const WiredCone& cone, const SuiteConfig& cfg);

std::string mutation_name(Mutation m);

// suite: stability | phi | homogeneity | cms | eps | all. "all" includes
// the distributional comparison only where it is defined (one-dimensional
// cone under multiplication); asking for "cms" elsewhere throws.
std::vector<VerificationReport> run_suite(const WiredCone& cone, const std::string& suite,
                                          const SuiteConfig& cfg);

} // namespace stablecone
