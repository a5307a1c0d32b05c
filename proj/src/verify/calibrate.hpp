#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "core/rng.hpp"

namespace stablecone {

// Batch-mean table: [probe][batch]. All probes share the batch layout.
using BatchTable = std::vector<std::vector<std::complex<double>>>;

struct CalibratedMaxStat {
    double statistic = 0.0;
    double threshold = 0.0;  // (1 - level) quantile of the resampled null
    double p_value = 1.0;
    bool passed = true;
    std::size_t worst_probe = 0;
    std::vector<double> probe_stats;      // [|delta| - allowance]_+ / se
    std::vector<double> probe_abs_delta;  // |delta|
    std::vector<double> probe_se;
};

// Two-sample comparison of probe means. The observed statistic is
//   max over probes of [|mean1 - mean2| - allowance]_+ / se,
// studentized by the combined batch-scatter standard error. Its null
// distribution is calibrated by permuting batch labels between the two
// sides (the same permutation for every probe, preserving cross-probe
// dependence); the permuted statistic omits the allowance, which only
// shrinks the observed value, so the comparison stays conservative.
// Both sides need the same batch count and equal batch sizes.
CalibratedMaxStat two_sample_calibrated(const BatchTable& side1, const BatchTable& side2,
                                        const std::vector<double>& allowances, double level,
                                        std::size_t permutations, RngStream& rng);

// Same statistic for per-batch values of a derived quantity (one sample
// set): observed max over probes of [|mean| - allowance]_+ / se, against a
// bootstrap of recentered batch values resampled with replacement, shared
// indices across probes.
CalibratedMaxStat bootstrap_calibrated(const BatchTable& batch_values,
                                       const std::vector<double>& allowances, double level,
                                       std::size_t resamples, RngStream& rng);

} // namespace stablecone
