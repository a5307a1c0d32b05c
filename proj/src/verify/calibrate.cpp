#include "verify/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "errors.hpp"
#include "verify/ecf.hpp"

namespace stablecone {
namespace {

void check_table(const BatchTable& t, const char* what) {
    if (t.empty()) throw ContractViolation(std::string(what) + " has no probes");
    for (const auto& col : t)
        if (col.size() != t.front().size() || col.size() < 2)
            throw ContractViolation(std::string(what) + " needs equal batch counts of at least 2");
}

double positive_part_ratio(double num, double se) {
    if (!(num > 0.0)) return 0.0;
    if (se <= 0.0) return std::numeric_limits<double>::infinity();
    return num / se;
}

double upper_quantile(std::vector<double> vals, double level) {
    std::sort(vals.begin(), vals.end());
    const double pos = std::ceil((1.0 - level) * static_cast<double>(vals.size())) - 1.0;
    const std::size_t k =
        static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(vals.size() - 1)));
    return vals[k];
}

std::size_t index_below(RngStream& rng, std::size_t n) {
    return static_cast<std::size_t>(rng.raw() % static_cast<std::uint64_t>(n));
}

} // namespace

CalibratedMaxStat two_sample_calibrated(const BatchTable& side1, const BatchTable& side2,
                                        const std::vector<double>& allowances, double level,
                                        std::size_t permutations, RngStream& rng) {
    check_table(side1, "side 1");
    check_table(side2, "side 2");
    if (side1.size() != side2.size())
        throw ContractViolation("the two sides must share the probe set");
    if (allowances.size() != side1.size())
        throw ContractViolation("one allowance per probe required");
    if (!(level > 0.0 && level < 0.5)) throw ContractViolation("level must be in (0, 0.5)");
    if (permutations < 50) throw ContractViolation("need at least 50 permutations");

    const std::size_t probes = side1.size();
    const std::size_t b1 = side1.front().size();
    const std::size_t b2 = side2.front().size();

    CalibratedMaxStat out;
    out.probe_stats.resize(probes);
    out.probe_abs_delta.resize(probes);
    out.probe_se.resize(probes);
    for (std::size_t p = 0; p < probes; ++p) {
        const std::complex<double> d = column_mean(side1[p]) - column_mean(side2[p]);
        const double se = std::hypot(column_se(side1[p]), column_se(side2[p]));
        out.probe_abs_delta[p] = std::abs(d);
        out.probe_se[p] = se;
        out.probe_stats[p] = positive_part_ratio(out.probe_abs_delta[p] - allowances[p], se);
    }
    out.statistic = *std::max_element(out.probe_stats.begin(), out.probe_stats.end());
    out.worst_probe = static_cast<std::size_t>(
        std::max_element(out.probe_stats.begin(), out.probe_stats.end()) -
        out.probe_stats.begin());

    // permutation null of the allowance-free statistic
    std::vector<std::size_t> labels(b1 + b2);
    std::iota(labels.begin(), labels.end(), 0);
    std::vector<std::complex<double>> g1(b1), g2(b2);
    std::vector<double> null_stats(permutations);
    for (std::size_t perm = 0; perm < permutations; ++perm) {
        for (std::size_t i = labels.size(); i > 1; --i)
            std::swap(labels[i - 1], labels[index_below(rng, i)]);
        double stat = 0.0;
        for (std::size_t p = 0; p < probes; ++p) {
            for (std::size_t i = 0; i < b1; ++i) {
                const std::size_t l = labels[i];
                g1[i] = l < b1 ? side1[p][l] : side2[p][l - b1];
            }
            for (std::size_t i = 0; i < b2; ++i) {
                const std::size_t l = labels[b1 + i];
                g2[i] = l < b1 ? side1[p][l] : side2[p][l - b1];
            }
            const double d = std::abs(column_mean(g1) - column_mean(g2));
            const double se = std::hypot(column_se(g1), column_se(g2));
            stat = std::max(stat, positive_part_ratio(d, se));
        }
        null_stats[perm] = stat;
    }
    out.threshold = upper_quantile(null_stats, level);
    std::size_t ge = 0;
    for (double s : null_stats)
        if (s >= out.statistic) ++ge;
    out.p_value = static_cast<double>(1 + ge) / static_cast<double>(1 + permutations);
    out.passed = out.statistic <= out.threshold;
    return out;
}

CalibratedMaxStat bootstrap_calibrated(const BatchTable& batch_values,
                                       const std::vector<double>& allowances, double level,
                                       std::size_t resamples, RngStream& rng) {
    check_table(batch_values, "batch table");
    if (allowances.size() != batch_values.size())
        throw ContractViolation("one allowance per probe required");
    if (!(level > 0.0 && level < 0.5)) throw ContractViolation("level must be in (0, 0.5)");
    if (resamples < 50) throw ContractViolation("need at least 50 resamples");

    const std::size_t probes = batch_values.size();
    const std::size_t b = batch_values.front().size();

    CalibratedMaxStat out;
    out.probe_stats.resize(probes);
    out.probe_abs_delta.resize(probes);
    out.probe_se.resize(probes);
    std::vector<std::complex<double>> means(probes);
    for (std::size_t p = 0; p < probes; ++p) {
        means[p] = column_mean(batch_values[p]);
        out.probe_abs_delta[p] = std::abs(means[p]);
        out.probe_se[p] = column_se(batch_values[p]);
        out.probe_stats[p] =
            positive_part_ratio(out.probe_abs_delta[p] - allowances[p], out.probe_se[p]);
    }
    out.statistic = *std::max_element(out.probe_stats.begin(), out.probe_stats.end());
    out.worst_probe = static_cast<std::size_t>(
        std::max_element(out.probe_stats.begin(), out.probe_stats.end()) -
        out.probe_stats.begin());

    std::vector<std::size_t> idx(b);
    std::vector<double> null_stats(resamples);
    for (std::size_t rep = 0; rep < resamples; ++rep) {
        for (std::size_t j = 0; j < b; ++j) idx[j] = index_below(rng, b);
        double stat = 0.0;
        for (std::size_t p = 0; p < probes; ++p) {
            std::complex<double> m{0.0, 0.0};
            for (std::size_t j = 0; j < b; ++j) m += batch_values[p][idx[j]] - means[p];
            m /= static_cast<double>(b);
            stat = std::max(stat, positive_part_ratio(std::abs(m), out.probe_se[p]));
        }
        null_stats[rep] = stat;
    }
    out.threshold = upper_quantile(null_stats, level);
    std::size_t ge = 0;
    for (double s : null_stats)
        if (s >= out.statistic) ++ge;
    out.p_value = static_cast<double>(1 + ge) / static_cast<double>(1 + resamples);
    out.passed = out.statistic <= out.threshold;
    return out;
}

} // namespace stablecone
