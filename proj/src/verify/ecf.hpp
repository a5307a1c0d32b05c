#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "core/character.hpp"
#include "core/element.hpp"

namespace stablecone {

// Streaming empirical characteristic function over a fixed probe set.
// Samples are assigned to equally sized contiguous batches; batch means are
// the unit of resampling for every calibrated comparison, so the total
// sample count is fixed up front and must be divisible by the batch count.
class EcfAccumulator {
public:
    EcfAccumulator(std::vector<Character> probes, std::size_t total, std::size_t batches);

    void add(const ConeElement& x);

    std::size_t probe_count() const { return probes_.size(); }
    std::size_t count() const { return count_; }
    std::size_t total() const { return total_; }
    const std::vector<Character>& probes() const { return probes_; }

    // [probe][batch] batch means; requires all samples added
    std::vector<std::vector<std::complex<double>>> table() const;

    std::complex<double> mean(std::size_t probe) const;
    double std_error(std::size_t probe) const;

private:
    void require_complete() const;

    std::vector<Character> probes_;
    std::size_t total_;
    std::size_t batches_;
    std::size_t per_batch_;
    std::size_t count_ = 0;
    std::vector<std::vector<std::complex<double>>> sums_;  // [probe][batch]
};

// mean of one batch-mean column
std::complex<double> column_mean(const std::vector<std::complex<double>>& batch_means);

// standard error of the column mean from batch scatter, combining real and
// imaginary spread: sqrt((var_re + var_im) / batches)
double column_se(const std::vector<std::complex<double>>& batch_means);

} // namespace stablecone
