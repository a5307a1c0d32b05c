#include "verify/ecf.hpp"

#include <cmath>
#include <utility>

#include "errors.hpp"

namespace stablecone {

EcfAccumulator::EcfAccumulator(std::vector<Character> probes, std::size_t total,
                               std::size_t batches)
    : probes_(std::move(probes)), total_(total), batches_(batches) {
    if (probes_.empty()) throw ContractViolation("need at least one probe character");
    if (batches_ < 2) throw ContractViolation("need at least two batches");
    if (total_ == 0 || total_ % batches_ != 0)
        throw ContractViolation("sample count must be a positive multiple of the batch count");
    per_batch_ = total_ / batches_;
    sums_.assign(probes_.size(), std::vector<std::complex<double>>(batches_, {0.0, 0.0}));
}

void EcfAccumulator::add(const ConeElement& x) {
    if (count_ >= total_) throw ContractViolation("accumulator already holds all its samples");
    const std::size_t b = count_ / per_batch_;
    for (std::size_t p = 0; p < probes_.size(); ++p) sums_[p][b] += probes_[p].eval(x);
    ++count_;
}

void EcfAccumulator::require_complete() const {
    if (count_ != total_)
        throw ContractViolation("accumulator is incomplete; add all samples first");
}

std::vector<std::vector<std::complex<double>>> EcfAccumulator::table() const {
    require_complete();
    std::vector<std::vector<std::complex<double>>> out(sums_.size());
    const double m = static_cast<double>(per_batch_);
    for (std::size_t p = 0; p < sums_.size(); ++p) {
        out[p].resize(batches_);
        for (std::size_t b = 0; b < batches_; ++b) out[p][b] = sums_[p][b] / m;
    }
    return out;
}

std::complex<double> EcfAccumulator::mean(std::size_t probe) const {
    require_complete();
    std::complex<double> s{0.0, 0.0};
    for (const auto& z : sums_.at(probe)) s += z;
    return s / static_cast<double>(total_);
}

double EcfAccumulator::std_error(std::size_t probe) const {
    require_complete();
    std::vector<std::complex<double>> col(batches_);
    const double m = static_cast<double>(per_batch_);
    for (std::size_t b = 0; b < batches_; ++b) col[b] = sums_.at(probe)[b] / m;
    return column_se(col);
}

std::complex<double> column_mean(const std::vector<std::complex<double>>& batch_means) {
    std::complex<double> s{0.0, 0.0};
    for (const auto& z : batch_means) s += z;
    return s / static_cast<double>(batch_means.size());
}

double column_se(const std::vector<std::complex<double>>& batch_means) {
    const std::size_t b = batch_means.size();
    if (b < 2) throw ContractViolation("need at least two batches for a standard error");
    const std::complex<double> m = column_mean(batch_means);
    double ss = 0.0;
    for (const auto& z : batch_means) ss += std::norm(z - m);
    return std::sqrt(ss / (static_cast<double>(b) * static_cast<double>(b - 1)));
}

} // namespace stablecone
