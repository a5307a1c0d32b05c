#include "polar/nu_eval.hpp"

#include <cmath>
#include <vector>

#include "errors.hpp"

namespace stablecone {

NuEvalResult nu_eval(const ConeDescriptor& desc, const RadialLaw& law,
                     const std::function<ConeElement(RngStream&)>& draw_mark,
                     const std::function<bool(const ConeElement&)>& in_set, RngStream& rng,
                     const NuEvalConfig& cfg) {
    if (!(cfg.t_lo > 0.0) || !(cfg.t_hi > cfg.t_lo) || !std::isfinite(cfg.t_hi))
        throw DomainError("nu_eval needs 0 < t_lo < t_hi < inf");
    if (cfg.batches < 2 || cfg.samples < cfg.batches)
        throw DomainError("nu_eval needs at least 2 batches and one sample per batch");
    const bool tail_declared = !std::isnan(cfg.tail_decay_c);
    if (tail_declared) {
        if (!(cfg.tail_decay_c >= 0.0) || !std::isfinite(cfg.tail_decay_c))
            throw DomainError("declared tail constant must be finite and non-negative");
        if (cfg.tail_decay_c > 0.0 && !(cfg.tail_decay_beta > law.alpha()))
            throw DomainError("declared tail exponent must exceed the radial index");
    }

    std::vector<ConeElement> marks;
    marks.reserve(cfg.samples);
    for (std::size_t i = 0; i < cfg.samples; ++i) marks.push_back(draw_mark(rng));

    const double alpha = law.alpha();
    std::vector<double> batch_values;
    batch_values.reserve(cfg.batches);
    bool converged = true;
    for (std::size_t b = 0; b < cfg.batches; ++b) {
        const std::size_t begin = b * cfg.samples / cfg.batches;
        const std::size_t end = (b + 1) * cfg.samples / cfg.batches;
        const auto integrand = [&](double t) {
            std::size_t hits = 0;
            const double inv = 1.0 / t;
            for (std::size_t i = begin; i < end; ++i)
                if (in_set(scale(desc, inv, marks[i]))) ++hits;
            const double p = static_cast<double>(hits) / static_cast<double>(end - begin);
            return alpha * std::pow(t, alpha - 1.0) * p;
        };
        const QuadResult q = integrate_log_sub(integrand, cfg.t_lo, cfg.t_hi, cfg.quad);
        converged = converged && q.converged;
        batch_values.push_back(q.value);
    }

    NuEvalResult out;
    double mean = 0.0;
    for (double v : batch_values) mean += v;
    mean /= static_cast<double>(batch_values.size());
    double ss = 0.0;
    for (double v : batch_values) ss += (v - mean) * (v - mean);
    const double nb = static_cast<double>(batch_values.size());
    out.value = mean;
    out.std_error = std::sqrt(ss / (nb * (nb - 1.0)));
    out.lower_tail_bound = std::pow(cfg.t_lo, alpha);
    if (tail_declared) {
        out.upper_tail_bound =
            cfg.tail_decay_c == 0.0
                ? 0.0
                : alpha * cfg.tail_decay_c * std::pow(cfg.t_hi, alpha - cfg.tail_decay_beta) /
                      (cfg.tail_decay_beta - alpha);
    }
    out.quadrature_converged = converged;
    return out;
}

} // namespace stablecone
