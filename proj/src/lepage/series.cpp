#include "lepage/series.hpp"

#include <cmath>

#include "errors.hpp"

namespace stablecone {

namespace {

constexpr std::size_t kNeutralRedrawCap = 1000;

struct RadialWeight {
    explicit RadialWeight(double exponent) : e_(exponent) {
        if (e_ == -1.0)
            mode_ = Mode::Reciprocal;
        else if (e_ == -2.0)
            mode_ = Mode::ReciprocalSquare;
        else
            mode_ = Mode::Pow;
    }
    double operator()(double g) const {
        switch (mode_) {
            case Mode::Reciprocal: return 1.0 / g;
            case Mode::ReciprocalSquare: return 1.0 / (g * g);
            case Mode::Pow: return std::pow(g, e_);
        }
        return std::pow(g, e_);
    }

  private:
    enum class Mode { Reciprocal, ReciprocalSquare, Pow };
    double e_;
    Mode mode_ = Mode::Pow;
};

bool fill_non_neutral(const SpectralSampler& spectral, RngStream& rng, double* buf,
                      std::size_t width, std::size_t& rejected) {
    for (std::size_t attempt = 0; attempt < kNeutralRedrawCap; ++attempt) {
        spectral.fill(rng, buf);
        bool zero = true;
        for (std::size_t i = 0; i < width; ++i)
            if (buf[i] != 0.0) {
                zero = false;
                break;
            }
        if (!zero) return true;
        ++rejected;
    }
    return false;
}

double grid_ratio_cutoff(const ConeDescriptor& desc, double alpha) {
    const double g1 = desc.grid->first_positive();
    return std::pow(desc.grid->back() / g1, alpha);
}

} // namespace

double radial_weight_exponent(double alpha, Mutation m) {
    switch (m) {
        case Mutation::None: return -1.0 / alpha;
        case Mutation::RadialExponentOne: return -1.0;
        case Mutation::RadialAlphaDoubled: return -1.0 / (2.0 * alpha);
    }
    throw ContractViolation("unknown mutation");
}

std::vector<double> gamma_sequence(RngStream& rng, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("truncation level must be positive and finite");
    std::vector<double> out;
    double g = rng.exp1();
    while (g <= r) {
        out.push_back(g);
        g += rng.exp1();
    }
    return out;
}

BiasBound truncation_bias_bound(const ConeDescriptor& desc, const RadialLaw& law,
                                const SpectralSampler& spectral, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("truncation level must be positive and finite");
    const double alpha = law.alpha();
    BiasBound out;

    const auto power_tail = [&](double mu) {
        // expected-norm and (for symmetric laws) root-mean-square tail
        // integrals; mu is the orbit-norm decay rate of one scaling unit
        double best = std::numeric_limits<double>::quiet_NaN();
        bool slow = false;
        if (mu > alpha && !std::isnan(spectral.mean_norm)) {
            const double expo = (mu - alpha) / alpha;
            best = spectral.mean_norm * alpha / (mu - alpha) * std::pow(r, -expo);
            slow = expo < 0.1;
        }
        if (spectral.symmetric && 2.0 * mu > alpha && !std::isnan(spectral.mean_square)) {
            const double expo = (2.0 * mu - alpha) / (2.0 * alpha);
            const double rms = std::sqrt(static_cast<double>(spectral.width) *
                                         spectral.mean_square * alpha / (2.0 * mu - alpha)) *
                               std::pow(r, -expo);
            if (std::isnan(best) || rms < best) {
                best = rms;
                slow = expo < 0.1;
            }
        }
        out.value = best;
        out.slow_decay = slow && !std::isnan(best);
    };

    switch (desc.scaling) {
        case ScalingKind::Multiplicative:
            if (desc.op == SemigroupOp::PointwiseMax) {
                if (!std::isnan(spectral.sup_bound) && spectral.inf_bound > 0.0) {
                    const double kappa = std::pow(spectral.sup_bound / spectral.inf_bound, alpha);
                    out.value = std::exp(-r / kappa);
                }
            } else {
                power_tail(1.0);
            }
            break;
        case ScalingKind::OperatorExp:
            power_tail(sym_part_min_eigenvalue(desc.matrix));
            break;
        case ScalingKind::TimeReparam:
            if (r >= grid_ratio_cutoff(desc, alpha)) out.value = 0.0;
            break;
        case ScalingKind::WeightScaling:
            power_tail(1.0);
            break;
    }
    return out;
}

SeriesSample sample_series(const ConeDescriptor& desc, const RadialLaw& law,
                           const SpectralSampler& spectral, const SeriesOptions& opts,
                           RngStream& rng) {
    const double r = opts.truncation_r;
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("truncation level must be positive and finite");
    const double alpha = law.alpha();
    if (!desc.alpha_admissible.admits(alpha, spectral.symmetric))
        throw PreconditionError(
            "stability index outside the admissible window for uncompensated summation");
    if (opts.normalize_to_transversal && opts.transversal == nullptr)
        throw DomainError("normalize-to-transversal needs a transversal");

    SeriesSample out(desc.neutral());
    out.truncation_r = r;
    out.master_seed = rng.master_seed();
    out.stream_id = rng.stream_id();

    const RadialWeight weight(radial_weight_exponent(alpha, opts.mutation));
    const BiasBound apriori = truncation_bias_bound(desc, law, spectral, r);
    out.bias_bound = apriori.value;
    out.slow_decay = apriori.slow_decay;

    const bool generic = opts.keep_points || opts.normalize_to_transversal ||
                         desc.variant == ConeVariant::AtomicMeasure;

    if (generic) {
        ConeElement acc = desc.neutral();
        double g = rng.exp1();
        double tau_pow_sum = 0.0;
        while (g <= r) {
            ConeElement mark = spectral.draw(rng, &out.rejected_neutral_draws);
            if (opts.normalize_to_transversal) {
                const PolarPair p = opts.transversal->decompose(desc, mark);
                tau_pow_sum += std::pow(p.radial, alpha);
                mark = p.angular;
            }
            const double w = weight(g);
            if (opts.keep_points) {
                out.gammas.push_back(g);
                out.marks.push_back(mark);
            }
            acc = add(desc, acc, scale(desc, w, mark));
            ++out.term_count;
            g += rng.exp1();
        }
        out.value = std::move(acc);
        if (opts.normalize_to_transversal && out.term_count > 0)
            out.scale_constant = tau_pow_sum / static_cast<double>(out.term_count);
    } else {
        const std::size_t width = spectral.width;
        std::vector<double> acc(width, 0.0);
        std::vector<double> buf(width);
        std::vector<double> tmp(width);
        double g = rng.exp1();
        while (g <= r) {
            if (!fill_non_neutral(spectral, rng, buf.data(), width, out.rejected_neutral_draws))
                throw PreconditionError("spectral law keeps drawing the neutral element");
            const double w = weight(g);
            switch (desc.scaling) {
                case ScalingKind::Multiplicative:
                    if (desc.op == SemigroupOp::PointwiseMax) {
                        for (std::size_t i = 0; i < width; ++i)
                            acc[i] = std::max(acc[i], w * buf[i]);
                    } else {
                        for (std::size_t i = 0; i < width; ++i) acc[i] += w * buf[i];
                    }
                    break;
                case ScalingKind::OperatorExp:
                    expm(desc.matrix.scaled(std::log(w))).apply(buf.data(), tmp.data());
                    for (std::size_t i = 0; i < width; ++i) acc[i] += tmp[i];
                    break;
                case ScalingKind::TimeReparam: {
                    const auto& pts = desc.grid->points();
                    for (std::size_t i = 0; i < width; ++i)
                        acc[i] += desc.grid->eval(buf, w * pts[i]);
                    break;
                }
                case ScalingKind::WeightScaling:
                    throw ContractViolation("measure cones take the element accumulation path");
            }
            ++out.term_count;
            g += rng.exp1();
        }
        if (desc.variant == ConeVariant::GridFunction)
            out.value = ConeElement::grid_function(desc.grid, std::move(acc));
        else
            out.value = ConeElement::euclidean(std::move(acc));
    }

    if (desc.op == SemigroupOp::PointwiseMax && !std::isnan(spectral.sup_bound)) {
        double agg_min = std::numeric_limits<double>::infinity();
        for (double v : out.value.values()) agg_min = std::min(agg_min, v);
        if (agg_min <= 0.0) {
            out.bias_bound = 1.0;
        } else {
            const double lambda =
                std::max(0.0, std::pow(agg_min / spectral.sup_bound, -alpha) - r);
            out.bias_bound = -std::expm1(-lambda);
        }
    }
    return out;
}

} // namespace stablecone
