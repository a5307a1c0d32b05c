#include "core/character.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace stablecone {

Character Character::fourier(std::vector<PhaseTerm> terms) {
    if (terms.empty()) throw ContractViolation("fourier character needs at least one term");
    for (const auto& t : terms)
        if (!std::isfinite(t.freq)) throw ContractViolation("fourier frequency must be finite");
    Character c;
    c.family_ = Family::Fourier;
    c.phase_terms_ = std::move(terms);
    return c;
}

Character Character::indicator(std::vector<Cutoff> cutoffs) {
    if (cutoffs.empty()) throw ContractViolation("indicator character needs at least one cutoff");
    for (const auto& k : cutoffs)
        if (!(k.threshold > 0.0) || !std::isfinite(k.threshold))
            throw ContractViolation("indicator thresholds must be strictly positive");
    Character c;
    c.family_ = Family::Indicator;
    c.cutoffs_ = std::move(cutoffs);
    return c;
}

Character Character::laplace(std::vector<Tent> tents) {
    if (tents.empty()) throw ContractViolation("laplace character needs at least one tent");
    for (const auto& t : tents) {
        if (!(t.radius > 0.0) || !std::isfinite(t.radius))
            throw ContractViolation("tent radius must be strictly positive");
        if (!(t.amplitude >= 0.0) || !std::isfinite(t.amplitude))
            throw ContractViolation("tent amplitude must be non-negative");
        for (double c : t.center)
            if (!std::isfinite(c)) throw ContractViolation("tent center must be finite");
    }
    Character c;
    c.family_ = Family::Laplace;
    c.tents_ = std::move(tents);
    return c;
}

Character Character::exp_decay(std::vector<double> weights) {
    if (weights.empty()) throw ContractViolation("exp-decay character needs weights");
    for (double w : weights)
        if (!(w >= 0.0) || !std::isfinite(w))
            throw ContractViolation("exp-decay weights must be non-negative");
    Character c;
    c.family_ = Family::ExpDecay;
    c.decay_weights_ = std::move(weights);
    return c;
}

Character Character::product(const Character& other) const {
    if (family_ != other.family_)
        throw ContractViolation("character product is only defined within one family");
    Character c(*this);
    switch (family_) {
        case Family::Fourier:
            c.phase_terms_.insert(c.phase_terms_.end(), other.phase_terms_.begin(),
                                  other.phase_terms_.end());
            break;
        case Family::Indicator:
            c.cutoffs_.insert(c.cutoffs_.end(), other.cutoffs_.begin(), other.cutoffs_.end());
            break;
        case Family::Laplace:
            c.tents_.insert(c.tents_.end(), other.tents_.begin(), other.tents_.end());
            break;
        case Family::ExpDecay:
            if (c.decay_weights_.size() != other.decay_weights_.size())
                throw ContractViolation("exp-decay weight dimension mismatch");
            for (std::size_t i = 0; i < c.decay_weights_.size(); ++i)
                c.decay_weights_[i] += other.decay_weights_[i];
            break;
    }
    return c;
}

double Character::phase(const ConeElement& x) const {
    if (x.variant() == ConeVariant::AtomicMeasure)
        throw ContractViolation("fourier characters act on value payloads, not measures");
    const auto& v = x.values();
    double p = 0.0;
    for (const auto& t : phase_terms_) {
        if (t.index >= v.size()) throw ContractViolation("fourier term index out of range");
        p += t.freq * v[t.index];
    }
    return p;
}

double Character::decay_exponent(const ConeElement& x) const {
    if (family_ == Family::Laplace) {
        if (x.variant() != ConeVariant::AtomicMeasure)
            throw ContractViolation("laplace characters act on atomic measures");
        double s = 0.0;
        for (const auto& atom : x.atoms()) {
            double u = 0.0;
            for (const auto& tent : tents_) {
                if (tent.center.size() != atom.location.size())
                    throw ContractViolation("tent dimension does not match atom locations");
                double d2 = 0.0;
                for (std::size_t k = 0; k < tent.center.size(); ++k) {
                    const double d = atom.location[k] - tent.center[k];
                    d2 += d * d;
                }
                u += tent.amplitude * std::max(0.0, 1.0 - std::sqrt(d2) / tent.radius);
            }
            s += atom.weight * u;
        }
        return s;
    }
    // exp_decay
    if (x.variant() == ConeVariant::AtomicMeasure)
        throw ContractViolation("exp-decay characters act on value payloads");
    const auto& v = x.values();
    if (decay_weights_.size() != v.size())
        throw ContractViolation("exp-decay weight dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (decay_weights_[i] != 0.0 && v[i] < 0.0)
            throw ContractViolation("exp-decay characters need non-negative elements");
        s += decay_weights_[i] * v[i];
    }
    return s;
}

std::complex<double> Character::eval(const ConeElement& x) const {
    switch (family_) {
        case Family::Fourier: {
            const double p = phase(x);
            return {std::cos(p), std::sin(p)};
        }
        case Family::Indicator: {
            if (x.variant() != ConeVariant::GridFunction)
                throw ContractViolation("indicator characters act on grid functions");
            const auto& v = x.values();
            for (const auto& k : cutoffs_) {
                if (k.index >= v.size()) throw ContractViolation("indicator index out of range");
                if (!(v[k.index] < k.threshold)) return {0.0, 0.0};
            }
            return {1.0, 0.0};
        }
        case Family::Laplace:
        case Family::ExpDecay:
            return {std::exp(-decay_exponent(x)), 0.0};
    }
    throw ContractViolation("unknown character family");
}

double Character::one_minus_re(const ConeElement& x) const {
    switch (family_) {
        case Family::Fourier: {
            const double s = std::sin(0.5 * phase(x));
            return 2.0 * s * s;
        }
        case Family::Indicator:
            return 1.0 - eval(x).real();
        case Family::Laplace:
        case Family::ExpDecay:
            return -std::expm1(-decay_exponent(x));
    }
    throw ContractViolation("unknown character family");
}

std::string Character::label() const {
    std::ostringstream os;
    switch (family_) {
        case Family::Fourier:
            os << "fourier";
            for (const auto& t : phase_terms_) os << "_" << t.index << ":" << t.freq;
            break;
        case Family::Indicator:
            os << "indicator";
            for (const auto& k : cutoffs_) os << "_" << k.index << ":" << k.threshold;
            break;
        case Family::Laplace:
            os << "laplace";
            for (const auto& t : tents_)
                os << "_r" << t.radius << "a" << t.amplitude;
            break;
        case Family::ExpDecay:
            os << "expdecay";
            for (double w : decay_weights_) os << "_" << w;
            break;
    }
    return os.str();
}

} // namespace stablecone
