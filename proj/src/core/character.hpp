#pragma once

#include <complex>
#include <string>
#include <vector>

#include "core/element.hpp"

namespace stablecone {

// Bounded semicharacters for the concrete cones, closed under finite
// products within each family:
//   fourier    exp(i sum_k u_k x[idx_k])   on sum cones (coords or grid values)
//   indicator  prod_k 1{x[idx_k] < a_k}    on max cones, thresholds a_k > 0
//   laplace    exp(-int u dmu)             on measure cones; u is a sum of
//              non-negative tent bumps, so 0 <= u and |chi| <= 1
//   exp_decay  exp(-<u, x>), u >= 0        on sum cones restricted to
//              non-negative elements (one-sided configurations)
class Character {
public:
    enum class Family { Fourier, Indicator, Laplace, ExpDecay };

    struct PhaseTerm {
        std::size_t index = 0;
        double freq = 0.0;
    };
    struct Cutoff {
        std::size_t index = 0;
        double threshold = 1.0;
    };
    struct Tent {
        std::vector<double> center;
        double radius = 1.0;
        double amplitude = 1.0;
    };

    static Character fourier(std::vector<PhaseTerm> terms);
    static Character indicator(std::vector<Cutoff> cutoffs);
    static Character laplace(std::vector<Tent> tents);
    static Character exp_decay(std::vector<double> weights);

    Family family() const { return family_; }
    const std::vector<PhaseTerm>& phase_terms() const { return phase_terms_; }
    const std::vector<Cutoff>& cutoffs() const { return cutoffs_; }
    const std::vector<Tent>& tents() const { return tents_; }
    const std::vector<double>& decay_weights() const { return decay_weights_; }

    // product within the same family; ContractViolation across families
    Character product(const Character& other) const;

    std::complex<double> eval(const ConeElement& x) const;

    // 1 - Re chi(x), computed without cancellation near chi = 1
    double one_minus_re(const ConeElement& x) const;

    std::string label() const;

private:
    Character() = default;

    double phase(const ConeElement& x) const;
    double decay_exponent(const ConeElement& x) const;

    Family family_ = Family::Fourier;
    std::vector<PhaseTerm> phase_terms_;
    std::vector<Cutoff> cutoffs_;
    std::vector<Tent> tents_;
    std::vector<double> decay_weights_;
};

} // namespace stablecone
