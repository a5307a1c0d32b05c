#include "polar/radial.hpp"

#include <cmath>

#include "errors.hpp"

namespace stablecone {

RadialLaw::RadialLaw(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("radial index must be a positive finite number");
}

double RadialLaw::tail(double b) const {
    if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("radial tail level must be positive and finite");
    return std::pow(b, -alpha_);
}

double RadialLaw::sample_above(double b, double u) const {
    if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("radial tail level must be positive and finite");
    if (!(u > 0.0) || !(u < 1.0)) throw DomainError("uniform variate must lie in (0,1)");
    return b * std::pow(1.0 - u, -1.0 / alpha_);
}

} // namespace stablecone
