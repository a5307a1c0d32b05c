#pragma once

namespace stablecone {

// Radial component of the polar decomposition: a power-law measure on (0, inf)
// with tail mass theta{(b, inf)} = b^(-alpha).
struct RadialLaw {
    explicit RadialLaw(double alpha);

    double alpha() const { return alpha_; }

    // b^(-alpha), b > 0
    double tail(double b) const;

    // Inverse-cdf sample of the normalized law restricted to (b, inf):
    // b * (1 - u)^(-1/alpha) for u in (0, 1).
    double sample_above(double b, double u) const;

  private:
    double alpha_;
};

} // namespace stablecone
