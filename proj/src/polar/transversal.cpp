#include "polar/transversal.hpp"

#include <cmath>
#include <limits>

#include "errors.hpp"

namespace stablecone {

namespace {

double values_l2(const ConeElement& x) {
    double s = 0.0;
    for (double v : x.values()) s += v * v;
    return std::sqrt(s);
}

double values_sup(const ConeElement& x) {
    double s = 0.0;
    for (double v : x.values()) s = std::max(s, std::fabs(v));
    return s;
}

// |scale(1/e^s, x)| is strictly decreasing in s for the supported scalings;
// solve |scale(e^-s, x)| = 1 in s, return e^s.
double orbit_norm_tau(const ConeDescriptor& desc, const ConeElement& x) {
    const auto gauge = [&](double s) { return values_l2(scale(desc, std::exp(-s), x)); };
    const double kMaxLog = 700.0;
    double lo = 0.0, hi = 0.0;
    if (gauge(0.0) > 1.0) {
        hi = 1.0;
        while (gauge(hi) > 1.0) {
            lo = hi;
            hi *= 2.0;
            if (hi > kMaxLog) throw PreconditionError("orbit norm failed to bracket the unit level");
        }
    } else {
        lo = -1.0;
        while (gauge(lo) <= 1.0) {
            hi = lo;
            lo *= 2.0;
            if (lo < -kMaxLog) throw PreconditionError("orbit norm failed to bracket the unit level");
        }
    }
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (gauge(mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

struct Crossing {
    std::size_t char_index = 0;
    int bucket = 0;
    double time = 0.0;
};

// Dyadic scan over t = 2^k, k in [-40, 40], to pick the first character whose
// h is not identically zero along the orbit and to estimate sup_t h(tx); then
// geometric bisection down to the crossing of the bucket threshold.
Crossing locate_crossing(const std::vector<Character>& chars, const ConeDescriptor& desc,
                         const ConeElement& x) {
    const int kScanLo = -40;
    const int kScanHi = 40;

    std::size_t chosen = chars.size();
    double sup = 0.0;
    std::vector<double> scan;
    for (std::size_t n = 0; n < chars.size(); ++n) {
        std::vector<double> vals;
        vals.reserve(kScanHi - kScanLo + 1);
        double s = 0.0;
        for (int k = kScanLo; k <= kScanHi; ++k) {
            const double h = chars[n].one_minus_re(scale(desc, std::ldexp(1.0, k), x));
            vals.push_back(h);
            s = std::max(s, h);
        }
        if (s > 0.0) {
            chosen = n;
            sup = s;
            scan = std::move(vals);
            break;
        }
    }
    if (chosen == chars.size())
        throw OrbitOutsideDomain("every listed character is constant along the orbit of this element");

    int bucket = 0;
    if (!(sup > 1.0)) {
        bucket = static_cast<int>(std::floor(-std::log2(sup))) + 1;
        while (!(sup > std::ldexp(1.0, -bucket))) ++bucket;
    }
    const double thr = std::ldexp(1.0, -bucket);

    const Character& chi = chars[chosen];
    const auto h_at = [&](double t) { return chi.one_minus_re(scale(desc, t, x)); };

    int kstar = kScanLo;
    while (!(scan[static_cast<std::size_t>(kstar - kScanLo)] > thr)) ++kstar;

    double hi = std::ldexp(1.0, kstar);
    double lo = hi * 0.5;
    while (h_at(lo) > thr) {
        hi = lo;
        lo *= 0.5;
        if (lo < std::ldexp(1.0, -200))
            throw PreconditionError("character crossing search ran below the scan range");
    }
    for (int i = 0; i < 80; ++i) {
        const double mid = std::sqrt(lo * hi);
        if (h_at(mid) > thr)
            hi = mid;
        else
            lo = mid;
    }
    // Under time reparametrization h is a step function of t whose jumps sit
    // one snap width below the exact grid-point ratios, because grid reads
    // snap upward. Nudge the crossing back onto the ratio so that scaling by
    // the radial factor and by its reciprocal both land reads decisively on
    // grid points instead of straddling the snap boundary.
    if (desc.scaling == ScalingKind::TimeReparam) hi *= 1.0 + Grid::kSnapRel;
    return Crossing{chosen, bucket, hi};
}

} // namespace

Transversal Transversal::vector_norm() { return Transversal(TransversalKind::VectorNorm); }
Transversal Transversal::sup_norm() { return Transversal(TransversalKind::SupNorm); }
Transversal Transversal::total_mass() { return Transversal(TransversalKind::TotalMass); }
Transversal Transversal::orbit_norm() { return Transversal(TransversalKind::OrbitNorm); }

Transversal Transversal::character_based(std::vector<Character> chars) {
    if (chars.empty()) throw DomainError("character transversal needs at least one character");
    Transversal t(TransversalKind::CharacterBased);
    t.chars_ = std::move(chars);
    return t;
}

double Transversal::tau(const ConeDescriptor& desc, const ConeElement& x) const {
    if (x.is_neutral()) throw DomainError("the neutral element has no radial coordinate");
    switch (kind_) {
        case TransversalKind::VectorNorm:
            return values_l2(x);
        case TransversalKind::SupNorm:
            return values_sup(x);
        case TransversalKind::TotalMass:
            return x.total_mass();
        case TransversalKind::OrbitNorm:
            return orbit_norm_tau(desc, x);
        case TransversalKind::CharacterBased:
            return 1.0 / locate_crossing(chars_, desc, x).time;
    }
    throw ContractViolation("unknown transversal kind");
}

double Transversal::first_crossing_time(const ConeDescriptor& desc, const ConeElement& x) const {
    if (kind_ != TransversalKind::CharacterBased)
        throw ContractViolation("crossing times exist only for the character transversal");
    if (x.is_neutral()) throw DomainError("the neutral element has no radial coordinate");
    return locate_crossing(chars_, desc, x).time;
}

PolarPair Transversal::decompose(const ConeDescriptor& desc, const ConeElement& x) const {
    const double r = tau(desc, x);
    if (!(r > 0.0) || !std::isfinite(r))
        throw ContractViolation("radial coordinate must be positive and finite");
    PolarPair p{scale(desc, 1.0 / r, x), r};
    if (p.angular.is_neutral())
        throw ContractViolation("angular part collapsed to the neutral element");
    return p;
}

ConeElement compose(const ConeDescriptor& desc, const PolarPair& p) {
    if (!(p.radial > 0.0) || !std::isfinite(p.radial))
        throw DomainError("polar pair needs a positive finite radial part");
    if (p.angular.is_neutral()) throw DomainError("polar pair needs a non-neutral angular part");
    return scale(desc, p.radial, p.angular);
}

} // namespace stablecone
