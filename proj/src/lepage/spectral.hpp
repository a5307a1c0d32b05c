#pragma once

#include <functional>
#include <limits>
#include <string>

#include "core/descriptor.hpp"
#include "core/element.hpp"
#include "core/rng.hpp"

namespace stablecone {

// Spectral mark distribution selector. `lo`/`hi` parametrize the
// uniform_profile kind (support of each grid value).
struct SpectralSpec {
    std::string kind = "constant_one";
    double lo = 0.5;
    double hi = 1.5;
};

// I.i.d. mark generator for one cone. Declared moments are set where the
// distribution makes them exact and NaN otherwise; bias bounds and ECF
// truncation allowances consume only declared values, never estimates.
//
// Kinds:
//   constant_one     all coordinates / grid values equal 1 (sum and max cones)
//   rademacher       independent +-1 coordinates, symmetric (sum cones)
//   gaussian         independent standard normal coordinates (sum cones)
//   uniform_profile  independent Uniform(lo, hi) grid values, 0 < lo < hi
//                    (max cones)
//   step_rademacher  +-1 step starting at a uniformly chosen positive grid
//                    point, symmetric (time-reparametrized cones)
//   single_atom      one atom, uniform location in [0,1]^d, weight 1
//                    (measure cones)
struct SpectralSampler {
    std::string kind;
    ConeVariant variant = ConeVariant::Euclidean;
    std::size_t width = 0;
    bool symmetric = false;

    double mean_norm = std::numeric_limits<double>::quiet_NaN();
    double mean_abs = std::numeric_limits<double>::quiet_NaN();
    double mean_square = std::numeric_limits<double>::quiet_NaN();
    double sup_bound = std::numeric_limits<double>::quiet_NaN();
    double inf_bound = std::numeric_limits<double>::quiet_NaN();

    // fast path for value variants: writes `width` doubles
    std::function<void(RngStream&, double*)> fill;
    // element path, used by measure cones and whenever marks are materialized
    std::function<ConeElement(RngStream&)> make_element;

    // draws one mark, resampling the (probability-zero) neutral outcomes;
    // after 1000 consecutive neutral draws the law is considered degenerate
    ConeElement draw(RngStream& rng, std::size_t* rejected = nullptr) const;
};

SpectralSampler make_spectral(const ConeDescriptor& desc, const SpectralSpec& spec);

} // namespace stablecone
