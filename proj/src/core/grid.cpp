#include "core/grid.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace stablecone {

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty()) throw ContractViolation("grid needs at least one point");
    double prev = -1.0;
    for (double p : points_) {
        if (!std::isfinite(p) || p < 0.0)
            throw ContractViolation("grid points must be finite and non-negative");
        if (p <= prev) throw ContractViolation("grid points must be strictly increasing");
        prev = p;
    }
}

double Grid::first_positive() const {
    for (double p : points_)
        if (p > 0.0) return p;
    throw ContractViolation("grid has no positive point");
}

double Grid::eval(const std::vector<double>& values, double q) const {
    // largest index with points_[j] <= q, then snap up across a sub-1e-9 gap
    auto it = std::upper_bound(points_.begin(), points_.end(), q);
    std::ptrdiff_t j = (it - points_.begin()) - 1;
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(points_.size());
    if (j + 1 < m && points_[j + 1] <= q * (1.0 + kSnapRel)) ++j;
    if (j < 0) {
        if (points_[0] <= q * (1.0 + kSnapRel)) return values[0];
        return 0.0;
    }
    return values[static_cast<std::size_t>(j)];
}

GridPtr make_grid(std::vector<double> points) {
    return std::make_shared<const Grid>(std::move(points));
}

} // namespace stablecone
