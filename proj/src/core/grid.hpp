#pragma once

#include <memory>
#include <vector>

namespace stablecone {

// Shared, strictly increasing time grid on [0, inf). Grid functions are
// cadlag step interpolants over these points: constant from each point to
// the next, constant beyond the last point, and 0 left of the first.
// Elements of a cone must all reference the same Grid object; grid identity
// is part of the descriptor contract.
class Grid {
public:
    explicit Grid(std::vector<double> points);

    const std::vector<double>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    double front() const { return points_.front(); }
    double back() const { return points_.back(); }

    // first strictly positive grid point (the whole grid if front() > 0)
    double first_positive() const;

    // cadlag evaluation of `values` (aligned with points()) at query time q.
    // Queries within kSnapRel relative distance below a grid point snap up to
    // it so that compositions whose breakpoints stay on the grid closure are
    // exact in floating point.
    double eval(const std::vector<double>& values, double q) const;

    static constexpr double kSnapRel = 1e-9;

private:
    std::vector<double> points_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(std::vector<double> points);

} // namespace stablecone
