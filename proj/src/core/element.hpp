#pragma once

#include <cstddef>
#include <vector>

#include "core/grid.hpp"

namespace stablecone {

enum class ConeVariant { Euclidean, GridFunction, AtomicMeasure };

struct Atom {
    std::vector<double> location;
    double weight = 0.0;
};

// Value of a cone element. One of: a coordinate vector, a grid function
// (values aligned with a shared Grid), or a finite atomic measure.
// Neutrality is derived from the payload, never stored independently:
// all-zero values, or no atoms. Zero-weight atoms are dropped on
// construction so that representation stays consistent; duplicate atom
// locations are kept as-is (summation concatenates, it never merges).
class ConeElement {
public:
    static ConeElement euclidean(std::vector<double> coords);
    static ConeElement grid_function(GridPtr grid, std::vector<double> values);
    static ConeElement atomic_measure(std::size_t location_dim, std::vector<Atom> atoms);

    static ConeElement neutral_euclidean(std::size_t dim);
    static ConeElement neutral_grid(GridPtr grid);
    static ConeElement neutral_measure(std::size_t location_dim);

    ConeVariant variant() const { return variant_; }
    bool is_neutral() const;

    // Euclidean coordinates or grid values
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::vector<Atom>& mutable_atoms() { return atoms_; }

    const GridPtr& grid() const { return grid_; }

    // coordinate count, grid size, or atom location dimension
    std::size_t dim() const;

    double total_mass() const;
    double sup_norm() const;
    double l2_norm() const;

private:
    ConeElement() = default;

    ConeVariant variant_ = ConeVariant::Euclidean;
    std::vector<double> values_;
    std::vector<Atom> atoms_;
    std::size_t location_dim_ = 0;
    GridPtr grid_;
};

// Max-norm relative distance; +inf when shapes are incompatible. Atomic
// measures are canonicalized first (merge exact duplicate locations, sort),
// then compared location by location.
double rel_distance(const ConeElement& a, const ConeElement& b);

bool approx_equal(const ConeElement& a, const ConeElement& b, double rel_tol);

} // namespace stablecone
