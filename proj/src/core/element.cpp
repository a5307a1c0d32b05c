#include "core/element.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace stablecone {

namespace {

void check_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw ContractViolation(std::string(what) + " must be finite");
}

} // namespace

ConeElement ConeElement::euclidean(std::vector<double> coords) {
    if (coords.empty()) throw ContractViolation("euclidean element needs at least one coordinate");
    check_finite(coords, "coordinates");
    ConeElement e;
    e.variant_ = ConeVariant::Euclidean;
    e.values_ = std::move(coords);
    return e;
}

ConeElement ConeElement::grid_function(GridPtr grid, std::vector<double> values) {
    if (!grid) throw ContractViolation("grid function needs a grid");
    if (values.size() != grid->size())
        throw ContractViolation("grid function values must align with the grid");
    check_finite(values, "grid values");
    ConeElement e;
    e.variant_ = ConeVariant::GridFunction;
    e.grid_ = std::move(grid);
    e.values_ = std::move(values);
    return e;
}

ConeElement ConeElement::atomic_measure(std::size_t location_dim, std::vector<Atom> atoms) {
    if (location_dim == 0) throw ContractViolation("atom locations need a positive dimension");
    ConeElement e;
    e.variant_ = ConeVariant::AtomicMeasure;
    e.location_dim_ = location_dim;
    e.atoms_.reserve(atoms.size());
    for (auto& a : atoms) {
        if (a.location.size() != location_dim)
            throw ContractViolation("atom location dimension mismatch");
        check_finite(a.location, "atom locations");
        if (!std::isfinite(a.weight) || a.weight < 0.0)
            throw ContractViolation("atom weights must be finite and non-negative");
        if (a.weight == 0.0) continue;
        e.atoms_.push_back(std::move(a));
    }
    return e;
}

ConeElement ConeElement::neutral_euclidean(std::size_t dim) {
    return euclidean(std::vector<double>(dim, 0.0));
}

ConeElement ConeElement::neutral_grid(GridPtr grid) {
    auto n = grid->size();
    return grid_function(std::move(grid), std::vector<double>(n, 0.0));
}

ConeElement ConeElement::neutral_measure(std::size_t location_dim) {
    return atomic_measure(location_dim, {});
}

bool ConeElement::is_neutral() const {
    if (variant_ == ConeVariant::AtomicMeasure) return atoms_.empty();
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

std::size_t ConeElement::dim() const {
    if (variant_ == ConeVariant::AtomicMeasure) return location_dim_;
    return values_.size();
}

double ConeElement::total_mass() const {
    if (variant_ != ConeVariant::AtomicMeasure)
        throw ContractViolation("total mass is defined for atomic measures");
    double m = 0.0;
    for (const auto& a : atoms_) m += a.weight;
    return m;
}

double ConeElement::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
}

double ConeElement::l2_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s);
}

namespace {

std::vector<Atom> canonical_atoms(const ConeElement& e) {
    std::vector<Atom> atoms = e.atoms();
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
        return a.location < b.location;
    });
    std::vector<Atom> merged;
    for (auto& a : atoms) {
        if (!merged.empty() && merged.back().location == a.location)
            merged.back().weight += a.weight;
        else
            merged.push_back(std::move(a));
    }
    return merged;
}

double rel_diff(double a, double b, double scale) {
    const double d = std::fabs(a - b);
    if (d == 0.0) return 0.0;
    return d / std::max({std::fabs(a), std::fabs(b), scale});
}

} // namespace

double rel_distance(const ConeElement& a, const ConeElement& b) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (a.variant() != b.variant()) return inf;

    if (a.variant() == ConeVariant::AtomicMeasure) {
        if (a.dim() != b.dim()) return inf;
        const auto ca = canonical_atoms(a);
        const auto cb = canonical_atoms(b);
        if (ca.size() != cb.size()) return inf;
        const double scale = std::max(a.total_mass(), b.total_mass());
        double worst = 0.0;
        for (std::size_t i = 0; i < ca.size(); ++i) {
            for (std::size_t k = 0; k < ca[i].location.size(); ++k)
                worst = std::max(worst, rel_diff(ca[i].location[k], cb[i].location[k], 1.0));
            worst = std::max(worst, rel_diff(ca[i].weight, cb[i].weight, scale));
        }
        return worst;
    }

    if (a.values().size() != b.values().size()) return inf;
    if (a.variant() == ConeVariant::GridFunction && a.grid().get() != b.grid().get()) return inf;
    const double scale = std::max(a.sup_norm(), b.sup_norm());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        worst = std::max(worst, rel_diff(a.values()[i], b.values()[i], scale));
    return worst;
}

bool approx_equal(const ConeElement& a, const ConeElement& b, double rel_tol) {
    return rel_distance(a, b) <= rel_tol;
}

} // namespace stablecone
