#include "cones/factory.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "json.hpp"

namespace stablecone {
namespace {

using nlohmann::json;

const std::set<std::string> kKinds = {"euclidean", "operator", "max", "time", "measure"};

constexpr double kFreqPool[16] = {1.0,   0.5, 2.0,   0.25,  1.5,  3.0,  0.75, 4.0,
                                  0.125, 2.5, 0.625, 6.0,   0.375, 1.25, 8.0,  0.875};

constexpr double kThresholdPool[16] = {1.0,  2.0,  0.5, 4.0,   1.5, 3.0, 0.75,  8.0,
                                       0.25, 1.25, 6.0, 0.375, 2.5, 5.0, 0.125, 1.75};

constexpr double kRadiusPool[8] = {0.5, 0.8, 0.35, 1.0, 0.6, 0.45, 0.9, 0.7};
constexpr double kAmplitudePool[4] = {1.0, 0.5, 2.0, 1.5};

double frac(double x) { return x - std::floor(x); }

void require(bool ok, const std::string& msg) {
    if (!ok) throw ContractViolation(msg);
}

double get_number(const json& j, const std::string& key) {
    require(j.at(key).is_number(), "cone spec field \"" + key + "\" must be a number");
    return j.at(key).get<double>();
}

std::size_t get_count(const json& j, const std::string& key) {
    require(j.at(key).is_number_unsigned() && j.at(key).get<double>() > 0,
            "cone spec field \"" + key + "\" must be a positive integer");
    return j.at(key).get<std::size_t>();
}

std::vector<Character> fourier_probes(std::size_t count, std::size_t index_count,
                                      std::size_t first_index) {
    std::vector<Character> out;
    out.reserve(count);
    const std::size_t span = index_count - first_index;
    for (std::size_t j = 0; j < count; ++j) {
        const std::size_t idx = first_index + (j % span);
        const double freq = kFreqPool[j % 16] * std::ldexp(1.0, static_cast<int>(j / 16));
        out.push_back(Character::fourier({{idx, freq}}));
    }
    return out;
}

std::vector<Character> indicator_probes(std::size_t count, std::size_t index_count) {
    std::vector<Character> out;
    out.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        const std::size_t idx = j % index_count;
        const double thr = kThresholdPool[j % 16] * std::ldexp(1.0, static_cast<int>(j / 16));
        out.push_back(Character::indicator({{idx, thr}}));
    }
    return out;
}

std::vector<Character> laplace_probes(std::size_t count, std::size_t dim) {
    std::vector<Character> out;
    out.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        Character::Tent tent;
        tent.center.resize(dim);
        for (std::size_t k = 0; k < dim; ++k)
            tent.center[k] = frac(0.5 + 0.6180339887498949 * static_cast<double>(j + 1) +
                                  0.2173913043478261 * static_cast<double>(k));
        tent.radius = kRadiusPool[j % 8];
        tent.amplitude = kAmplitudePool[j % 4];
        out.push_back(Character::laplace({tent}));
    }
    return out;
}

// crossing detectors for the time cone: one fourier term per positive grid
// point, at two incommensurable frequencies so no nonzero path value is
// invisible to every character
std::vector<Character> time_transversal_characters(std::size_t grid_size) {
    std::vector<Character> out;
    const std::size_t m = std::min<std::size_t>(grid_size - 1, 8);
    for (std::size_t i = 1; i <= m; ++i) out.push_back(Character::fourier({{i, 1.0}}));
    for (std::size_t i = 1; i <= m; ++i)
        out.push_back(Character::fourier({{i, 0.36787944117144233}}));
    return out;
}

WiredCone assemble(ConeSpec spec, ConeDescriptor d, Transversal t, std::vector<Character> probes) {
    return {std::move(spec), std::move(d), std::move(t), std::move(probes)};
}

} // namespace

ConeSpec parse_cone_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ContractViolation(std::string("cone spec is not valid JSON: ") + e.what());
    }
    require(j.is_object(), "cone spec must be a JSON object");

    const std::set<std::string> known = {"kind", "dim",    "alpha",   "probes",
                                         "grid", "matrix", "spectral"};
    for (const auto& item : j.items())
        require(known.count(item.key()) > 0, "unknown cone spec field \"" + item.key() + "\"");

    ConeSpec spec;
    require(j.contains("kind") && j.at("kind").is_string(), "cone spec needs a \"kind\" string");
    spec.kind = j.at("kind").get<std::string>();
    if (j.contains("dim")) spec.dim = get_count(j, "dim");
    if (j.contains("alpha")) spec.alpha = get_number(j, "alpha");
    if (j.contains("probes")) spec.probes = get_count(j, "probes");
    if (j.contains("grid")) {
        require(j.at("grid").is_array(), "cone spec field \"grid\" must be an array");
        for (const auto& v : j.at("grid")) {
            require(v.is_number(), "grid points must be numbers");
            spec.grid_points.push_back(v.get<double>());
        }
    }
    if (j.contains("matrix")) {
        require(j.at("matrix").is_array(), "cone spec field \"matrix\" must be a list of rows");
        for (const auto& row : j.at("matrix")) {
            require(row.is_array(), "cone spec field \"matrix\" must be a list of rows");
            std::vector<double> r;
            for (const auto& v : row) {
                require(v.is_number(), "matrix entries must be numbers");
                r.push_back(v.get<double>());
            }
            spec.matrix_rows.push_back(std::move(r));
        }
    }
    if (j.contains("spectral")) {
        const json& s = j.at("spectral");
        require(s.is_object(), "cone spec field \"spectral\" must be an object");
        const std::set<std::string> skeys = {"kind", "lo", "hi"};
        for (const auto& item : s.items())
            require(skeys.count(item.key()) > 0, "unknown spectral field \"" + item.key() + "\"");
        if (s.contains("kind")) {
            require(s.at("kind").is_string(), "spectral kind must be a string");
            spec.spectral.kind = s.at("kind").get<std::string>();
        }
        if (s.contains("lo")) spec.spectral.lo = get_number(s, "lo");
        if (s.contains("hi")) spec.spectral.hi = get_number(s, "hi");
    }
    return spec;
}

ConeSpec resolve_defaults(ConeSpec spec) {
    require(kKinds.count(spec.kind) > 0,
            "unknown cone kind \"" + spec.kind +
                "\" (expected euclidean, operator, max, time, or measure)");
    if (spec.kind == "max" && spec.grid_points.empty())
        for (std::size_t i = 0; i < spec.dim; ++i)
            spec.grid_points.push_back(static_cast<double>(i));
    if (spec.kind == "time" && spec.grid_points.empty()) {
        spec.grid_points.push_back(0.0);
        for (double p = 1.0; p <= 512.0; p *= 2.0) spec.grid_points.push_back(p);
    }
    if (spec.kind == "max" || spec.kind == "time") spec.dim = spec.grid_points.size();
    if (spec.kind == "operator" && spec.matrix_rows.empty()) {
        spec.matrix_rows.assign(spec.dim, std::vector<double>(spec.dim, 0.0));
        for (std::size_t i = 0; i < spec.dim; ++i) spec.matrix_rows[i][i] = 1.0;
    }
    if (spec.spectral.kind.empty()) {
        if (spec.kind == "euclidean") spec.spectral.kind = "rademacher";
        else if (spec.kind == "operator") spec.spectral.kind = "gaussian";
        else if (spec.kind == "max") spec.spectral.kind = "uniform_profile";
        else if (spec.kind == "time") spec.spectral.kind = "step_rademacher";
        else spec.spectral.kind = "single_atom";
    }
    return spec;
}

std::string canonical_spec_json(const ConeSpec& spec) {
    json j;
    j["kind"] = spec.kind;
    j["dim"] = spec.dim;
    j["alpha"] = spec.alpha;
    j["probes"] = spec.probes;
    if (!spec.grid_points.empty()) j["grid"] = spec.grid_points;
    if (!spec.matrix_rows.empty()) j["matrix"] = spec.matrix_rows;
    j["spectral"] = {{"kind", spec.spectral.kind},
                     {"lo", spec.spectral.lo},
                     {"hi", spec.spectral.hi}};
    return j.dump();
}

WiredCone wire_cone(const ConeSpec& raw) {
    ConeSpec spec = resolve_defaults(raw);
    if (!(spec.alpha > 0.0) || !std::isfinite(spec.alpha))
        throw DomainError("stability index must be strictly positive and finite");
    require(spec.probes >= 1 && spec.probes <= 64, "probe count must be between 1 and 64");
    require(spec.dim >= 1, "dimension must be at least 1");

    const double inf = std::numeric_limits<double>::infinity();
    ConeDescriptor d;
    if (spec.kind == "euclidean") {
        require(spec.grid_points.empty() && spec.matrix_rows.empty(),
                "euclidean cones take no grid or matrix");
        require(spec.dim <= 4096, "dimension too large");
        d.variant = ConeVariant::Euclidean;
        d.op = SemigroupOp::VectorSum;
        d.scaling = ScalingKind::Multiplicative;
        d.involution = InvolutionKind::Negation;
        d.dimension = spec.dim;
        d.alpha_admissible = {0.0, 1.0, 2.0};
        auto probes = fourier_probes(spec.probes, d.dimension, 0);
        return assemble(std::move(spec), std::move(d), Transversal::vector_norm(),
                        std::move(probes));
    }
    if (spec.kind == "operator") {
        require(spec.grid_points.empty(), "operator cones take no grid");
        require(spec.dim <= kMaxMatrixDim, "operator dimension exceeds the matrix limit");
        require(spec.matrix_rows.size() == spec.dim, "matrix must be dim x dim");
        SquareMatrix m(spec.dim);
        for (std::size_t i = 0; i < spec.dim; ++i) {
            require(spec.matrix_rows[i].size() == spec.dim, "matrix must be dim x dim");
            for (std::size_t k = 0; k < spec.dim; ++k) {
                require(std::isfinite(spec.matrix_rows[i][k]), "matrix entries must be finite");
                m.at(i, k) = spec.matrix_rows[i][k];
            }
        }
        const double size_scale =
            std::max(1.0, std::pow(m.inf_norm(), static_cast<double>(spec.dim)));
        if (std::abs(det(m)) <= 1e-12 * size_scale)
            throw DomainError("scaling matrix must be invertible");
        if (!sym_part_positive_definite(m))
            throw DomainError(
                "orbit transversal needs a matrix with positive definite symmetric part");
        d.variant = ConeVariant::Euclidean;
        d.op = SemigroupOp::VectorSum;
        d.scaling = ScalingKind::OperatorExp;
        d.involution = InvolutionKind::Negation;
        d.dimension = spec.dim;
        d.matrix = m;
        d.alpha_admissible = {0.0, 1.0, 2.0};
        auto probes = fourier_probes(spec.probes, d.dimension, 0);
        return assemble(std::move(spec), std::move(d), Transversal::orbit_norm(),
                        std::move(probes));
    }
    if (spec.kind == "max") {
        require(spec.matrix_rows.empty(), "max cones take no matrix");
        d.variant = ConeVariant::GridFunction;
        d.op = SemigroupOp::PointwiseMax;
        d.scaling = ScalingKind::Multiplicative;
        d.involution = InvolutionKind::Identity;
        d.grid = make_grid(spec.grid_points);
        d.dimension = d.grid->size();
        d.alpha_admissible = {0.0, inf, inf};
        auto probes = indicator_probes(spec.probes, d.dimension);
        return assemble(std::move(spec), std::move(d), Transversal::sup_norm(),
                        std::move(probes));
    }
    if (spec.kind == "time") {
        require(spec.matrix_rows.empty(), "time cones take no matrix");
        require(spec.grid_points.size() >= 2, "time grids need at least two points");
        require(spec.grid_points.front() == 0.0, "time grids must start at 0");
        d.variant = ConeVariant::GridFunction;
        d.op = SemigroupOp::VectorSum;
        d.scaling = ScalingKind::TimeReparam;
        d.involution = InvolutionKind::Negation;
        d.grid = make_grid(spec.grid_points);
        d.dimension = d.grid->size();
        d.alpha_admissible = {0.0, inf, inf};
        auto transversal = Transversal::character_based(time_transversal_characters(d.dimension));
        auto probes = fourier_probes(spec.probes, d.dimension, 1);
        return assemble(std::move(spec), std::move(d), std::move(transversal), std::move(probes));
    }
    // measure
    require(spec.grid_points.empty() && spec.matrix_rows.empty(),
            "measure cones take no grid or matrix");
    require(spec.dim <= 8, "atom location dimension too large");
    d.variant = ConeVariant::AtomicMeasure;
    d.op = SemigroupOp::MeasureSum;
    d.scaling = ScalingKind::WeightScaling;
    d.involution = InvolutionKind::Identity;
    d.dimension = spec.dim;
    d.alpha_admissible = {0.0, inf, inf};
    auto probes = laplace_probes(spec.probes, d.dimension);
    return assemble(std::move(spec), std::move(d), Transversal::total_mass(), std::move(probes));
}

} // namespace stablecone
