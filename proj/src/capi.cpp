#include "stablecone.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cones/factory.hpp"
#include "core/rng.hpp"
#include "errors.hpp"
#include "lepage/series.hpp"
#include "polar/radial.hpp"
#include "verify/report.hpp"
#include "verify/suites.hpp"

using json = nlohmann::json;
using namespace stablecone;

struct sc_cone {
    explicit sc_cone(WiredCone w) : wired(std::move(w)) {}

    WiredCone wired;
    std::string canonical;
    std::uint64_t hash = 0;
};

struct sc_samples {
    std::vector<SeriesSample> rows;
    std::size_t width = 0;
    double bias_bound = std::numeric_limits<double>::quiet_NaN();
};

struct sc_reports {
    std::vector<VerificationReport> reports;
    std::string text;
    std::string csv;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : ""; }

template <typename F>
sc_status guarded(F&& f) noexcept {
    try {
        f();
        return SC_OK;
    } catch (const PreconditionError& e) {
        set_error(e.what());
        return SC_ERR_PRECONDITION;
    } catch (const DomainError& e) {
        set_error(e.what());
        return SC_ERR_DOMAIN;
    } catch (const ContractViolation& e) {
        set_error(e.what());
        return SC_ERR_CONTRACT;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return SC_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        set_error(e.what());
        return SC_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown failure");
        return SC_ERR_INTERNAL;
    }
}

sc_status bad_argument(const char* what) {
    set_error(what);
    return SC_ERR_INVALID_ARGUMENT;
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

json parse_object(const char* text, const char* what) {
    if (text == nullptr || *text == '\0') return json::object();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ContractViolation(std::string(what) + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw ContractViolation(std::string(what) + " must be a JSON object");
    return j;
}

void require_keys(const json& j, std::initializer_list<const char*> allowed, const char* what) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw ContractViolation(std::string("unknown key '") + it.key() + "' in " + what);
    }
}

double get_number(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw ContractViolation(std::string("'") + key + "' must be a number");
    return j.at(key).get<double>();
}

std::size_t get_count(const json& j, const char* key, std::size_t fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ContractViolation(std::string("'") + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

std::uint64_t get_seed(const json& j, const char* key, std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw ContractViolation(std::string("'") + key + "' must be an integer");
    return v.get<std::uint64_t>();
}

bool get_flag(const json& j, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean())
        throw ContractViolation(std::string("'") + key + "' must be a boolean");
    return j.at(key).get<bool>();
}

Mutation parse_mutation(const json& j) {
    if (!j.contains("mutation")) return Mutation::None;
    if (!j.at("mutation").is_string())
        throw ContractViolation("'mutation' must be a string");
    const std::string m = j.at("mutation").get<std::string>();
    if (m == "none") return Mutation::None;
    if (m == "radial_exponent_one") return Mutation::RadialExponentOne;
    if (m == "radial_alpha_doubled") return Mutation::RadialAlphaDoubled;
    throw ContractViolation("unknown mutation '" + m + "'");
}

std::vector<double> get_scales(const json& j, const char* key, std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_array()) throw ContractViolation(std::string("'") + key + "' must be an array");
    std::vector<double> out;
    for (const json& e : v) {
        if (!e.is_number())
            throw ContractViolation(std::string("'") + key + "' entries must be numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

SuiteConfig parse_suite_config(const json& j) {
    SuiteConfig cfg;
    cfg.n = get_count(j, "n", cfg.n);
    cfg.truncation_r = get_number(j, "r", cfg.truncation_r);
    cfg.master_seed = get_seed(j, "seed", cfg.master_seed);
    cfg.batches = get_count(j, "batches", cfg.batches);
    cfg.permutations = get_count(j, "permutations", cfg.permutations);
    cfg.level = get_number(j, "level", cfg.level);
    cfg.mutation = parse_mutation(j);
    cfg.cms_skip_rescale = get_flag(j, "cms_skip_rescale", cfg.cms_skip_rescale);
    cfg.stability_a = get_number(j, "stability_a", cfg.stability_a);
    cfg.stability_b = get_number(j, "stability_b", cfg.stability_b);
    cfg.phi_scales = get_scales(j, "phi_scales", cfg.phi_scales);
    cfg.band_scales = get_scales(j, "band_scales", cfg.band_scales);
    cfg.eps_probe_cap = get_count(j, "eps_probe_cap", cfg.eps_probe_cap);
    cfg.eps_log2_t_max = get_number(j, "eps_log2_t_max", cfg.eps_log2_t_max);
    cfg.eps_samples = get_count(j, "eps_samples", cfg.eps_samples);
    cfg.eps_batches = get_count(j, "eps_batches", cfg.eps_batches);
    return cfg;
}

ConeElement element_from_flat(const sc_cone* cone, const double* values, std::size_t len) {
    const ConeDescriptor& desc = cone->wired.descriptor;
    if (desc.variant == ConeVariant::AtomicMeasure)
        throw DomainError("flat-buffer operations are not defined for measure cones");
    const std::size_t width =
        desc.variant == ConeVariant::Euclidean ? desc.dimension : desc.grid->size();
    if (len != width) throw ContractViolation("element length does not match the cone width");
    std::vector<double> v(values, values + len);
    if (desc.variant == ConeVariant::Euclidean) return ConeElement::euclidean(std::move(v));
    return ConeElement::grid_function(desc.grid, std::move(v));
}

void write_file(const std::string& path, const std::string& content) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (f == nullptr) throw DomainError("cannot open '" + path + "' for writing");
    const std::size_t n = std::fwrite(content.data(), 1, content.size(), f);
    const bool ok = n == content.size() && std::fclose(f) == 0;
    if (!ok) throw DomainError("short write to '" + path + "'");
}

} // namespace

extern "C" {

const char* sc_version(void) { return "0.1.0"; }

const char* sc_last_error(void) { return g_last_error.c_str(); }

sc_status sc_cone_create(const char* spec_json, sc_cone** out) {
    if (out == nullptr) return bad_argument("output pointer is null");
    *out = nullptr;
    if (spec_json == nullptr) return bad_argument("spec_json is null");
    return guarded([&] {
        auto handle = std::make_unique<sc_cone>(wire_cone(parse_cone_spec(spec_json)));
        handle->canonical = canonical_spec_json(handle->wired.spec);
        handle->hash = fnv1a64(handle->canonical);
        *out = handle.release();
    });
}

void sc_cone_destroy(sc_cone* cone) { delete cone; }

sc_status sc_cone_canonical_json(const sc_cone* cone, const char** out) {
    if (cone == nullptr || out == nullptr) return bad_argument("null argument");
    *out = cone->canonical.c_str();
    return SC_OK;
}

sc_status sc_cone_config_hash(const sc_cone* cone, uint64_t* out) {
    if (cone == nullptr || out == nullptr) return bad_argument("null argument");
    *out = cone->hash;
    return SC_OK;
}

sc_status sc_cone_value_width(const sc_cone* cone, size_t* out) {
    if (cone == nullptr || out == nullptr) return bad_argument("null argument");
    const ConeDescriptor& d = cone->wired.descriptor;
    if (d.variant == ConeVariant::AtomicMeasure)
        *out = 0;
    else
        *out = d.variant == ConeVariant::Euclidean ? d.dimension : d.grid->size();
    return SC_OK;
}

sc_status sc_cone_alpha(const sc_cone* cone, double* out) {
    if (cone == nullptr || out == nullptr) return bad_argument("null argument");
    *out = cone->wired.spec.alpha;
    return SC_OK;
}

sc_status sc_sample(const sc_cone* cone, const char* run_json, sc_samples** out) {
    if (out == nullptr) return bad_argument("output pointer is null");
    *out = nullptr;
    if (cone == nullptr) return bad_argument("cone is null");
    return guarded([&] {
        const json j = parse_object(run_json, "run config");
        require_keys(j, {"n", "r", "seed", "mutation"}, "run config");
        const std::size_t n = get_count(j, "n", 20000);
        if (n == 0) throw DomainError("sample count must be positive");
        SeriesOptions opts;
        opts.truncation_r = get_number(j, "r", 1000.0);
        opts.mutation = parse_mutation(j);
        const std::uint64_t seed = get_seed(j, "seed", 20260816ull);

        const ConeDescriptor& desc = cone->wired.descriptor;
        const SpectralSampler spectral = make_spectral(desc, cone->wired.spec.spectral);
        const RadialLaw law(cone->wired.spec.alpha);

        auto samples = std::make_unique<sc_samples>();
        samples->rows.reserve(n);
        samples->bias_bound = truncation_bias_bound(desc, law, spectral, opts.truncation_r).value;
        if (desc.variant != ConeVariant::AtomicMeasure)
            samples->width =
                desc.variant == ConeVariant::Euclidean ? desc.dimension : desc.grid->size();
        for (std::size_t i = 0; i < n; ++i) {
            RngStream rng(seed, i);
            samples->rows.push_back(sample_series(desc, law, spectral, opts, rng));
        }
        *out = samples.release();
    });
}

void sc_samples_destroy(sc_samples* samples) { delete samples; }

sc_status sc_samples_count(const sc_samples* samples, size_t* out) {
    if (samples == nullptr || out == nullptr) return bad_argument("null argument");
    *out = samples->rows.size();
    return SC_OK;
}

sc_status sc_samples_value_width(const sc_samples* samples, size_t* out) {
    if (samples == nullptr || out == nullptr) return bad_argument("null argument");
    *out = samples->width;
    return SC_OK;
}

sc_status sc_samples_values(const sc_samples* samples, size_t row, const double** data,
                            size_t* len) {
    if (samples == nullptr || data == nullptr || len == nullptr)
        return bad_argument("null argument");
    if (row >= samples->rows.size()) return bad_argument("row out of range");
    if (samples->width == 0) {
        set_error("measure samples have no flat values; use the atom accessors");
        return SC_ERR_DOMAIN;
    }
    const auto& v = samples->rows[row].value.values();
    *data = v.data();
    *len = v.size();
    return SC_OK;
}

sc_status sc_samples_term_count(const sc_samples* samples, size_t row, size_t* out) {
    if (samples == nullptr || out == nullptr) return bad_argument("null argument");
    if (row >= samples->rows.size()) return bad_argument("row out of range");
    *out = samples->rows[row].term_count;
    return SC_OK;
}

sc_status sc_samples_stream(const sc_samples* samples, size_t row, uint64_t* master_seed,
                            uint64_t* stream_id) {
    if (samples == nullptr || master_seed == nullptr || stream_id == nullptr)
        return bad_argument("null argument");
    if (row >= samples->rows.size()) return bad_argument("row out of range");
    *master_seed = samples->rows[row].master_seed;
    *stream_id = samples->rows[row].stream_id;
    return SC_OK;
}

sc_status sc_samples_bias_bound(const sc_samples* samples, double* out) {
    if (samples == nullptr || out == nullptr) return bad_argument("null argument");
    *out = samples->bias_bound;
    return SC_OK;
}

sc_status sc_samples_atom_count(const sc_samples* samples, size_t row, size_t* out) {
    if (samples == nullptr || out == nullptr) return bad_argument("null argument");
    if (row >= samples->rows.size()) return bad_argument("row out of range");
    *out = samples->rows[row].value.atoms().size();
    return SC_OK;
}

sc_status sc_samples_atom(const sc_samples* samples, size_t row, size_t atom,
                          const double** location, size_t* dim, double* weight) {
    if (samples == nullptr || location == nullptr || dim == nullptr || weight == nullptr)
        return bad_argument("null argument");
    if (row >= samples->rows.size()) return bad_argument("row out of range");
    const auto& atoms = samples->rows[row].value.atoms();
    if (atom >= atoms.size()) return bad_argument("atom out of range");
    *location = atoms[atom].location.data();
    *dim = atoms[atom].location.size();
    *weight = atoms[atom].weight;
    return SC_OK;
}

sc_status sc_tau(const sc_cone* cone, const double* values, size_t len, double* out) {
    if (cone == nullptr || values == nullptr || out == nullptr)
        return bad_argument("null argument");
    return guarded([&] {
        const ConeElement x = element_from_flat(cone, values, len);
        *out = cone->wired.transversal.tau(cone->wired.descriptor, x);
    });
}

sc_status sc_decompose(const sc_cone* cone, const double* values, size_t len, double* radial,
                       double* angular) {
    if (cone == nullptr || values == nullptr || radial == nullptr || angular == nullptr)
        return bad_argument("null argument");
    return guarded([&] {
        const ConeElement x = element_from_flat(cone, values, len);
        const PolarPair p = cone->wired.transversal.decompose(cone->wired.descriptor, x);
        *radial = p.radial;
        const auto& v = p.angular.values();
        for (std::size_t i = 0; i < v.size(); ++i) angular[i] = v[i];
    });
}

sc_status sc_compose(const sc_cone* cone, double radial, const double* angular, size_t len,
                     double* out) {
    if (cone == nullptr || angular == nullptr || out == nullptr)
        return bad_argument("null argument");
    return guarded([&] {
        const PolarPair p{element_from_flat(cone, angular, len), radial};
        const ConeElement x = compose(cone->wired.descriptor, p);
        const auto& v = x.values();
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    });
}

sc_status sc_theta_tail(double alpha, double b, double* out) {
    if (out == nullptr) return bad_argument("null argument");
    return guarded([&] { *out = RadialLaw(alpha).tail(b); });
}

sc_status sc_theta_sample_above(double alpha, double b, double u, double* out) {
    if (out == nullptr) return bad_argument("null argument");
    return guarded([&] { *out = RadialLaw(alpha).sample_above(b, u); });
}

sc_status sc_verify(const sc_cone* cone, const char* suite_json, sc_reports** out) {
    if (out == nullptr) return bad_argument("output pointer is null");
    *out = nullptr;
    if (cone == nullptr) return bad_argument("cone is null");
    return guarded([&] {
        const json j = parse_object(suite_json, "suite config");
        require_keys(j,
                     {"suite", "n", "r", "seed", "batches", "permutations", "level", "mutation",
                      "cms_skip_rescale", "stability_a", "stability_b", "phi_scales",
                      "band_scales", "eps_probe_cap", "eps_log2_t_max", "eps_samples",
                      "eps_batches"},
                     "suite config");
        std::string suite = "all";
        if (j.contains("suite")) {
            if (!j.at("suite").is_string()) throw ContractViolation("'suite' must be a string");
            suite = j.at("suite").get<std::string>();
        }
        const SuiteConfig cfg = parse_suite_config(j);
        auto reports = std::make_unique<sc_reports>();
        reports->reports = run_suite(cone->wired, suite, cfg);
        reports->text = write_reports_text(reports->reports);
        reports->csv = write_reports_csv(reports->reports);
        *out = reports.release();
    });
}

void sc_reports_destroy(sc_reports* reports) { delete reports; }

sc_status sc_reports_count(const sc_reports* reports, size_t* out) {
    if (reports == nullptr || out == nullptr) return bad_argument("null argument");
    *out = reports->reports.size();
    return SC_OK;
}

sc_status sc_reports_all_passed(const sc_reports* reports, int* out) {
    if (reports == nullptr || out == nullptr) return bad_argument("null argument");
    int ok = 1;
    for (const auto& r : reports->reports)
        if (!r.passed) ok = 0;
    *out = ok;
    return SC_OK;
}

sc_status sc_reports_name(const sc_reports* reports, size_t i, const char** out) {
    if (reports == nullptr || out == nullptr) return bad_argument("null argument");
    if (i >= reports->reports.size()) return bad_argument("report index out of range");
    *out = reports->reports[i].name.c_str();
    return SC_OK;
}

sc_status sc_reports_passed(const sc_reports* reports, size_t i, int* out) {
    if (reports == nullptr || out == nullptr) return bad_argument("null argument");
    if (i >= reports->reports.size()) return bad_argument("report index out of range");
    *out = reports->reports[i].passed ? 1 : 0;
    return SC_OK;
}

sc_status sc_reports_statistic(const sc_reports* reports, size_t i, double* out) {
    if (reports == nullptr || out == nullptr) return bad_argument("null argument");
    if (i >= reports->reports.size()) return bad_argument("report index out of range");
    *out = reports->reports[i].statistic;
    return SC_OK;
}

sc_status sc_reports_threshold(const sc_reports* reports, size_t i, double* out) {
    if (reports == nullptr || out == nullptr) return bad_argument("null argument");
    if (i >= reports->reports.size()) return bad_argument("report index out of range");
    *out = reports->reports[i].threshold;
    return SC_OK;
}

sc_status sc_reports_p_value(const sc_reports* reports, size_t i, double* out) {
    if (reports == nullptr || out == nullptr) return bad_argument("null argument");
    if (i >= reports->reports.size()) return bad_argument("report index out of range");
    *out = reports->reports[i].p_value;
    return SC_OK;
}

sc_status sc_reports_text(const sc_reports* reports, const char** out) {
    if (reports == nullptr || out == nullptr) return bad_argument("null argument");
    *out = reports->text.c_str();
    return SC_OK;
}

sc_status sc_reports_csv(const sc_reports* reports, const char** out) {
    if (reports == nullptr || out == nullptr) return bad_argument("null argument");
    *out = reports->csv.c_str();
    return SC_OK;
}

sc_status sc_reports_write_text(const sc_reports* reports, const char* path) {
    if (reports == nullptr || path == nullptr) return bad_argument("null argument");
    return guarded([&] { write_file(path, reports->text); });
}

sc_status sc_reports_write_csv(const sc_reports* reports, const char* path) {
    if (reports == nullptr || path == nullptr) return bad_argument("null argument");
    return guarded([&] { write_file(path, reports->csv); });
}

} // extern "C"
