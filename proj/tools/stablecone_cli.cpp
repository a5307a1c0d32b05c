// Command-line front end. Talks to the library exclusively through the
// public C interface in stablecone.h.
//
// Exit codes (stable contract): 0 success, 1 usage/config error,
// 2 IO failure, 3 verification failure.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stablecone.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerifyFailed = 3;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

int fail_usage(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return kExitUsage;
}

int fail_io(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return kExitIo;
}

struct ConeFlags {
    std::string kind = "euclidean";
    std::size_t dim = 2;
    double alpha = 0.7;
    std::size_t probes = 16;
    std::vector<double> grid;
    std::string matrix;  // rows "a,b;c,d"
    std::string spectral;
    double spectral_lo = 0.0;
    double spectral_hi = 0.0;
    bool spectral_range_set = false;
};

struct RunFlags {
    double truncation_r = 1000.0;
    std::size_t n = 20000;
    std::uint64_t seed = 20260816ull;
    std::string mutate = "none";
    std::string out;
};

struct VerifyFlags {
    std::string suite = "all";
    std::size_t batches = 0;       // 0 = library default
    std::size_t permutations = 0;  // 0 = library default
    double level = 0.0;            // 0 = library default
    double stability_a = 0.0;      // 0 = library default
    double stability_b = 0.0;
};

struct DecomposeFlags {
    std::string input;
    std::string rejects;
    bool invert = false;
};

bool parse_matrix_rows(const std::string& text, std::vector<std::vector<double>>* rows,
                       std::string* err) {
    std::stringstream outer(text);
    std::string row;
    while (std::getline(outer, row, ';')) {
        std::vector<double> r;
        std::stringstream inner(row);
        std::string cell;
        while (std::getline(inner, cell, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                    ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                r.push_back(v);
            } catch (const std::exception&) {
                *err = "matrix cell '" + cell + "' is not a number";
                return false;
            }
        }
        if (r.empty()) {
            *err = "matrix row '" + row + "' is empty";
            return false;
        }
        rows->push_back(std::move(r));
    }
    if (rows->empty()) {
        *err = "matrix is empty";
        return false;
    }
    return true;
}

bool build_cone_json(const ConeFlags& cone, std::string* out, std::string* err) {
    nlohmann::json j;
    j["kind"] = cone.kind;
    j["dim"] = cone.dim;
    j["alpha"] = cone.alpha;
    j["probes"] = cone.probes;
    if (!cone.grid.empty()) j["grid"] = cone.grid;
    if (!cone.matrix.empty()) {
        std::vector<std::vector<double>> rows;
        if (!parse_matrix_rows(cone.matrix, &rows, err)) return false;
        j["matrix"] = rows;
    }
    if (!cone.spectral.empty() || cone.spectral_range_set) {
        nlohmann::json s;
        if (!cone.spectral.empty()) s["kind"] = cone.spectral;
        if (cone.spectral_range_set) {
            s["lo"] = cone.spectral_lo;
            s["hi"] = cone.spectral_hi;
        }
        j["spectral"] = s;
    }
    *out = j.dump();
    return true;
}

// STABLECONE_OUT names the directory for relative output paths
std::string resolve_out(const std::string& flag_value, const std::string& default_name) {
    std::string path = flag_value.empty() ? default_name : flag_value;
    const char* env = std::getenv("STABLECONE_OUT");
    if (env != nullptr && *env != '\0' && !path.empty() && path.front() != '/')
        return std::string(env) + "/" + path;
    return path;
}

struct ConeHandle {
    sc_cone* ptr = nullptr;
    ~ConeHandle() { sc_cone_destroy(ptr); }
};

struct SamplesHandle {
    sc_samples* ptr = nullptr;
    ~SamplesHandle() { sc_samples_destroy(ptr); }
};

struct ReportsHandle {
    sc_reports* ptr = nullptr;
    ~ReportsHandle() { sc_reports_destroy(ptr); }
};

// canonical cone spec + the run/suite parameters, hashed into every output
std::string resolved_config(const sc_cone* cone, const std::string& params_json,
                            const char* subcommand) {
    const char* canonical = nullptr;
    sc_cone_canonical_json(cone, &canonical);
    return std::string(canonical) + "|" + params_json + "|" + subcommand;
}

int cmd_sample(const ConeFlags& cf, const RunFlags& rf) {
    std::string spec, err;
    if (!build_cone_json(cf, &spec, &err)) return fail_usage(err);
    ConeHandle cone;
    if (sc_cone_create(spec.c_str(), &cone.ptr) != SC_OK) return fail_usage(sc_last_error());

    nlohmann::json run;
    run["n"] = rf.n;
    run["r"] = rf.truncation_r;
    run["seed"] = rf.seed;
    run["mutation"] = rf.mutate;
    const std::string run_json = run.dump();

    SamplesHandle samples;
    if (sc_sample(cone.ptr, run_json.c_str(), &samples.ptr) != SC_OK)
        return fail_usage(sc_last_error());

    const std::string config_hash = hex64(fnv1a(resolved_config(cone.ptr, run_json, "sample")));
    std::size_t count = 0, width = 0;
    sc_samples_count(samples.ptr, &count);
    sc_samples_value_width(samples.ptr, &width);
    double bias = 0.0;
    sc_samples_bias_bound(samples.ptr, &bias);

    const std::string path = resolve_out(rf.out, "stablecone_sample.csv");
    std::ofstream os(path, std::ios::binary);
    if (!os) return fail_io("cannot open '" + path + "' for writing");

    os << "artifact_version,config_hash,master_seed,run_id,stream_id,term_count,bias_bound";
    if (width > 0)
        for (std::size_t k = 0; k < width; ++k) os << ",v" << k;
    else
        os << ",atom_count,total_mass,atoms";
    os << "\r\n";

    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t master = 0, stream = 0;
        sc_samples_stream(samples.ptr, i, &master, &stream);
        std::size_t terms = 0;
        sc_samples_term_count(samples.ptr, i, &terms);
        os << sc_version() << ',' << config_hash << ',' << master << ',' << i << ',' << stream
           << ',' << terms << ',' << fmt17(bias);
        if (width > 0) {
            const double* data = nullptr;
            std::size_t len = 0;
            sc_samples_values(samples.ptr, i, &data, &len);
            for (std::size_t k = 0; k < len; ++k) os << ',' << fmt17(data[k]);
        } else {
            std::size_t atoms = 0;
            sc_samples_atom_count(samples.ptr, i, &atoms);
            double total = 0.0;
            std::string cell;
            for (std::size_t a = 0; a < atoms; ++a) {
                const double* loc = nullptr;
                std::size_t dim = 0;
                double w = 0.0;
                sc_samples_atom(samples.ptr, i, a, &loc, &dim, &w);
                total += w;
                if (a > 0) cell += '|';
                cell += fmt17(w);
                cell += '@';
                for (std::size_t k = 0; k < dim; ++k) {
                    if (k > 0) cell += ' ';
                    cell += fmt17(loc[k]);
                }
            }
            os << ',' << atoms << ',' << fmt17(total) << ',' << cell;
        }
        os << "\r\n";
    }
    os.flush();
    if (!os) return fail_io("short write to '" + path + "'");
    std::cout << "wrote " << count << " rows to " << path << "\n";
    return kExitOk;
}

int cmd_verify(const ConeFlags& cf, const RunFlags& rf, const VerifyFlags& vf) {
    std::string spec, err;
    if (!build_cone_json(cf, &spec, &err)) return fail_usage(err);
    ConeHandle cone;
    if (sc_cone_create(spec.c_str(), &cone.ptr) != SC_OK) return fail_usage(sc_last_error());

    nlohmann::json suite;
    suite["suite"] = vf.suite;
    suite["n"] = rf.n;
    suite["r"] = rf.truncation_r;
    suite["seed"] = rf.seed;
    suite["mutation"] = rf.mutate;
    if (vf.batches > 0) suite["batches"] = vf.batches;
    if (vf.permutations > 0) suite["permutations"] = vf.permutations;
    if (vf.level > 0.0) suite["level"] = vf.level;
    if (vf.stability_a > 0.0) suite["stability_a"] = vf.stability_a;
    if (vf.stability_b > 0.0) suite["stability_b"] = vf.stability_b;
    const std::string suite_json = suite.dump();

    ReportsHandle reports;
    if (sc_verify(cone.ptr, suite_json.c_str(), &reports.ptr) != SC_OK)
        return fail_usage(sc_last_error());

    const std::string config_hash = hex64(fnv1a(resolved_config(cone.ptr, suite_json, "verify")));
    const std::string base = resolve_out(rf.out, "stablecone_verify");
    const std::string text_path = base + ".txt";
    const std::string csv_path = base + ".csv";
    if (sc_reports_write_text(reports.ptr, text_path.c_str()) != SC_OK)
        return fail_io(sc_last_error());
    if (sc_reports_write_csv(reports.ptr, csv_path.c_str()) != SC_OK)
        return fail_io(sc_last_error());

    std::size_t count = 0;
    sc_reports_count(reports.ptr, &count);
    std::cout << "config_hash=" << config_hash << " master_seed=" << rf.seed << "\n";
    for (std::size_t i = 0; i < count; ++i) {
        const char* name = nullptr;
        int passed = 0;
        double stat = 0.0, thr = 0.0, pv = 0.0;
        sc_reports_name(reports.ptr, i, &name);
        sc_reports_passed(reports.ptr, i, &passed);
        sc_reports_statistic(reports.ptr, i, &stat);
        sc_reports_threshold(reports.ptr, i, &thr);
        sc_reports_p_value(reports.ptr, i, &pv);
        std::cout << (passed ? "PASS " : "FAIL ") << name << " statistic=" << fmt17(stat)
                  << " threshold=" << fmt17(thr) << " p=" << fmt17(pv) << "\n";
    }
    std::cout << "reports: " << text_path << " " << csv_path << "\n";
    int all = 0;
    sc_reports_all_passed(reports.ptr, &all);
    return all ? kExitOk : kExitVerifyFailed;
}

struct ParsedCsv {
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line per row
};

bool parse_numeric_csv(std::istream& is, std::size_t expect_fields, ParsedCsv* out,
                       std::vector<std::size_t>* bad_lines) {
    std::string line;
    std::size_t lineno = 0;
    bool first_content = true;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        if (trimmed.empty()) continue;
        std::vector<double> row;
        bool ok = true;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                    ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::exception&) {
                ok = false;
                break;
            }
        }
        if (first_content) {
            first_content = false;
            if (!ok) continue;  // header line
        }
        if (!ok || row.size() != expect_fields) {
            bad_lines->push_back(lineno);
            continue;
        }
        out->rows.push_back(std::move(row));
        out->line_numbers.push_back(lineno);
    }
    return bad_lines->empty();
}

int cmd_decompose(const ConeFlags& cf, const RunFlags& rf, const DecomposeFlags& df) {
    std::string spec, err;
    if (!build_cone_json(cf, &spec, &err)) return fail_usage(err);
    ConeHandle cone;
    if (sc_cone_create(spec.c_str(), &cone.ptr) != SC_OK) return fail_usage(sc_last_error());

    std::size_t width = 0;
    sc_cone_value_width(cone.ptr, &width);
    if (width == 0)
        return fail_usage("measure cones have no flat coordinate form; decompose supports "
                          "euclidean, operator, max, and time cones");

    std::ifstream is(df.input, std::ios::binary);
    if (!is) return fail_io("cannot open '" + df.input + "' for reading");
    const std::size_t expect = df.invert ? width + 1 : width;
    ParsedCsv parsed;
    std::vector<std::size_t> bad;
    if (!parse_numeric_csv(is, expect, &parsed, &bad)) {
        std::string list;
        for (std::size_t k = 0; k < bad.size(); ++k)
            list += (k ? ", " : "") + std::to_string(bad[k]);
        return fail_usage("input rows failed to parse as " + std::to_string(expect) +
                          " numeric fields at line(s): " + list);
    }

    const std::string params = "{\"input_fields\":" + std::to_string(expect) +
                               ",\"invert\":" + (df.invert ? "true" : "false") + "}";
    const std::string config_hash = hex64(fnv1a(resolved_config(cone.ptr, params, "decompose")));
    const std::string out_path =
        resolve_out(rf.out, df.invert ? "stablecone_compose.csv" : "stablecone_decompose.csv");
    std::ofstream os(out_path, std::ios::binary);
    if (!os) return fail_io("cannot open '" + out_path + "' for writing");

    os << "artifact_version,config_hash,master_seed,row_id";
    if (df.invert)
        for (std::size_t k = 0; k < width; ++k) os << ",v" << k;
    else {
        for (std::size_t k = 0; k < width; ++k) os << ",a" << k;
        os << ",radial";
    }
    os << "\r\n";

    std::vector<std::pair<std::size_t, std::string>> rejects;
    std::size_t written = 0;
    std::vector<double> buf(width, 0.0);
    for (std::size_t i = 0; i < parsed.rows.size(); ++i) {
        const std::vector<double>& row = parsed.rows[i];
        sc_status st;
        double radial = 0.0;
        if (df.invert) {
            radial = row.back();
            st = sc_compose(cone.ptr, radial, row.data(), width, buf.data());
        } else {
            st = sc_decompose(cone.ptr, row.data(), width, &radial, buf.data());
        }
        if (st != SC_OK) {
            rejects.emplace_back(parsed.line_numbers[i], sc_last_error());
            continue;
        }
        os << sc_version() << ',' << config_hash << ',' << rf.seed << ',' << i;
        for (std::size_t k = 0; k < width; ++k) os << ',' << fmt17(buf[k]);
        if (!df.invert) os << ',' << fmt17(radial);
        os << "\r\n";
        ++written;
    }
    os.flush();
    if (!os) return fail_io("short write to '" + out_path + "'");

    if (!rejects.empty()) {
        const std::string rej_path =
            df.rejects.empty() ? out_path + ".rejects.csv" : resolve_out(df.rejects, "");
        std::ofstream rs(rej_path, std::ios::binary);
        if (!rs) return fail_io("cannot open '" + rej_path + "' for writing");
        rs << "line,reason\r\n";
        for (const auto& [line, reason] : rejects) {
            std::string quoted = reason;
            std::string::size_type pos = 0;
            while ((pos = quoted.find('"', pos)) != std::string::npos) {
                quoted.insert(pos, 1, '"');
                pos += 2;
            }
            rs << line << ",\"" << quoted << "\"\r\n";
        }
        rs.flush();
        if (!rs) return fail_io("short write to '" + rej_path + "'");
        std::cerr << rejects.size() << " row(s) rejected; see " << rej_path << "\n";
    }
    std::cout << "wrote " << written << " rows to " << out_path << "\n";
    if (written == 0) return fail_usage("no input row yielded a result");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    ConeFlags cf;
    RunFlags rf;
    VerifyFlags vf;
    DecomposeFlags df;

    CLI::App app{"LePage-series sampler and verification harness for stable cones"};
    app.set_config("--config", "", "INI-style config file; command-line flags override it");
    app.option_defaults()->always_capture_default();

    app.add_option("--cone", cf.kind, "cone kind: euclidean|operator|max|time|measure");
    app.add_option("--dim", cf.dim, "dimension (vector cones) or site count (max)");
    app.add_option("--alpha", cf.alpha, "stability index");
    app.add_option("--probes", cf.probes, "verification character count (1-64)");
    app.add_option("--grid", cf.grid, "grid points (max/time cones)")->delimiter(',');
    app.add_option("--matrix", cf.matrix, "scaling matrix rows, e.g. \"1,0.3;0,1\"");
    app.add_option("--spectral", cf.spectral,
                   "mark law: constant_one|rademacher|gaussian|uniform_profile|"
                   "step_rademacher|single_atom");
    auto* lo = app.add_option("--spectral-lo", cf.spectral_lo, "mark law range low");
    auto* hi = app.add_option("--spectral-hi", cf.spectral_hi, "mark law range high");
    app.add_option("--r", rf.truncation_r, "series truncation level");
    app.add_option("--n", rf.n, "sample count / run count");
    app.add_option("--seed", rf.seed, "master seed")->envname("STABLECONE_SEED");
    app.add_option("--mutate", rf.mutate,
                   "test hook: none|radial_exponent_one|radial_alpha_doubled");
    app.add_option("--out", rf.out,
                   "output path (sample/decompose: CSV file; verify: report base name); "
                   "relative paths resolve under $STABLECONE_OUT");

    CLI::App* sample = app.add_subcommand("sample", "draw truncated series samples to CSV");
    CLI::App* verify = app.add_subcommand("verify", "run verification suites, write reports");
    verify->add_option("--suite", vf.suite, "stability|phi|homogeneity|cms|eps|all");
    verify->add_option("--batches", vf.batches, "batch count override");
    verify->add_option("--permutations", vf.permutations, "calibration resample override");
    verify->add_option("--level", vf.level, "test level override");
    verify->add_option("--a", vf.stability_a, "stability weight a");
    verify->add_option("--b", vf.stability_b, "stability weight b");
    CLI::App* decompose =
        app.add_subcommand("decompose", "polar-decompose CSV rows (or rebuild with --invert)");
    decompose->add_option("--in", df.input, "input CSV of flat elements")->required();
    decompose->add_flag("--invert", df.invert, "compose angular+radial rows back to elements");
    decompose->add_option("--rejects", df.rejects, "rejects file (default <out>.rejects.csv)");
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    cf.spectral_range_set = lo->count() > 0 || hi->count() > 0;
    if (cf.spectral_range_set && (lo->count() == 0 || hi->count() == 0))
        return fail_usage("--spectral-lo and --spectral-hi must be given together");

    try {
        if (sample->parsed()) return cmd_sample(cf, rf);
        if (verify->parsed()) return cmd_verify(cf, rf, vf);
        if (decompose->parsed()) return cmd_decompose(cf, rf, df);
    } catch (const std::exception& e) {
        return fail_usage(e.what());
    }
    return fail_usage("no subcommand given");
}
