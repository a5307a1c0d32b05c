#include "verify/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "errors.hpp"

namespace stablecone {
namespace {

std::string sanitize(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (c == '\n' || c == '\r') c = ';';
    return out;
}

// RFC 4180: quote when the cell holds a comma, quote, or line break
std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void emit(std::ostringstream& os, const std::string& key, const std::string& value) {
    os << key << '=' << sanitize(value) << '\n';
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw ContractViolation("malformed number in report: " + s);
    return v;
}

std::uint64_t parse_u64(const std::string& s) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end == s.c_str()) throw ContractViolation("malformed integer in report: " + s);
    return static_cast<std::uint64_t>(v);
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string write_reports_text(const std::vector<VerificationReport>& reports) {
    std::ostringstream os;
    bool first = true;
    for (const auto& r : reports) {
        if (!first) os << '\n';
        first = false;
        emit(os, "name", r.name);
        emit(os, "cone", r.cone);
        emit(os, "passed", r.passed ? "1" : "0");
        emit(os, "statistic", format_double(r.statistic));
        emit(os, "threshold", format_double(r.threshold));
        emit(os, "p_value", format_double(r.p_value));
        emit(os, "n", std::to_string(r.n));
        emit(os, "truncation_r", format_double(r.truncation_r));
        emit(os, "alpha", format_double(r.alpha));
        emit(os, "master_seed", std::to_string(r.master_seed));
        emit(os, "mutation", r.mutation);
        emit(os, "notes", r.notes);
        for (std::size_t i = 0; i < r.probes.size(); ++i) {
            const auto& p = r.probes[i];
            const std::string pre = "probe." + std::to_string(i) + ".";
            emit(os, pre + "label", p.label);
            emit(os, pre + "statistic", format_double(p.statistic));
            emit(os, pre + "abs_delta", format_double(p.abs_delta));
            emit(os, pre + "std_error", format_double(p.std_error));
            emit(os, pre + "allowance", format_double(p.allowance));
            emit(os, pre + "excluded", p.excluded ? "1" : "0");
            emit(os, pre + "note", p.note);
        }
    }
    return os.str();
}

std::vector<VerificationReport> parse_reports_text(const std::string& text) {
    std::vector<VerificationReport> out;
    VerificationReport cur;
    bool open = false;

    auto flush = [&]() {
        if (open) out.push_back(std::move(cur));
        cur = VerificationReport{};
        open = false;
    };

    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ContractViolation("report line without '=': " + line);
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        open = true;

        if (key.rfind("probe.", 0) == 0) {
            const auto second = key.find('.', 6);
            if (second == std::string::npos)
                throw ContractViolation("malformed probe key: " + key);
            const std::size_t idx = static_cast<std::size_t>(parse_u64(key.substr(6, second - 6)));
            const std::string field = key.substr(second + 1);
            if (cur.probes.size() <= idx) cur.probes.resize(idx + 1);
            ProbeReportRow& p = cur.probes[idx];
            if (field == "label") p.label = value;
            else if (field == "statistic") p.statistic = parse_double(value);
            else if (field == "abs_delta") p.abs_delta = parse_double(value);
            else if (field == "std_error") p.std_error = parse_double(value);
            else if (field == "allowance") p.allowance = parse_double(value);
            else if (field == "excluded") p.excluded = value == "1";
            else if (field == "note") p.note = value;
            else throw ContractViolation("unknown probe field: " + field);
            continue;
        }

        if (key == "name") cur.name = value;
        else if (key == "cone") cur.cone = value;
        else if (key == "passed") cur.passed = value == "1";
        else if (key == "statistic") cur.statistic = parse_double(value);
        else if (key == "threshold") cur.threshold = parse_double(value);
        else if (key == "p_value") cur.p_value = parse_double(value);
        else if (key == "n") cur.n = static_cast<std::size_t>(parse_u64(value));
        else if (key == "truncation_r") cur.truncation_r = parse_double(value);
        else if (key == "alpha") cur.alpha = parse_double(value);
        else if (key == "master_seed") cur.master_seed = parse_u64(value);
        else if (key == "mutation") cur.mutation = value;
        else if (key == "notes") cur.notes = value;
        else throw ContractViolation("unknown report field: " + key);
    }
    flush();
    return out;
}

std::string write_reports_csv(const std::vector<VerificationReport>& reports) {
    std::ostringstream os;
    os << "name,cone,passed,statistic,threshold,p_value,n,truncation_r,alpha,master_seed,"
          "mutation,notes\n";
    for (const auto& r : reports) {
        os << csv_cell(r.name) << ',' << csv_cell(r.cone) << ','
           << (r.passed ? 1 : 0) << ',' << format_double(r.statistic) << ','
           << format_double(r.threshold) << ',' << format_double(r.p_value) << ',' << r.n << ','
           << format_double(r.truncation_r) << ',' << format_double(r.alpha) << ','
           << r.master_seed << ',' << csv_cell(r.mutation) << ','
           << csv_cell(sanitize(r.notes)) << '\n';
    }
    return os.str();
}

} // namespace stablecone
