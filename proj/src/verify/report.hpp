#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace stablecone {

struct ProbeReportRow {
    std::string label;
    double statistic = std::numeric_limits<double>::quiet_NaN();
    double abs_delta = std::numeric_limits<double>::quiet_NaN();
    double std_error = std::numeric_limits<double>::quiet_NaN();
    double allowance = std::numeric_limits<double>::quiet_NaN();
    bool excluded = false;
    std::string note;
};

// Outcome of one verification run. `statistic` is compared against
// `threshold` (calibrated null quantile or fixed tolerance, depending on
// the test); probe rows carry the per-character detail.
struct VerificationReport {
    std::string name;
    std::string cone;
    bool passed = false;
    double statistic = std::numeric_limits<double>::quiet_NaN();
    double threshold = std::numeric_limits<double>::quiet_NaN();
    double p_value = std::numeric_limits<double>::quiet_NaN();
    std::size_t n = 0;
    double truncation_r = std::numeric_limits<double>::quiet_NaN();
    double alpha = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t master_seed = 0;
    std::string mutation = "none";
    std::string notes;
    std::vector<ProbeReportRow> probes;
};

// Text form: one key=value pair per line, probe fields as probe.<i>.<field>,
// reports separated by single blank lines. Values are written with 17
// significant digits so parsing is value-exact.
std::string write_reports_text(const std::vector<VerificationReport>& reports);

std::vector<VerificationReport> parse_reports_text(const std::string& text);

// One CSV row per report (no probe detail), RFC-4180 quoting for free-text
// fields; embedded line breaks become ';'.
std::string write_reports_csv(const std::vector<VerificationReport>& reports);

// 17 significant digits: parses back to the identical double
std::string format_double(double v);

} // namespace stablecone
