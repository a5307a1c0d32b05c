#pragma once

#include <functional>

namespace stablecone {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evals = 0;
    bool converged = true;  // false when the eval budget ran out; value is partial
};

struct QuadConfig {
    double tol_per_interval = 1e-8;
    int max_depth = 60;
    long max_evals = 400000;
};

// Recursive adaptive Simpson on [a, b]. The budget is a hard cap on function
// evaluations; exceeding it stops refinement and flags the result instead of
// throwing, so callers can report a partial estimate.
QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            const QuadConfig& cfg = {});

// Integrate f(t) dt over [t_lo, t_hi] through the substitution t = e^s,
// which tames power-law behaviour near t = 0.
QuadResult integrate_log_sub(const std::function<double(double)>& f, double t_lo, double t_hi,
                             const QuadConfig& cfg = {});

} // namespace stablecone
