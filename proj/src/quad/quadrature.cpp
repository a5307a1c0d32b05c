#include "quad/quadrature.hpp"

#include <cmath>

#include "errors.hpp"

namespace stablecone {

namespace {

struct Worker {
    const std::function<double(double)>& f;
    const QuadConfig& cfg;
    long evals = 0;
    bool budget_ok = true;
    double err = 0.0;

    double call(double x) {
        ++evals;
        return f(x);
    }

    // fa/fm/fb are f at a, midpoint, b; whole is the Simpson estimate on [a,b]
    double recurse(double a, double b, double fa, double fm, double fb, double whole,
                   int depth) {
        const double m = 0.5 * (a + b);
        if (evals + 2 > cfg.max_evals) {
            budget_ok = false;
            return whole;
        }
        const double fl = call(0.5 * (a + m));
        const double fr = call(0.5 * (m + b));
        const double h6 = (b - a) / 12.0;
        const double left = h6 * (fa + 4.0 * fl + fm);
        const double right = h6 * (fm + 4.0 * fr + fb);
        const double split = left + right;
        const double delta = split - whole;
        if (depth >= cfg.max_depth || std::fabs(delta) <= 15.0 * cfg.tol_per_interval) {
            err += std::fabs(delta) / 15.0;
            return split + delta / 15.0;
        }
        return recurse(a, m, fa, fl, fm, left, depth + 1) +
               recurse(m, b, fm, fr, fb, right, depth + 1);
    }
};

} // namespace

QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            const QuadConfig& cfg) {
    if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("quadrature bounds must be finite with a <= b");
    QuadResult res;
    if (a == b) return res;
    Worker w{f, cfg};
    const double fa = w.call(a);
    const double m = 0.5 * (a + b);
    const double fm = w.call(m);
    const double fb = w.call(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    res.value = w.recurse(a, b, fa, fm, fb, whole, 0);
    res.error_estimate = w.err;
    res.evals = w.evals;
    res.converged = w.budget_ok;
    return res;
}

QuadResult integrate_log_sub(const std::function<double(double)>& f, double t_lo, double t_hi,
                             const QuadConfig& cfg) {
    if (!(t_lo > 0.0) || !(t_hi >= t_lo))
        throw DomainError("log-substituted quadrature needs 0 < t_lo <= t_hi");
    auto g = [&f](double s) {
        const double t = std::exp(s);
        return f(t) * t;
    };
    return adaptive_simpson(g, std::log(t_lo), std::log(t_hi), cfg);
}

} // namespace stablecone
