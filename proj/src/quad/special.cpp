#include "quad/special.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace stablecone {

namespace {

double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 500; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    // Lentz's algorithm for the continued fraction of Q(a, x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw DomainError("incomplete gamma needs a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_contfrac(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw DomainError("incomplete gamma needs a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_contfrac(a, x);
}

namespace {

// solve f(lambda) = target for increasing f by bisection on [0, hi]
double solve_increasing(const std::function<double(double)>& f, double target, double hi0) {
    double lo = 0.0, hi = hi0;
    while (f(hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw DomainError("poisson interval solve failed to bracket");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

PoissonInterval poisson_exact_ci(long k, double level) {
    if (k < 0) throw DomainError("poisson count must be non-negative");
    if (!(level > 0.0) || !(level < 1.0)) throw DomainError("confidence level must be in (0,1)");
    PoissonInterval ci;
    const double half = 0.5 * level;
    const double start = std::max(1.0, static_cast<double>(k));
    if (k > 0) {
        // P{Pois(lambda) >= k} = P(k, lambda), increasing in lambda
        ci.lo = solve_increasing(
            [k](double lam) { return regularized_gamma_p(static_cast<double>(k), lam); }, half,
            start);
    }
    // P{Pois(lambda) <= k} = Q(k+1, lambda), decreasing in lambda
    ci.hi = solve_increasing(
        [k](double lam) { return 1.0 - regularized_gamma_q(static_cast<double>(k) + 1.0, lam); },
        1.0 - half, start);
    return ci;
}

double ks_critical_value(std::size_t n, double level) {
    if (n == 0) throw DomainError("ks critical value needs n > 0");
    if (!(level > 0.0) || !(level < 1.0)) throw DomainError("level must be in (0,1)");
    return std::sqrt(-0.5 * std::log(level / 2.0) / static_cast<double>(n));
}

double ks_statistic(std::vector<double> values, const std::function<double(double)>& cdf) {
    if (values.empty()) throw DomainError("ks statistic needs samples");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = cdf(values[i]);
        worst = std::max(worst, std::fabs(f - static_cast<double>(i) / n));
        worst = std::max(worst, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return worst;
}

} // namespace stablecone
