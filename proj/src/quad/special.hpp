#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace stablecone {

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x),
// series expansion for x < a+1 and continued fraction otherwise.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

// Exact (Garwood) two-sided confidence interval for a Poisson mean given an
// observed count k: P{Pois(lo) >= k} = level/2, P{Pois(hi) <= k} = level/2.
struct PoissonInterval {
    double lo = 0.0;
    double hi = 0.0;
};
PoissonInterval poisson_exact_ci(long k, double level);

// Kolmogorov-Smirnov: asymptotic one-sample critical value at `level` and the
// statistic against a cdf. `values` need not be sorted.
double ks_critical_value(std::size_t n, double level);
double ks_statistic(std::vector<double> values, const std::function<double(double)>& cdf);

} // namespace stablecone
