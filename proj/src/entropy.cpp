#include "lhls/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lhls/errors.hpp"
#include "lhls/grids.hpp"

namespace lhls {

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("entropy", "density and weight lengths differ");
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

void require_probability_density(std::span<const double> rho, std::span<const double> weights, double tol) {
    require_same_length(rho, weights);
    if (std::abs(pairwise_sum(weights) - 1.0) > 1e-12)
        throw NormalizationError("entropy", "reference measure must have total mass 1");
    for (double v : rho)
        if (!(v >= 0.0)) throw NormalizationError("entropy", "probability density must be nonnegative");
    if (std::abs(weighted_sum(rho, weights) - 1.0) > tol)
        throw NormalizationError("entropy", "probability density must have unit mass");
}

double relative_entropy(std::span<const double> rho1, std::span<const double> rho0, std::span<const double> weights) {
    require_same_length(rho1, weights);
    require_same_length(rho0, weights);
    std::vector<double> terms(rho1.size(), 0.0);
    for (std::size_t i = 0; i < rho1.size(); ++i) {
        if (rho1[i] <= 0.0 || weights[i] == 0.0) continue;
        if (rho0[i] <= 0.0) return std::numeric_limits<double>::infinity();
        terms[i] = weights[i] * rho1[i] * (std::log(rho1[i]) - std::log(rho0[i]));
    }
    return pairwise_sum(terms);
}

double entropy(std::span<const double> rho, std::span<const double> weights) {
    require_same_length(rho, weights);
    std::vector<double> terms(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) terms[i] = weights[i] * xlogx(rho[i]);
    return pairwise_sum(terms);
}

double l1_distance(std::span<const double> rho1, std::span<const double> rho0, std::span<const double> weights) {
    require_same_length(rho1, weights);
    require_same_length(rho0, weights);
    std::vector<double> terms(rho1.size());
    for (std::size_t i = 0; i < rho1.size(); ++i) terms[i] = weights[i] * std::abs(rho1[i] - rho0[i]);
    return pairwise_sum(terms);
}

double pinsker_gap(std::span<const double> rho1, std::span<const double> rho0, std::span<const double> weights) {
    const double d = l1_distance(rho1, rho0, weights);
    return relative_entropy(rho1, rho0, weights) - 0.5 * d * d;
}

double log_partition(std::span<const double> phi, std::span<const double> weights) {
    require_same_length(phi, weights);
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < phi.size(); ++i)
        if (weights[i] > 0.0) m = std::max(m, phi[i]);
    std::vector<double> e(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) e[i] = std::exp(phi[i] - m);
    return m + std::log(weighted_sum(e, weights));
}

std::vector<double> gibbs_density(std::span<const double> phi, std::span<const double> weights) {
    const double z = log_partition(phi, weights);
    std::vector<double> g(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) g[i] = std::exp(phi[i] - z);
    return g;
}

double strong_young_gap(std::span<const double> rho, std::span<const double> phi, std::span<const double> weights) {
    require_same_length(rho, weights);
    const auto g = gibbs_density(phi, weights);
    const double d = l1_distance(rho, g, weights);
    std::vector<double> pairing(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) pairing[i] = phi[i] * rho[i];
    return entropy(rho, weights) + log_partition(phi, weights) - weighted_sum(pairing, weights) - 0.5 * d * d;
}

double half_convexity_gap(std::span<const double> rho1, std::span<const double> rho0,
                          std::span<const double> weights) {
    require_same_length(rho1, weights);
    require_same_length(rho0, weights);
    std::vector<double> lin(rho1.size(), 0.0);
    for (std::size_t i = 0; i < rho1.size(); ++i) {
        if (rho1[i] == rho0[i]) continue;
        if (rho0[i] <= 0.0) return std::numeric_limits<double>::infinity();
        lin[i] = (rho1[i] - rho0[i]) * std::log(rho0[i]);
    }
    const double d = l1_distance(rho1, rho0, weights);
    return entropy(rho1, weights) - entropy(rho0, weights) - weighted_sum(lin, weights) - 0.5 * d * d;
}

SmallSetBound small_set_delta(double eps, double relative_entropy_value) {
    if (!(eps > 0.0)) throw DomainError("entropy", "small_set_delta requires eps > 0");
    // sums of nearly equal densities can round slightly below zero
    if (!(relative_entropy_value >= -kEntropyRoundoff)) throw DomainError("entropy", "small_set_delta requires H >= 0");
    relative_entropy_value = std::max(relative_entropy_value, 0.0);
    SmallSetBound b;
    b.a = 2.0 * relative_entropy_value / eps;
    b.delta = 0.5 * b.a * eps * std::exp(-b.a);
    b.degenerate = relative_entropy_value == 0.0;
    return b;
}

}  // namespace lhls
