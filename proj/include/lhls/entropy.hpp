#pragma once

#include <span>
#include <vector>

namespace lhls {

// Densities here are taken relative to a reference probability measure ν
// given by nonnegative weights summing to 1: a finite probability space, or
// the quadrature weights of a normalized grid. All integrals use the fixed
// pairwise reduction order of grids.hpp.

/// Throws NormalizationError unless weights sum to 1 within 1e-12 and the
/// density is nonnegative with ∫ρ dν = 1 within tol.
void require_probability_density(std::span<const double> rho, std::span<const double> weights,
                                 double tol = 1e-8);

/// ∫ρ1 (log ρ1 - log ρ0) dν with 0 log 0 = 0; +∞ when ρ1 charges {ρ0 = 0}.
double relative_entropy(std::span<const double> rho1, std::span<const double> rho0,
                        std::span<const double> weights);

/// H(ρ) = H(ρ | 1).
double entropy(std::span<const double> rho, std::span<const double> weights);

/// ∫|ρ1 - ρ0| dν.
double l1_distance(std::span<const double> rho1, std::span<const double> rho0, std::span<const double> weights);

/// H(ρ1|ρ0) - ½ ‖ρ1 - ρ0‖₁².
double pinsker_gap(std::span<const double> rho1, std::span<const double> rho0, std::span<const double> weights);

/// H*(φ) = log ∫ e^φ dν.
double log_partition(std::span<const double> phi, std::span<const double> weights);

/// ∇H*(φ) = e^φ / ∫ e^φ dν.
std::vector<double> gibbs_density(std::span<const double> phi, std::span<const double> weights);

/// H(ρ) + H*(φ) - ∫φρ dν - ½ ‖ρ - gibbs(φ)‖₁².
double strong_young_gap(std::span<const double> rho, std::span<const double> phi, std::span<const double> weights);

/// H(ρ1) - H(ρ0) - ∫(ρ1 - ρ0) log ρ0 dν - ½ ‖ρ1 - ρ0‖₁².
double half_convexity_gap(std::span<const double> rho1, std::span<const double> rho0,
                          std::span<const double> weights);

/// Small-set bound: if ∫_A ρ0 ≤ δ then ∫_A ρ1 ≤ ε whenever H(ρ1|ρ0) ≤ H.
struct SmallSetBound {
    double a = 0.0;
    double delta = 0.0;
    bool degenerate = false;   // H = 0: the construction collapses, δ = 0
};

/// Negative H down to -kEntropyRoundoff is treated as 0.
inline constexpr double kEntropyRoundoff = 1e-12;
SmallSetBound small_set_delta(double eps, double relative_entropy_value);

}  // namespace lhls
