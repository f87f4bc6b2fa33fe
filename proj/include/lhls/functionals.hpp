#pragma once

#include <complex>
#include <vector>

#include "lhls/densities.hpp"
#include "lhls/sphere.hpp"

namespace lhls {

/// Entropy and interaction parts of a free energy, reported separately.
struct FreeEnergyTerms {
    double entropy = 0.0;       // ∫ρ log ρ
    double interaction = 0.0;   // ∬ρ log|x - x'| ρ   (sphere: ∬ f log|ω-ω'| f)
    double value = 0.0;
};

inline constexpr double kMassTolerance = 1e-6;

/// ∬ρ(x) log|x - x'| ρ(x') dx dx'. The radial path uses the angular mean
/// ⟨log|x - x'|⟩_angle = log max(|x|, |x'|); the Cartesian path convolves
/// with the kernel by FFT, using a lattice-corrected self term.
double log_interaction(const RadialDensity& rho);
double log_interaction(const PlanarDensity& rho);

/// Weight given to the x = x' term when log|x - x'| is summed over the
/// lattice hZ^2; makes the punctured midpoint sum fourth-order accurate for
/// smooth densities.
double lattice_log_self_weight(double h);

/// ∫ρ log ρ + 2∬ρ log|x - x'| ρ + 1 + log π for a unit-mass density.
FreeEnergyTerms planar_free_energy_terms(const RadialDensity& rho, double mass_tol = kMassTolerance);
FreeEnergyTerms planar_free_energy_terms(const PlanarDensity& rho, double mass_tol = kMassTolerance);
double planar_free_energy(const RadialDensity& rho, double mass_tol = kMassTolerance);
double planar_free_energy(const PlanarDensity& rho, double mass_tol = kMassTolerance);

/// Eigenvalues of f ↦ ∫G(ω, ω') f(ω') dσ with G = -2 log|ω - ω'|, obtained
/// by Funk–Hecke quadrature of the kernel against P_l.
const std::vector<double>& green_eigenvalues(int lmax);

/// Gf for mean-zero f.
SphereField sphere_green_apply(const SphereField& f);

/// ∫(f+1) log(f+1) dσ + 2∬ f log|ω - ω'| f dσ dσ for mean-zero f with f + 1 ≥ 0.
FreeEnergyTerms spherical_free_energy_terms(const SphereField& f);
double spherical_free_energy(const SphereField& f);

/// ∫|∇u|^2 dσ, computed spectrally as Σ l(l+1) |û_lm|^2.
double dirichlet_energy(const SphereField& u);

/// ¼∫|∇u|^2 - log∫e^u + ∫u.
double onofri_functional(const SphereField& u);

/// ∫|∇ log ρ|^2 dσ - 4 H(1 ‖ ρ) for a positive probability density ρ.
double onofri_entropy_form_gap(const SphereField& rho);

/// Real function on S^1 given by Fourier coefficients û(k), 0 ≤ k ≤ K;
/// û(-k) is the complex conjugate.
struct CircleField {
    std::vector<std::complex<double>> coef;

    int bandwidth() const { return static_cast<int>(coef.size()) - 1; }
    double mean() const { return coef.empty() ? 0.0 : coef[0].real(); }
    double operator()(double theta) const;
    std::vector<double> sample(int n) const;
    static CircleField from_samples(const std::vector<double>& values, int bandwidth);
};

/// Σ_{k∈Z} |k| |û(k)|^2.
double half_laplacian_energy(const CircleField& u);

/// ½ Σ|k||û(k)|^2 - log∫e^u dσ + ∫u dσ, with ∫e^u evaluated on n points
/// (n = 0 picks max(1024, 8K)).
double lebedev_milin_functional(const CircleField& u, int n = 0);

/// log∫e^u dσ on n equispaced points.
double circle_log_exp_integral(const CircleField& u, int n = 0);

}  // namespace lhls
