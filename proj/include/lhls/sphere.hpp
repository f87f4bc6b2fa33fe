#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "lhls/grids.hpp"

namespace lhls {

using Vec3 = std::array<double, 3>;

/// Real spherical harmonic coefficients, orthonormal for the uniform
/// probability measure (∫ Y_lm^2 dσ = 1). Index (l, m) -> l^2 + l + m,
/// m < 0 carries the sin(|m|φ) part.
class SphExpansion {
public:
    SphExpansion() = default;
    explicit SphExpansion(int lmax) : lmax_(lmax), coef_(static_cast<std::size_t>(lmax + 1) * (lmax + 1), 0.0) {}

    int lmax() const { return lmax_; }
    static std::size_t index(int l, int m) { return static_cast<std::size_t>(l * l + l + m); }
    double& operator()(int l, int m) { return coef_[index(l, m)]; }
    double operator()(int l, int m) const { return coef_[index(l, m)]; }
    std::span<const double> coefficients() const { return coef_; }
    std::span<double> coefficients() { return coef_; }

    /// Degree-l power Σ_m c_lm^2.
    double degree_power(int l) const;
    /// Drop trailing degrees whose coefficients are all below tol * max|c|.
    SphExpansion truncated(double rel_tol = 1e-15) const;

    double evaluate(const Vec3& omega) const;

private:
    int lmax_ = -1;
    std::vector<double> coef_;
};

/// Normalized associated Legendre values N_lm(z) for 0 <= m <= l <= lmax,
/// with ½∫ N_lm^2 dz = 1. Layout: l*(l+1)/2 + m.
std::vector<double> normalized_legendre(int lmax, double z);
inline std::size_t nlm_index(int l, int m) { return static_cast<std::size_t>(l) * (l + 1) / 2 + m; }

/// Y_lm(omega) for all (l, m), same layout as SphExpansion.
SphExpansion harmonics_at(int lmax, const Vec3& omega);

/// A real function sampled on a SphereGrid. An axisymmetric field depends on
/// z only; it may live on a grid with a single azimuth.
struct SphereField {
    std::shared_ptr<const SphereGrid> grid;
    std::vector<double> values;
    bool axisymmetric = false;

    double ring_value(int ring) const { return values[static_cast<std::size_t>(ring) * grid->azimuths()]; }
    double integral() const { return grid->integrate(values); }
    double exp_integral() const;
};

/// Largest degree the grid resolves without aliasing.
int resolvable_degree(const SphereGrid& grid, bool axisymmetric);

/// Forward transform (quadrature). For axisymmetric fields only m = 0 is
/// filled.
SphExpansion analyze(const SphereField& field, int lmax = -1);

/// Evaluate an expansion on every node of a grid.
SphereField synthesize(const SphExpansion& coeffs, std::shared_ptr<const SphereGrid> grid);

/// Legendre coefficients c_l of an axisymmetric field, f(z) = Σ c_l P_l(z).
std::vector<double> legendre_coefficients(const SphereField& field, int lmax = -1);

/// Build a field by sampling a callable at every node.
template <class F>
SphereField sample_sphere(std::shared_ptr<const SphereGrid> grid, F&& fn, bool axisymmetric = false) {
    SphereField out{grid, std::vector<double>(grid->size()), axisymmetric};
    for (int j = 0; j < grid->rings(); ++j)
        for (int k = 0; k < grid->azimuths(); ++k) {
            Vec3 w;
            grid->point(j, k, w.data());
            out.values[static_cast<std::size_t>(j) * grid->azimuths() + k] = fn(w);
        }
    return out;
}

/// Sample a function of z alone.
template <class F>
SphereField sample_zonal(std::shared_ptr<const SphereGrid> grid, F&& fn) {
    SphereField out{grid, std::vector<double>(grid->size()), true};
    for (int j = 0; j < grid->rings(); ++j) {
        const double v = fn(grid->z(j));
        for (int k = 0; k < grid->azimuths(); ++k)
            out.values[static_cast<std::size_t>(j) * grid->azimuths() + k] = v;
    }
    return out;
}

std::shared_ptr<const SphereGrid> make_sphere_grid(int lmax);
std::shared_ptr<const SphereGrid> make_zonal_grid(int rings);

}  // namespace lhls
