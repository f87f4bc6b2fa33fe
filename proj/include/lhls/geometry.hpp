#pragma once

#include <array>

#include "lhls/densities.hpp"
#include "lhls/sphere.hpp"

namespace lhls {

/// A point of R^2, or the point at infinity (image of the south pole).
struct PlanePoint {
    double x1 = 0.0;
    double x2 = 0.0;
    bool at_infinity = false;
};

/// Stereographic projection from the south pole (0, 0, -1):
/// (ω1, ω2) / (1 + ω3).
PlanePoint stereo_forward(const Vec3& omega);
Vec3 stereo_inverse(double x1, double x2);

/// |x|^2 (1 + ω3) - (1 - ω3) for x = stereo_forward(ω).
double stereo_norm_residual(const Vec3& omega);

/// | |S⁻¹x - S⁻¹x'|^2 - 4|x - x'|^2 / ((1+|x|^2)(1+|x'|^2)) |.
double chordal_identity_check(double x1, double x2, double y1, double y2);

/// Density of the uniform probability measure on S^2 pushed to the plane,
/// 1 / (π (1 + |x|^2)^2). This is also the log-HLS optimizer h.
double sphere_measure_density(double r2);

/// Axis-and-dilation description of a conformal map of S^2.
struct ConformalParams {
    double t = 0.0;
    Vec3 n{0.0, 0.0, 1.0};
};

inline constexpr double kConformalCap = 20.0;

/// A conformal map of S^2 stored as the Lorentz matrix acting on (1, ω).
/// Λ (1, ω) = λ(ω) (1, τ(ω)), and the area Jacobian of τ is λ(ω)^{-2}.
class ConformalMap {
public:
    ConformalMap();  // identity
    static ConformalMap boost(const ConformalParams& p);

    /// τ(ω), and log J_τ(ω) = -2 log λ(ω).
    Vec3 apply(const Vec3& omega, double* log_jacobian = nullptr) const;
    /// (*this) ∘ other, i.e. other is applied first.
    ConformalMap compose(const ConformalMap& other) const;

    /// (t, n) of the boost B in the polar decomposition Λ = B·R.
    ConformalParams boost_part() const;

    const std::array<double, 16>& matrix() const { return m_; }

private:
    std::array<double, 16> m_{};
};

/// U_τ = u∘τ + log J_τ for τ = boost(p). Off-grid values of u come from its
/// spherical-harmonic expansion; zonal fields pushed along ±e3 stay zonal.
SphereField conformal_push(const SphereField& u, const ConformalParams& p);

/// Same, for an arbitrary map and a field given by its expansion.
SphereField conformal_push(const SphExpansion& u, const ConformalMap& tau,
                           std::shared_ptr<const SphereGrid> grid);

/// The isometry L^1(R^2) -> L^1(S^2): (Tρ)(ω) = ρ(Sω) / h(Sω) with
/// h = sphere_measure_density. Radial input gives a zonal field.
SphereField lift_T(const RadialDensity& rho, std::shared_ptr<const SphereGrid> grid);
SphereField lift_T(const PlanarDensity& rho, std::shared_ptr<const SphereGrid> grid);

/// Rotate e3 onto n: returns the rotated vector R v.
Vec3 rotate_from_pole(const Vec3& n, const Vec3& v);

Vec3 normalized(const Vec3& v);
double dot(const Vec3& a, const Vec3& b);

}  // namespace lhls
