#include "lhls/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lhls/errors.hpp"

namespace lhls {

namespace {

constexpr double kPi = std::numbers::pi;

double legendre_series(const std::vector<double>& c, double z) {
    // Clenshaw for Σ c_l P_l(z)
    double b1 = 0.0, b2 = 0.0;
    for (int l = static_cast<int>(c.size()) - 1; l >= 1; --l) {
        const double alpha = (2.0 * l + 1.0) / (l + 1.0) * z;
        const double beta = -(l + 1.0) / (l + 2.0);
        const double b0 = c[l] + alpha * b1 + beta * b2;
        b2 = b1;
        b1 = b0;
    }
    return c.empty() ? 0.0 : c[0] + z * b1 - 0.5 * b2;
}

}  // namespace

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 normalized(const Vec3& v) {
    const double n = std::sqrt(dot(v, v));
    if (!(n > 0.0)) throw DomainError("geometry", "cannot normalize the zero vector");
    return {v[0] / n, v[1] / n, v[2] / n};
}

PlanePoint stereo_forward(const Vec3& omega) {
    const double norm = std::sqrt(dot(omega, omega));
    if (std::abs(norm - 1.0) > 1e-10) throw DomainError("geometry", "stereo_forward requires |ω| = 1");
    if (omega[2] <= -1.0) return {0.0, 0.0, true};
    return {omega[0] / (1.0 + omega[2]), omega[1] / (1.0 + omega[2]), false};
}

Vec3 stereo_inverse(double x1, double x2) {
    const double r2 = x1 * x1 + x2 * x2;
    const double d = 1.0 + r2;
    return {2.0 * x1 / d, 2.0 * x2 / d, (1.0 - r2) / d};
}

double stereo_norm_residual(const Vec3& omega) {
    const auto x = stereo_forward(omega);
    if (x.at_infinity) return 0.0;
    const double r2 = x.x1 * x.x1 + x.x2 * x.x2;
    return r2 * (1.0 + omega[2]) - (1.0 - omega[2]);
}

double chordal_identity_check(double x1, double x2, double y1, double y2) {
    const Vec3 a = stereo_inverse(x1, x2), b = stereo_inverse(y1, y2);
    const double lhs = (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]);
    const double dx = x1 - y1, dy = x2 - y2;
    const double rhs = 4.0 * (dx * dx + dy * dy) / ((1.0 + x1 * x1 + x2 * x2) * (1.0 + y1 * y1 + y2 * y2));
    return std::abs(lhs - rhs);
}

double sphere_measure_density(double r2) {
    const double d = 1.0 + r2;
    return 1.0 / (kPi * d * d);
}

// ---------------------------------------------------------------------------

ConformalMap::ConformalMap() {
    for (int i = 0; i < 4; ++i) m_[i * 4 + i] = 1.0;
}

ConformalMap ConformalMap::boost(const ConformalParams& p) {
    if (!(p.t >= 0.0)) throw ParameterError("geometry", "conformal parameter t must be >= 0");
    if (p.t > kConformalCap) throw ParameterError("geometry", "conformal parameter t exceeds cap 20");
    if (std::abs(std::sqrt(dot(p.n, p.n)) - 1.0) > 1e-12)
        throw ParameterError("geometry", "conformal axis n must be a unit vector");
    const double ch = std::cosh(p.t), sh = std::sinh(p.t);
    ConformalMap b;
    auto& m = b.m_;
    m[0] = ch;
    for (int i = 0; i < 3; ++i) {
        m[0 * 4 + 1 + i] = sh * p.n[i];
        m[(1 + i) * 4 + 0] = sh * p.n[i];
        for (int j = 0; j < 3; ++j) m[(1 + i) * 4 + 1 + j] = (i == j ? 1.0 : 0.0) + (ch - 1.0) * p.n[i] * p.n[j];
    }
    return b;
}

Vec3 ConformalMap::apply(const Vec3& omega, double* log_jacobian) const {
    const double v[4] = {1.0, omega[0], omega[1], omega[2]};
    double w[4];
    for (int i = 0; i < 4; ++i) {
        w[i] = 0.0;
        for (int j = 0; j < 4; ++j) w[i] += m_[i * 4 + j] * v[j];
    }
    const double lambda = w[0];
    if (log_jacobian) *log_jacobian = -2.0 * std::log(lambda);
    Vec3 out{w[1] / lambda, w[2] / lambda, w[3] / lambda};
    // renormalize against rounding
    const double n = std::sqrt(dot(out, out));
    return {out[0] / n, out[1] / n, out[2] / n};
}

ConformalParams ConformalMap::boost_part() const {
    ConformalParams p;
    const Vec3 col{m_[4], m_[8], m_[12]};
    const double sh = std::sqrt(dot(col, col));
    p.t = std::asinh(sh);
    if (sh > 0.0) p.n = {col[0] / sh, col[1] / sh, col[2] / sh};
    return p;
}

ConformalMap ConformalMap::compose(const ConformalMap& other) const {
    ConformalMap c;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += m_[i * 4 + k] * other.m_[k * 4 + j];
            c.m_[i * 4 + j] = s;
        }
    return c;
}

SphereField conformal_push(const SphExpansion& u, const ConformalMap& tau, std::shared_ptr<const SphereGrid> grid) {
    const auto trunc = u.truncated();
    return sample_sphere(grid, [&](const Vec3& w) {
        double lj = 0.0;
        const Vec3 tw = tau.apply(w, &lj);
        return trunc.evaluate(tw) + lj;
    });
}

SphereField conformal_push(const SphereField& u, const ConformalParams& p) {
    const auto tau = ConformalMap::boost(p);
    if (p.t == 0.0) return u;
    const bool axial = std::abs(std::abs(p.n[2]) - 1.0) < 1e-14;
    if (u.axisymmetric && axial) {
        const auto c = legendre_coefficients(u);
        const double ch = std::cosh(p.t), sh = std::sinh(p.t), s = p.n[2] > 0 ? 1.0 : -1.0;
        return sample_zonal(u.grid, [&](double z) {
            const double lambda = ch + s * sh * z;
            const double zp = std::clamp((z * ch + s * sh) / lambda, -1.0, 1.0);
            return legendre_series(c, zp) - 2.0 * std::log(lambda);
        });
    }
    if (u.grid->azimuths() < 3)
        throw ParameterError("geometry", "non-axial conformal push requires a full sphere grid");
    return conformal_push(analyze(u), tau, u.grid);
}

Vec3 rotate_from_pole(const Vec3& n, const Vec3& v) {
    // Rodrigues rotation about e3 × n by the angle between e3 and n
    const double c = n[2];
    const Vec3 axis{-n[1], n[0], 0.0};
    const double s = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1]);
    if (s < 1e-15) return c > 0 ? v : Vec3{v[0], -v[1], -v[2]};
    const Vec3 k{axis[0] / s, axis[1] / s, 0.0};
    const Vec3 kxv{k[1] * v[2] - k[2] * v[1], k[2] * v[0] - k[0] * v[2], k[0] * v[1] - k[1] * v[0]};
    const double kv = dot(k, v);
    Vec3 out;
    for (int i = 0; i < 3; ++i) out[i] = v[i] * c + kxv[i] * s + k[i] * kv * (1.0 - c);
    return out;
}

SphereField lift_T(const RadialDensity& rho, std::shared_ptr<const SphereGrid> grid) {
    return sample_zonal(grid, [&](double z) {
        const double r2 = (1.0 - z) / (1.0 + z);
        return rho.at(std::sqrt(r2)) / sphere_measure_density(r2);
    });
}

SphereField lift_T(const PlanarDensity& rho, std::shared_ptr<const SphereGrid> grid) {
    return sample_sphere(grid, [&](const Vec3& w) {
        const auto x = stereo_forward(w);
        if (x.at_infinity) return 0.0;
        const double r2 = x.x1 * x.x1 + x.x2 * x.x2;
        return rho.at(x.x1, x.x2) / sphere_measure_density(r2);
    });
}

}  // namespace lhls
