#include "lhls/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lhls/errors.hpp"

namespace lhls {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
}

std::vector<double> normalized_legendre(int lmax, double z) {
    std::vector<double> n(nlm_index(lmax, lmax) + 1, 0.0);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    double nmm = 1.0;
    for (int m = 0; m <= lmax; ++m) {
        if (m > 0) nmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
        n[nlm_index(m, m)] = nmm;
        if (m + 1 <= lmax) n[nlm_index(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * z * nmm;
        for (int l = m + 2; l <= lmax; ++l) {
            const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
            const double b = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) / (4.0 * (l - 1) * (l - 1) - 1.0));
            n[nlm_index(l, m)] = a * (z * n[nlm_index(l - 1, m)] - b * n[nlm_index(l - 2, m)]);
        }
    }
    return n;
}

SphExpansion harmonics_at(int lmax, const Vec3& omega) {
    SphExpansion y(lmax);
    const auto n = normalized_legendre(lmax, std::clamp(omega[2], -1.0, 1.0));
    const double phi = std::atan2(omega[1], omega[0]);
    for (int l = 0; l <= lmax; ++l) {
        y(l, 0) = n[nlm_index(l, 0)];
        for (int m = 1; m <= l; ++m) {
            const double v = kSqrt2 * n[nlm_index(l, m)];
            y(l, m) = v * std::cos(m * phi);
            y(l, -m) = v * std::sin(m * phi);
        }
    }
    return y;
}

double SphExpansion::degree_power(int l) const {
    double s = 0.0;
    for (int m = -l; m <= l; ++m) s += (*this)(l, m) * (*this)(l, m);
    return s;
}

SphExpansion SphExpansion::truncated(double rel_tol) const {
    double cmax = 0.0;
    for (double c : coef_) cmax = std::max(cmax, std::abs(c));
    int keep = 0;
    for (int l = 0; l <= lmax_; ++l)
        for (int m = -l; m <= l; ++m)
            if (std::abs((*this)(l, m)) > rel_tol * cmax) keep = l;
    SphExpansion out(keep);
    std::copy_n(coef_.begin(), out.coef_.size(), out.coef_.begin());
    return out;
}

double SphExpansion::evaluate(const Vec3& omega) const {
    if (lmax_ < 0) return 0.0;
    const auto n = normalized_legendre(lmax_, std::clamp(omega[2], -1.0, 1.0));
    const double phi = std::atan2(omega[1], omega[0]);
    double acc = 0.0;
    for (int m = 0; m <= lmax_; ++m) {
        double c = 0.0, s = 0.0;
        for (int l = m; l <= lmax_; ++l) {
            const double nl = n[nlm_index(l, m)];
            c += (*this)(l, m) * nl;
            if (m > 0) s += (*this)(l, -m) * nl;
        }
        if (m == 0)
            acc += c;
        else
            acc += kSqrt2 * (c * std::cos(m * phi) + s * std::sin(m * phi));
    }
    return acc;
}

double SphereField::exp_integral() const {
    std::vector<double> e(values.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::exp(values[i]);
    return grid->integrate(e);
}

int resolvable_degree(const SphereGrid& grid, bool axisymmetric) {
    if (axisymmetric) return grid.rings() - 1;
    return std::min(grid.rings() - 1, (grid.azimuths() - 1) / 2);
}

std::vector<double> legendre_coefficients(const SphereField& field, int lmax) {
    const auto& g = *field.grid;
    if (lmax < 0) lmax = g.rings() - 1;
    std::vector<double> c(static_cast<std::size_t>(lmax) + 1, 0.0);
    // average over azimuth so that non-axisymmetric input yields its zonal part
    for (int j = 0; j < g.rings(); ++j) {
        double mean = 0.0;
        for (int k = 0; k < g.azimuths(); ++k) mean += field.values[static_cast<std::size_t>(j) * g.azimuths() + k];
        mean /= g.azimuths();
        const auto p = legendre_values(lmax, g.z(j));
        for (int l = 0; l <= lmax; ++l) c[l] += g.ring_weight(j) * mean * p[l];
    }
    for (int l = 0; l <= lmax; ++l) c[l] *= (2.0 * l + 1.0);
    return c;
}

SphExpansion analyze(const SphereField& field, int lmax) {
    const auto& g = *field.grid;
    if (field.values.size() != g.size()) throw DimensionError("sphere", "field length does not match grid");
    const int lres = resolvable_degree(g, field.axisymmetric);
    if (lmax < 0) lmax = lres;
    SphExpansion out(lmax);
    if (field.axisymmetric) {
        const auto c = legendre_coefficients(field, lmax);
        // c_l P_l = (c_l / sqrt(2l+1)) Y_l0
        for (int l = 0; l <= lmax; ++l) out(l, 0) = c[l] / std::sqrt(2.0 * l + 1.0);
        return out;
    }
    if (lmax > lres) throw ParameterError("sphere", "requested degree exceeds grid resolution");
    const int na = g.azimuths();
    std::vector<double> cs(static_cast<std::size_t>(lmax + 1) * na), sn(static_cast<std::size_t>(lmax + 1) * na);
    for (int m = 0; m <= lmax; ++m)
        for (int k = 0; k < na; ++k) {
            cs[static_cast<std::size_t>(m) * na + k] = std::cos(m * g.phi(k));
            sn[static_cast<std::size_t>(m) * na + k] = std::sin(m * g.phi(k));
        }
    std::vector<double> a(lmax + 1), b(lmax + 1);
    for (int j = 0; j < g.rings(); ++j) {
        const double* row = field.values.data() + static_cast<std::size_t>(j) * na;
        for (int m = 0; m <= lmax; ++m) {
            double sa = 0.0, sb = 0.0;
            for (int k = 0; k < na; ++k) {
                sa += row[k] * cs[static_cast<std::size_t>(m) * na + k];
                sb += row[k] * sn[static_cast<std::size_t>(m) * na + k];
            }
            a[m] = sa / na;
            b[m] = sb / na;
        }
        const auto n = normalized_legendre(lmax, g.z(j));
        const double w = g.ring_weight(j);
        for (int l = 0; l <= lmax; ++l) {
            out(l, 0) += w * n[nlm_index(l, 0)] * a[0];
            for (int m = 1; m <= l; ++m) {
                const double v = w * kSqrt2 * n[nlm_index(l, m)];
                out(l, m) += v * a[m];
                out(l, -m) += v * b[m];
            }
        }
    }
    return out;
}

SphereField synthesize(const SphExpansion& coeffs, std::shared_ptr<const SphereGrid> grid) {
    const auto& g = *grid;
    const int lmax = coeffs.lmax();
    const int na = g.azimuths();
    bool zonal = true;
    for (int l = 0; l <= lmax && zonal; ++l)
        for (int m = 1; m <= l; ++m)
            if (coeffs(l, m) != 0.0 || coeffs(l, -m) != 0.0) {
                zonal = false;
                break;
            }
    SphereField out{grid, std::vector<double>(g.size(), 0.0), zonal};
    if (lmax < 0) return out;
    std::vector<double> c(lmax + 1), s(lmax + 1);
    for (int j = 0; j < g.rings(); ++j) {
        const auto n = normalized_legendre(lmax, g.z(j));
        for (int m = 0; m <= lmax; ++m) {
            double sc = 0.0, ss = 0.0;
            for (int l = m; l <= lmax; ++l) {
                sc += coeffs(l, m) * n[nlm_index(l, m)];
                if (m > 0) ss += coeffs(l, -m) * n[nlm_index(l, m)];
            }
            c[m] = m == 0 ? sc : kSqrt2 * sc;
            s[m] = kSqrt2 * ss;
        }
        for (int k = 0; k < na; ++k) {
            const double ph = g.phi(k);
            double v = c[0];
            for (int m = 1; m <= lmax; ++m) v += c[m] * std::cos(m * ph) + s[m] * std::sin(m * ph);
            out.values[static_cast<std::size_t>(j) * na + k] = v;
        }
    }
    return out;
}

std::shared_ptr<const SphereGrid> make_sphere_grid(int lmax) {
    return std::make_shared<const SphereGrid>(SphereGrid::for_degree(lmax));
}

std::shared_ptr<const SphereGrid> make_zonal_grid(int rings) {
    return std::make_shared<const SphereGrid>(SphereGrid::make(rings, 1));
}

}  // namespace lhls
