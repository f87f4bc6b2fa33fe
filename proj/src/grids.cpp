#include "lhls/grids.hpp"

#include <cmath>
#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>

#include "lhls/errors.hpp"

namespace lhls {

namespace {

constexpr double kPi = std::numbers::pi;

double pairwise_block(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_block(v, half) + pairwise_block(v + half, n - half);
}

// S(i, j) = ∫_{-1}^{ξ_i} ℓ_j(ξ) dξ for the Lagrange basis on GL nodes.
std::vector<double> integration_matrix(const GaussLegendreRule& rule) {
    const int n = static_cast<int>(rule.nodes.size());
    std::vector<std::vector<double>> p(n);
    for (int j = 0; j < n; ++j) p[j] = legendre_values(n, rule.nodes[j]);

    std::vector<double> s(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        const auto& pi = p[i];
        // I_k(x) = ∫_{-1}^x P_k
        std::vector<double> ik(n);
        ik[0] = rule.nodes[i] + 1.0;
        for (int k = 1; k < n; ++k) ik[k] = (pi[k + 1] - pi[k - 1]) / (2.0 * k + 1.0);
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += 0.5 * (2.0 * k + 1.0) * rule.weights[j] * p[j][k] * ik[k];
            s[static_cast<std::size_t>(i) * n + j] = acc;
        }
    }
    return s;
}

const GaussLegendreRule& cached_rule(int order) {
    static std::map<int, GaussLegendreRule> cache;
    static std::mutex mu;
    std::lock_guard lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, gauss_legendre(order)).first;
    return it->second;
}

const std::vector<double>& cached_integration_matrix(int order) {
    static std::map<int, std::vector<double>> cache;
    static std::mutex mu;
    std::lock_guard lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, integration_matrix(gauss_legendre(order))).first;
    return it->second;
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
    return pairwise_block(values.data(), values.size());
}

double weighted_sum(std::span<const double> values, std::span<const double> weights) {
    if (values.size() != weights.size())
        throw DimensionError("grids", "values length " + std::to_string(values.size()) +
                                          " does not match node count " + std::to_string(weights.size()));
    std::vector<double> prod(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) prod[i] = values[i] * weights[i];
    return pairwise_sum(prod);
}

std::vector<double> legendre_values(int lmax, double x) {
    std::vector<double> p(static_cast<std::size_t>(lmax) + 1);
    p[0] = 1.0;
    if (lmax >= 1) p[1] = x;
    for (int l = 2; l <= lmax; ++l) p[l] = ((2.0 * l - 1.0) * x * p[l - 1] - (l - 1.0) * p[l - 2]) / l;
    return p;
}

GaussLegendreRule gauss_legendre(int n) {
    if (n < 1) throw ParameterError("grids", "Gauss-Legendre order must be >= 1");
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int l = 2; l <= n; ++l) {
                const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = x; p0 = 1.0; }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int l = 2; l <= n; ++l) {
            const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
            p0 = p1;
            p1 = p2;
        }
        if (n == 1) { p1 = x; p0 = 1.0; }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

// ---------------------------------------------------------------------------

RadialGrid RadialGrid::make(double r_max, int n, RadialScheme scheme, double log_span) {
    if (!(r_max > 0.0) || !std::isfinite(r_max))
        throw DomainError("grids", "make_radial_grid requires r_max > 0");
    if (n < 16) throw ParameterError("grids", "make_radial_grid requires n >= 16");
    if (scheme == RadialScheme::log_uniform && !(log_span > 0.0))
        throw ParameterError("grids", "log-uniform radial grid requires span > 0");

    RadialGrid g;
    g.r_max_ = r_max;
    g.scheme_ = scheme;
    g.log_span_ = scheme == RadialScheme::log_uniform ? log_span : 0.0;

    const int p = kPanelOrder;
    const int n_panels = n / p;
    const int first_order = p + n % p;   // leftover nodes go to the innermost panel

    auto add_panel = [&](int order, double a, double b, bool logarithmic) {
        const auto& rule = cached_rule(order);
        g.panels_.push_back({g.nodes_.size(), order, a, b, logarithmic});
        const double half = 0.5 * (b - a);
        for (int k = 0; k < order; ++k) {
            const double xi = 0.5 * (a + b) + half * rule.nodes[k];
            double r, drdxi;
            if (logarithmic) {
                r = std::exp(xi);
                drdxi = r * half;
            } else {
                r = xi;
                drdxi = half;
            }
            const double jac = 2.0 * kPi * r * drdxi;
            g.nodes_.push_back(r);
            g.jacobian_.push_back(jac);
            g.weights_.push_back(rule.weights[k] * jac);
        }
    };

    if (scheme == RadialScheme::uniform) {
        const double width = r_max / n_panels;
        for (int k = 0; k < n_panels; ++k)
            add_panel(k == 0 ? first_order : p, k * width, (k + 1) * width, false);
    } else {
        const double r_core = r_max * std::exp(-log_span);
        add_panel(first_order, 0.0, r_core, false);
        const double s0 = std::log(r_core), s1 = std::log(r_max);
        const int n_log = n_panels - 1;
        const double width = (s1 - s0) / n_log;
        for (int k = 0; k < n_log; ++k) {
            const double a = s0 + k * width;
            const double b = k + 1 == n_log ? s1 : s0 + (k + 1) * width;
            add_panel(p, a, b, true);
        }
    }
    return g;
}

double RadialGrid::integrate(std::span<const double> values) const {
    return weighted_sum(values, weights_);
}

std::vector<double> RadialGrid::cumulative(std::span<const double> values) const {
    if (values.size() != nodes_.size())
        throw DimensionError("grids", "cumulative: values length does not match node count");
    std::vector<double> out(values.size());
    double offset = 0.0;
    for (const auto& panel : panels_) {
        const auto& s = cached_integration_matrix(panel.order);
        const int m = panel.order;
        std::vector<double> g(m);
        for (int j = 0; j < m; ++j) g[j] = values[panel.first + j] * jacobian_[panel.first + j];
        for (int i = 0; i < m; ++i) {
            double acc = 0.0;
            for (int j = 0; j < m; ++j) acc += s[static_cast<std::size_t>(i) * m + j] * g[j];
            out[panel.first + i] = offset + acc;
        }
        std::vector<double> w(m);
        for (int j = 0; j < m; ++j) w[j] = values[panel.first + j] * weights_[panel.first + j];
        offset += pairwise_sum(w);
    }
    return out;
}

double RadialGrid::cumulative_at(std::span<const double> values, double r) const {
    if (values.size() != nodes_.size())
        throw DimensionError("grids", "cumulative_at: values length does not match node count");
    r = std::clamp(r, 0.0, r_max_);
    double offset = 0.0;
    for (const auto& p : panels_) {
        const double start = p.logarithmic ? std::exp(p.a) : p.a;
        const double end = p.logarithmic ? std::exp(p.b) : p.b;
        if (r >= end) {
            for (int j = 0; j < p.order; ++j) offset += values[p.first + j] * weights_[p.first + j];
            continue;
        }
        if (r <= start) break;
        // partial panel: Gauss–Legendre on [a, var(r)] of the interpolant
        const double va = p.a, vb = p.logarithmic ? std::log(r) : r;
        const auto& rule = cached_rule(16);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double v = 0.5 * (va + vb) + 0.5 * (vb - va) * rule.nodes[q];
            const double rr = p.logarithmic ? std::exp(v) : v;
            const double jac = 2.0 * std::numbers::pi * rr * (p.logarithmic ? rr : 1.0);
            offset += 0.5 * (vb - va) * rule.weights[q] * jac * interpolate(values, rr);
        }
        break;
    }
    return offset;
}

double RadialGrid::interpolate(std::span<const double> values, double r) const {
    if (values.size() != nodes_.size())
        throw DimensionError("grids", "interpolate: values length does not match node count");
    r = std::clamp(r, 0.0, r_max_);
    // locate the panel
    std::size_t lo = 0, hi = panels_.size();
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        const auto& p = panels_[mid];
        const double start = p.logarithmic ? std::exp(p.a) : p.a;
        if (r >= start) lo = mid; else hi = mid;
    }
    const auto& p = panels_[lo];
    double var = r;
    if (p.logarithmic) var = r > 0.0 ? std::log(r) : p.a;
    const double xi = (2.0 * var - (p.a + p.b)) / (p.b - p.a);
    const auto& rule = cached_rule(p.order);
    // barycentric weights for GL nodes: w_j ∝ (-1)^j sqrt((1 - x_j^2) W_j)
    double num = 0.0, den = 0.0;
    for (int j = 0; j < p.order; ++j) {
        const double d = xi - rule.nodes[j];
        if (d == 0.0) return values[p.first + j];
        const double bw = ((j % 2) ? -1.0 : 1.0) * std::sqrt((1.0 - rule.nodes[j] * rule.nodes[j]) * rule.weights[j]);
        num += bw / d * values[p.first + j];
        den += bw / d;
    }
    return num / den;
}

// ---------------------------------------------------------------------------

CartesianGrid CartesianGrid::make(double half_width, int n) {
    if (!(half_width > 0.0)) throw DomainError("grids", "Cartesian grid requires L > 0");
    if (n < 8) throw ParameterError("grids", "Cartesian grid requires N >= 8 per side");
    CartesianGrid g;
    g.n_ = n;
    g.half_width_ = half_width;
    g.h_ = 2.0 * half_width / n;
    return g;
}

double CartesianGrid::integrate(std::span<const double> values) const {
    if (values.size() != size())
        throw DimensionError("grids", "values length does not match Cartesian node count");
    return pairwise_sum(values) * cell_area();
}

// ---------------------------------------------------------------------------

SphereGrid SphereGrid::make(int n_rings, int n_azimuth) {
    if (n_rings < 2 || n_azimuth < 1)
        throw ParameterError("grids", "sphere grid requires >= 2 rings and >= 1 azimuth");
    SphereGrid g;
    g.n_rings_ = n_rings;
    g.n_azimuth_ = n_azimuth;
    const auto rule = gauss_legendre(n_rings);
    g.z_ = rule.nodes;
    g.ring_weight_.resize(n_rings);
    for (int j = 0; j < n_rings; ++j) g.ring_weight_[j] = 0.5 * rule.weights[j];
    g.weights_.resize(g.size());
    for (int j = 0; j < n_rings; ++j)
        for (int k = 0; k < n_azimuth; ++k)
            g.weights_[static_cast<std::size_t>(j) * n_azimuth + k] = g.ring_weight_[j] / n_azimuth;
    return g;
}

SphereGrid SphereGrid::for_degree(int lmax) {
    return make(lmax + 1, 2 * lmax + 2);
}

double SphereGrid::phi(int k) const { return 2.0 * kPi * k / n_azimuth_; }

void SphereGrid::point(int ring, int k, double out[3]) const {
    const double z = z_[ring];
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double ph = phi(k);
    out[0] = s * std::cos(ph);
    out[1] = s * std::sin(ph);
    out[2] = z;
}

double SphereGrid::integrate(std::span<const double> values) const {
    return weighted_sum(values, weights_);
}

// ---------------------------------------------------------------------------

CircleGrid CircleGrid::make(int n) {
    if (n < 1) throw ParameterError("grids", "circle grid requires n >= 1");
    CircleGrid g;
    g.n_ = n;
    return g;
}

double CircleGrid::theta(int m) const { return 2.0 * kPi * m / n_; }

double CircleGrid::integrate(std::span<const double> values) const {
    if (values.size() != size())
        throw DimensionError("grids", "values length does not match circle node count");
    return pairwise_sum(values) / n_;
}

}  // namespace lhls
