#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lhls {

/// Fixed-order pairwise summation. The reduction tree depends only on the
/// length of the input, so repeated calls are bit-identical.
double pairwise_sum(std::span<const double> values);

/// Pairwise sum of values[i] * weights[i].
double weighted_sum(std::span<const double> values, std::span<const double> weights);

/// Gauss–Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;    // ascending
    std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int n);

/// Legendre polynomials P_0..P_lmax at x.
std::vector<double> legendre_values(int lmax, double x);

enum class RadialScheme { uniform, log_uniform };

/// Area-weighted quadrature for radial functions on the disk of radius r_max:
/// ∫_{|x|<r_max} φ(|x|) dx ≈ Σ w_i φ(r_i).
///
/// Nodes are composite Gauss–Legendre panels of order 8. The uniform scheme
/// uses equal panels in r. The log-uniform scheme places one panel on the
/// core disk [0, r_max·exp(-span)] and equal panels in log r above it, which
/// resolves both a small core and algebraic tails.
class RadialGrid {
public:
    static constexpr int kPanelOrder = 8;
    static constexpr double kDefaultLogSpan = 23.0;

    static RadialGrid make(double r_max, int n, RadialScheme scheme,
                           double log_span = kDefaultLogSpan);

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    std::size_t size() const { return nodes_.size(); }
    double r_max() const { return r_max_; }
    RadialScheme scheme() const { return scheme_; }
    double log_span() const { return log_span_; }

    double integrate(std::span<const double> values) const;

    /// C_i = ∫_{|x| < r_i} φ dx, using the spectral interpolant of φ inside
    /// each panel.
    std::vector<double> cumulative(std::span<const double> values) const;
    /// ∫_{|x| < r} φ dx at any r in [0, r_max].
    double cumulative_at(std::span<const double> values, double r) const;

    /// Value at radius r of the panelwise polynomial interpolant; r is
    /// clamped into [0, r_max].
    double interpolate(std::span<const double> values, double r) const;

private:
    struct Panel {
        std::size_t first;
        int order;
        double a;   // panel bounds in the panel variable (r or log r)
        double b;
        bool logarithmic;
    };

    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> jacobian_;   // 2π r dr/dξ at each node
    std::vector<Panel> panels_;
    double r_max_ = 0.0;
    double log_span_ = 0.0;
    RadialScheme scheme_ = RadialScheme::uniform;
};

/// Uniform cell-centred grid on [-L, L]^2 with N cells per side.
class CartesianGrid {
public:
    static CartesianGrid make(double half_width, int n);

    int n() const { return n_; }
    double half_width() const { return half_width_; }
    double spacing() const { return h_; }
    double cell_area() const { return h_ * h_; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }
    double coord(int i) const { return -half_width_ + (i + 0.5) * h_; }
    /// Row-major index, i along x1, j along x2.
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

    double integrate(std::span<const double> values) const;

private:
    int n_ = 0;
    double half_width_ = 0.0;
    double h_ = 0.0;
};

/// Gauss–Legendre nodes in z = cos θ times uniform azimuths, normalized to
/// the uniform probability measure on S^2. Nodes are ring-major:
/// index = ring * nphi + k.
class SphereGrid {
public:
    static SphereGrid make(int n_rings, int n_azimuth);
    /// Grid exact for spherical harmonics up to degree lmax in products of
    /// two band-limited fields.
    static SphereGrid for_degree(int lmax);

    int rings() const { return n_rings_; }
    int azimuths() const { return n_azimuth_; }
    std::size_t size() const { return static_cast<std::size_t>(n_rings_) * n_azimuth_; }
    double z(int ring) const { return z_[ring]; }
    double ring_weight(int ring) const { return ring_weight_[ring]; }
    double phi(int k) const;
    std::span<const double> zs() const { return z_; }
    std::span<const double> weights() const { return weights_; }
    /// Cartesian coordinates of node (ring, k).
    void point(int ring, int k, double out[3]) const;

    double integrate(std::span<const double> values) const;

private:
    int n_rings_ = 0;
    int n_azimuth_ = 0;
    std::vector<double> z_;
    std::vector<double> ring_weight_;   // GL weight / 2, sums to 1
    std::vector<double> weights_;       // per node
};

/// n equispaced angles with weight 1/n.
class CircleGrid {
public:
    static CircleGrid make(int n);

    std::size_t size() const { return static_cast<std::size_t>(n_); }
    double theta(int m) const;
    double weight() const { return 1.0 / n_; }
    double integrate(std::span<const double> values) const;

private:
    int n_ = 0;
};

}  // namespace lhls
