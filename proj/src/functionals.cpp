#include "lhls/functionals.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "lhls/entropy.hpp"
#include "lhls/errors.hpp"

namespace lhls {

namespace {

constexpr double kPi = std::numbers::pi;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void require_unit_mass(double mass, double tol) {
    if (std::abs(mass - 1.0) > tol)
        throw NormalizationError("functionals", "planar_free_energy requires unit mass (got " + std::to_string(mass) +
                                                    "); normalize ρ/M first");
}

void require_mean_zero(const SphereField& f, const char* op) {
    if (std::abs(f.integral()) > 1e-8)
        throw DomainError("functionals", std::string(op) + " requires ∫f dσ = 0");
}

// Σ_l λ_l (degree-l power of f) for l ≥ 1.
double green_quadratic_form(const SphereField& f) {
    const auto c = analyze(f);
    const auto& lam = green_eigenvalues(c.lmax());
    std::vector<double> terms(c.lmax() + 1, 0.0);
    for (int l = 1; l <= c.lmax(); ++l) terms[l] = lam[l] * c.degree_power(l);
    return pairwise_sum(terms);
}

}  // namespace

double log_interaction(const RadialDensity& rho) {
    const auto& g = *rho.grid;
    const auto nodes = g.nodes();
    // ∫ρ log(e + r^2) must be resolved by the grid
    std::vector<double> moment(g.size()), tail(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        moment[i] = rho.values[i] * std::log(std::exp(1.0) + nodes[i] * nodes[i]);
        if (nodes[i] > 0.5 * g.r_max()) tail[i] = moment[i];
    }
    const double total = g.integrate(moment);
    if (!std::isfinite(total) || g.integrate(tail) > 1e-4 * std::max(total, 1e-300))
        throw DomainError("functionals", "log-moment ∫ρ log(e+|x|^2) is not converged on the radial grid");

    const auto m = g.cumulative(rho.values);
    std::vector<double> integrand(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) integrand[i] = 2.0 * rho.values[i] * std::log(nodes[i]) * m[i];
    return g.integrate(integrand);
}

double lattice_log_self_weight(double h) {
    // Punctured-lattice correction for log|x| on the square lattice hZ^2:
    // ½ d/ds Σ'|k|^{-2s} at s = 0, where Σ'|k|^{-2s} = 4ζ(s)β(s).
    return std::log(h) + 0.5 * std::log(4.0 * kPi) - 2.0 * std::lgamma(0.25);
}

double log_interaction(const PlanarDensity& rho) {
    const auto& g = *rho.grid;
    const int n = g.n();
    const int m = 2 * n;
    const int mc = m / 2 + 1;
    const double h = g.spacing();

    double* kernel = fftw_alloc_real(static_cast<std::size_t>(m) * m);
    double* q = fftw_alloc_real(static_cast<std::size_t>(m) * m);
    fftw_complex* kf = fftw_alloc_complex(static_cast<std::size_t>(m) * mc);
    fftw_complex* qf = fftw_alloc_complex(static_cast<std::size_t>(m) * mc);

    fftw_plan pk = fftw_plan_dft_r2c_2d(m, m, kernel, kf, FFTW_ESTIMATE);
    fftw_plan pq = fftw_plan_dft_r2c_2d(m, m, q, qf, FFTW_ESTIMATE);
    fftw_plan back = fftw_plan_dft_c2r_2d(m, m, qf, q, FFTW_ESTIMATE);

    for (int i = 0; i < m; ++i) {
        const int di = i < n ? i : i - m;
        for (int j = 0; j < m; ++j) {
            const int dj = j < n ? j : j - m;
            double v;
            if (i == n || j == n)
                v = 0.0;   // unreachable offsets
            else if (di == 0 && dj == 0)
                v = lattice_log_self_weight(h);
            else
                v = 0.5 * std::log(h * h * (double(di) * di + double(dj) * dj));
            kernel[static_cast<std::size_t>(i) * m + j] = v;
        }
    }
    std::fill(q, q + static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) q[static_cast<std::size_t>(i) * m + j] = rho.values[g.index(i, j)] * g.cell_area();

    fftw_execute(pk);
    fftw_execute(pq);
    for (std::size_t k = 0; k < static_cast<std::size_t>(m) * mc; ++k) {
        const double re = kf[k][0] * qf[k][0] - kf[k][1] * qf[k][1];
        const double im = kf[k][0] * qf[k][1] + kf[k][1] * qf[k][0];
        qf[k][0] = re;
        qf[k][1] = im;
    }
    fftw_execute(back);

    std::vector<double> terms(g.size());
    const double scale = 1.0 / (double(m) * m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            terms[g.index(i, j)] = rho.values[g.index(i, j)] * g.cell_area() * q[static_cast<std::size_t>(i) * m + j] * scale;

    fftw_destroy_plan(pk);
    fftw_destroy_plan(pq);
    fftw_destroy_plan(back);
    fftw_free(kernel);
    fftw_free(q);
    fftw_free(kf);
    fftw_free(qf);
    return pairwise_sum(terms);
}

FreeEnergyTerms planar_free_energy_terms(const RadialDensity& rho, double mass_tol) {
    require_unit_mass(rho.mass(), mass_tol);
    std::vector<double> e(rho.values.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = xlogx(rho.values[i]);
    FreeEnergyTerms t;
    t.entropy = rho.grid->integrate(e);
    t.interaction = log_interaction(rho);
    t.value = t.entropy + 2.0 * t.interaction + 1.0 + std::log(kPi);
    return t;
}

FreeEnergyTerms planar_free_energy_terms(const PlanarDensity& rho, double mass_tol) {
    require_unit_mass(rho.mass(), mass_tol);
    std::vector<double> e(rho.values.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = xlogx(rho.values[i]);
    FreeEnergyTerms t;
    t.entropy = rho.grid->integrate(e);
    t.interaction = log_interaction(rho);
    t.value = t.entropy + 2.0 * t.interaction + 1.0 + std::log(kPi);
    return t;
}

double planar_free_energy(const RadialDensity& rho, double mass_tol) {
    return planar_free_energy_terms(rho, mass_tol).value;
}

double planar_free_energy(const PlanarDensity& rho, double mass_tol) {
    return planar_free_energy_terms(rho, mass_tol).value;
}

// ---------------------------------------------------------------------------

const std::vector<double>& green_eigenvalues(int lmax) {
    static std::map<int, std::vector<double>> cache;
    static std::mutex mu;
    std::lock_guard lock(mu);
    if (auto it = cache.find(lmax); it != cache.end()) return it->second;

    // λ_l = ½∫_{-1}^{1} -log(2 - 2x) P_l(x) dx, with y = 1 - x on dyadic
    // panels [2^{-k-1}·2, 2^{-k}·2] to resolve the log singularity at y = 0.
    std::vector<double> lam(static_cast<std::size_t>(lmax) + 1, 0.0);
    const auto rule = gauss_legendre(lmax / 2 + 24);
    for (int k = 0; k < 64; ++k) {
        const double b = 2.0 * std::ldexp(1.0, -k), a = 0.5 * b;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double y = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[q];
            const double w = 0.5 * (b - a) * rule.weights[q];
            const auto p = legendre_values(lmax, 1.0 - y);
            const double kern = -std::log(2.0 * y);
            for (int l = 0; l <= lmax; ++l) lam[l] += 0.5 * w * kern * p[l];
        }
    }
    return cache.emplace(lmax, std::move(lam)).first->second;
}

SphereField sphere_green_apply(const SphereField& f) {
    require_mean_zero(f, "sphere_green_apply");
    auto c = analyze(f);
    const auto& lam = green_eigenvalues(c.lmax());
    for (int l = 0; l <= c.lmax(); ++l)
        for (int m = -l; m <= l; ++m) c(l, m) *= l == 0 ? 0.0 : lam[l];
    auto out = synthesize(c, f.grid);
    out.axisymmetric = f.axisymmetric;
    return out;
}

FreeEnergyTerms spherical_free_energy_terms(const SphereField& f) {
    require_mean_zero(f, "spherical_free_energy");
    std::vector<double> e(f.values.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double p = f.values[i] + 1.0;
        if (p < 0.0) throw DomainError("functionals", "spherical_free_energy requires f + 1 >= 0");
        e[i] = xlogx(p);
    }
    FreeEnergyTerms t;
    t.entropy = f.grid->integrate(e);
    // 2∬ f log|ω-ω'| f = -⟨f, Gf⟩
    t.interaction = -0.5 * green_quadratic_form(f);
    t.value = t.entropy + 2.0 * t.interaction;
    return t;
}

double spherical_free_energy(const SphereField& f) { return spherical_free_energy_terms(f).value; }

double dirichlet_energy(const SphereField& u) {
    const auto c = analyze(u);
    std::vector<double> terms(c.lmax() + 1, 0.0);
    for (int l = 1; l <= c.lmax(); ++l) terms[l] = double(l) * (l + 1) * c.degree_power(l);
    return pairwise_sum(terms);
}

double onofri_functional(const SphereField& u) {
    const double mean = u.integral();
    SphereField v = u;
    for (double& x : v.values) x -= mean;
    return 0.25 * dirichlet_energy(v) - log_partition(v.values, v.grid->weights()) + v.integral();
}

double onofri_entropy_form_gap(const SphereField& rho) {
    for (double v : rho.values)
        if (!(v > 0.0)) throw DomainError("functionals", "onofri_entropy_form_gap requires ρ > 0");
    if (std::abs(rho.integral() - 1.0) > 1e-8)
        throw NormalizationError("functionals", "onofri_entropy_form_gap requires ∫ρ dσ = 1");
    SphereField logrho = rho;
    for (double& v : logrho.values) v = std::log(v);
    const double reversed_entropy = -logrho.integral();
    return dirichlet_energy(logrho) - 4.0 * reversed_entropy;
}

// ---------------------------------------------------------------------------

double CircleField::operator()(double theta) const {
    double v = mean();
    for (int k = 1; k <= bandwidth(); ++k) v += 2.0 * (coef[k] * std::polar(1.0, k * theta)).real();
    return v;
}

std::vector<double> CircleField::sample(int n) const {
    std::vector<double> out(n);
    const auto grid = CircleGrid::make(n);
    for (int j = 0; j < n; ++j) out[j] = (*this)(grid.theta(j));
    return out;
}

CircleField CircleField::from_samples(const std::vector<double>& values, int bandwidth) {
    const int n = static_cast<int>(values.size());
    if (2 * bandwidth >= n) throw ParameterError("functionals", "circle bandwidth must be below n/2");
    CircleField u;
    u.coef.resize(bandwidth + 1);
    const auto grid = CircleGrid::make(n);
    for (int k = 0; k <= bandwidth; ++k) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < n; ++j) acc += values[j] * std::polar(1.0, -k * grid.theta(j));
        u.coef[k] = acc / double(n);
    }
    u.coef[0] = u.coef[0].real();
    return u;
}

double half_laplacian_energy(const CircleField& u) {
    std::vector<double> terms(u.coef.size(), 0.0);
    for (int k = 1; k <= u.bandwidth(); ++k) terms[k] = 2.0 * k * std::norm(u.coef[k]);
    return pairwise_sum(terms);
}

double circle_log_exp_integral(const CircleField& u, int n) {
    if (n <= 0) n = std::max(1024, 8 * u.bandwidth());
    const auto values = u.sample(n);
    const std::vector<double> w(n, 1.0 / n);
    return log_partition(values, w);
}

double lebedev_milin_functional(const CircleField& u, int n) {
    return 0.5 * half_laplacian_energy(u) - circle_log_exp_integral(u, n) + u.mean();
}

}  // namespace lhls
