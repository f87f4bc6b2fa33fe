#include <cmath>
#include <memory>
#include <numbers>

#include "doctest.h"
#include "lhls/errors.hpp"
#include "lhls/functionals.hpp"
#include "lhls/optimizers.hpp"
#include "oracles.hpp"

using namespace lhls;
using std::numbers::pi;

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

std::shared_ptr<const RadialGrid> log_grid(int n = 2048, double rmax = 1e6) {
    return std::make_shared<const RadialGrid>(RadialGrid::make(rmax, n, RadialScheme::log_uniform));
}

RadialDensity gaussian(double sigma, std::shared_ptr<const RadialGrid> g) {
    return sample_radial(g, [sigma](double r) {
        return std::exp(-r * r / (2 * sigma * sigma)) / (2 * pi * sigma * sigma);
    });
}

}  // namespace

// For a centred Gaussian of variance σ² per axis, X - X' has |X - X'|² = 4σ²E
// with E ~ Exp(1), so E log|X - X'| = ½(log 4σ² - γ). Adding the entropy
// -log(2πσ²) - 1 gives a free energy of log 2 - γ for every σ.
TEST_CASE("radial free energy of Gaussians is log 2 - gamma") {
    const auto g = log_grid();
    for (double sigma : {0.05, 1.0, 30.0}) {
        const auto t = planar_free_energy_terms(gaussian(sigma, g));
        CHECK(t.entropy == doctest::Approx(-std::log(2 * pi * sigma * sigma) - 1).epsilon(1e-10));
        CHECK(t.interaction == doctest::Approx(0.5 * (std::log(4 * sigma * sigma) - kEulerGamma)).epsilon(1e-10));
        CHECK(t.value == doctest::Approx(std::log(2.0) - kEulerGamma).epsilon(1e-10));
    }
}

TEST_CASE("radial free energy vanishes on the optimizer family") {
    // the grid must hold the core and leave a tail of mass s²/r_max² ≈ 1e-12
    for (double s : {0.01, 1.0, 50.0}) {
        const double f = planar_free_energy(planar_optimizer({s, {0.0, 0.0}}, log_grid(2048, 1e6 * s)));
        CHECK(std::abs(f) < 1e-10);
    }
}

TEST_CASE("uniform disk interaction") {
    // ∬ log max(r, r') over the unit disk with density 1/π: 2∫0^1 2r log r · r² dr = -¼
    // r = 1 is a panel boundary, so the jump is integrated exactly
    const auto g = std::make_shared<const RadialGrid>(RadialGrid::make(4.0, 1024, RadialScheme::uniform));
    const auto rho = sample_radial(g, [](double r) { return r < 1.0 ? 1.0 / pi : 0.0; });
    CHECK(log_interaction(rho) == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("mass check") {
    const auto g = log_grid(512);
    const auto rho = gaussian(1.0, g).scaled(1.01);
    CHECK_THROWS_AS(planar_free_energy(rho), NormalizationError);
    CHECK_NOTHROW(planar_free_energy(rho, 0.02));
}

TEST_CASE("lattice self weight makes the punctured sum accurate") {
    // ∫ e^{-|x|²} log|x| dx = π∫0^∞ e^{-u} ½ log u du = -πγ/2
    const double exact = -pi * kEulerGamma / 2;
    double prev = 0.0;
    for (double h : {0.5, 0.25, 0.125, 0.0625}) {
        const int m = static_cast<int>(std::ceil(7.0 / h));
        double s = 0.0;
        for (int i = -m; i <= m; ++i)
            for (int j = -m; j <= m; ++j) {
                if (i == 0 && j == 0) continue;
                const double r2 = h * h * (double(i) * i + double(j) * j);
                s += std::exp(-r2) * 0.5 * std::log(r2);
            }
        s = h * h * (s + lattice_log_self_weight(h));
        const double err = std::abs(s - exact);
        if (prev > 0.0) CHECK(std::log2(prev / err) > 3.8);   // fourth order
        prev = err;
        // without the weight the error is first order in h²|log h|
        CHECK(err < 0.2 * h * h * std::abs(std::log(h)));
    }
    CHECK(prev < 2e-6);
}

TEST_CASE("Cartesian free energy agrees with the radial path") {
    const auto cg = std::make_shared<const CartesianGrid>(CartesianGrid::make(12.0, 256));
    const auto rho = normalized(sample_planar(cg, [](double x, double y) {
        return std::exp(-(x * x + y * y) / 2) / (2 * pi);
    }));
    const auto t = planar_free_energy_terms(rho);
    CHECK(t.value == doctest::Approx(std::log(2.0) - kEulerGamma).epsilon(1e-6));
    const auto r = planar_free_energy_terms(gaussian(1.0, log_grid()));
    CHECK(t.interaction == doctest::Approx(r.interaction).epsilon(1e-6));
}

TEST_CASE("Green eigenvalues invert the Laplacian") {
    // -2 log|ω - ω'| = -log 2 - log(1 - t) and ∫ log(1-t) P_l dt = -2/(l(l+1))
    const auto& lam = green_eigenvalues(40);
    REQUIRE(lam.size() >= 41);
    CHECK(lam[0] == doctest::Approx(1.0 - 2.0 * std::log(2.0)).epsilon(1e-12));
    for (int l = 1; l <= 40; ++l) CHECK(lam[l] == doctest::Approx(1.0 / (l * (l + 1.0))).epsilon(1e-12));

    const auto grid = make_sphere_grid(16);
    const auto f = sample_sphere(grid, [](const Vec3& w) { return w[2] + w[0] * w[1]; });
    const auto gf = sphere_green_apply(f);
    const auto expect = sample_sphere(grid, [](const Vec3& w) { return w[2] / 2 + w[0] * w[1] / 6; });
    for (std::size_t i = 0; i < gf.values.size(); ++i) CHECK(gf.values[i] == doctest::Approx(expect.values[i]).scale(1.0).epsilon(1e-12));
}

TEST_CASE("zonal spherical free energy against Simpson") {
    const auto grid = make_zonal_grid(128);
    for (double a : {0.3, 0.9}) {
        const auto f = sample_zonal(grid, [a](double z) { return a * z; });
        const auto t = spherical_free_energy_terms(f);
        const double ent = 0.5 * oracle::simpson([a](double z) { return (1 + a * z) * std::log(1 + a * z); }, -1.0, 1.0, 20000);
        CHECK(t.entropy == doctest::Approx(ent).epsilon(1e-10));
        CHECK(t.interaction == doctest::Approx(-a * a / 12).epsilon(1e-12));
        CHECK(spherical_free_energy(f) == doctest::Approx(ent - a * a / 6).epsilon(1e-10));
    }
}

TEST_CASE("Dirichlet energies") {
    const auto grid = make_sphere_grid(64);
    const auto y1 = sample_sphere(grid, [](const Vec3& w) { return std::sqrt(3.0) * w[0]; });
    CHECK(dirichlet_energy(y1) == doctest::Approx(2.0).epsilon(1e-12));
    for (double t : {0.2, 1.0}) {
        const auto u = sphere_optimizer({t, {0.0, 0.6, 0.8}}, grid);
        CHECK(dirichlet_energy(u) == doctest::Approx(8 * (t / std::tanh(t) - 1)).epsilon(1e-10));
    }
}

TEST_CASE("Onofri functional") {
    const auto grid = make_sphere_grid(64);
    const auto opt = sphere_optimizer({0.7, {1.0, 0.0, 0.0}}, grid);
    CHECK(std::abs(onofri_functional(opt)) < 1e-12);
    for (double a : {0.5, 2.0}) {
        // ∫|∇(az)|² = 2a²/3, ∫e^{az} = sinh a / a
        const auto u = sample_sphere(grid, [a](const Vec3& w) { return a * w[2]; });
        const double j = a * a / 6 - std::log(std::sinh(a) / a);
        CHECK(onofri_functional(u) == doctest::Approx(j).epsilon(1e-11));
        auto rho = u;
        const double z = std::log(std::sinh(a) / a);
        for (auto& v : rho.values) v = std::exp(v - z);
        CHECK(onofri_entropy_form_gap(rho) == doctest::Approx(4 * j).epsilon(1e-9));
    }
}

TEST_CASE("Lebedev-Milin functional") {
    for (double r : {0.0, 0.5, 0.9}) {
        const auto u = circle_optimizer({r, 1.3});
        CHECK(half_laplacian_energy(u) == doctest::Approx(-2 * std::log(1 - r * r)).scale(1.0).epsilon(1e-13));
        CHECK(std::abs(lebedev_milin_functional(u)) < 1e-12);
        CHECK(std::abs(circle_log_exp_integral(u)) < 1e-12);
    }
    CircleField c;
    c.coef = {0.0, {0.3, -0.1}};
    // ∫e^{2|c|cos} = I0(2|c|)
    const double a = 2 * std::abs(c.coef[1]);
    const double i0 = oracle::simpson([a](double th) { return std::exp(a * std::cos(th)); }, 0.0, 2 * pi, 2000) / (2 * pi);
    CHECK(lebedev_milin_functional(c) == doctest::Approx(std::norm(c.coef[1]) - std::log(i0)).epsilon(1e-12));
    const auto back = CircleField::from_samples(c.sample(64), 8);
    CHECK(std::abs(back.coef[1] - c.coef[1]) < 1e-14);
}
