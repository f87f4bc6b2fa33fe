#include <cmath>
#include <memory>
#include <numbers>

#include "doctest.h"
#include "lhls/errors.hpp"
#include "lhls/optimizers.hpp"
#include "oracles.hpp"

using namespace lhls;
using std::numbers::pi;

namespace {

std::shared_ptr<const RadialGrid> log_grid(int n = 2048) {
    return std::make_shared<const RadialGrid>(RadialGrid::make(1e6, n, RadialScheme::log_uniform));
}

double angle_diff(double a, double b) {
    return std::abs(std::remainder(a - b, 2 * pi));
}

}  // namespace

TEST_CASE("planar optimizer members") {
    const PlanarOptimizerParams p{2.0, {0.5, -1.0}};
    CHECK(planar_optimizer_value(p, 1.0, -2.0) == doctest::Approx(1 / (pi * 4)));
    // radial symmetry about the centre s·x0
    CHECK(planar_optimizer_value(p, 1.3, -2.4) == doctest::Approx(planar_optimizer_value(p, 0.7, -1.6)));

    const auto cg = std::make_shared<const CartesianGrid>(CartesianGrid::make(200.0, 512));
    const auto h = planar_optimizer(p, cg);
    // box [-200, 200]² loses about s²/(s² + 200²) of the mass
    CHECK(h.mass() == doctest::Approx(1 - 4.0 / (4 + 200.0 * 200.0)).epsilon(2e-4));
    double m1 = 0, m2 = 0;
    std::vector<double> x1(h.values.size()), x2(h.values.size());
    for (int i = 0; i < cg->n(); ++i)
        for (int j = 0; j < cg->n(); ++j) {
            x1[cg->index(i, j)] = cg->coord(i) * h.values[cg->index(i, j)];
            x2[cg->index(i, j)] = cg->coord(j) * h.values[cg->index(i, j)];
        }
    m1 = cg->integrate(x1) / h.mass();
    m2 = cg->integrate(x2) / h.mass();
    CHECK(m1 == doctest::Approx(1.0).epsilon(2e-2));
    CHECK(m2 == doctest::Approx(-2.0).epsilon(2e-2));

    CHECK_THROWS(planar_optimizer(p, log_grid(256)));
}

TEST_CASE("radial nearest optimizer recovers the scale") {
    const auto g = log_grid();
    for (double s : {0.02, 3.0, 40.0}) {
        const auto near = nearest_planar_L1(planar_optimizer({s, {0.0, 0.0}}, g));
        CHECK(near.params.s == doctest::Approx(s).epsilon(1e-6));
        CHECK(near.distance < 1e-8);
    }
}

TEST_CASE("radial L1 distance of the Gaussian matches a log-r Simpson oracle") {
    const auto g = log_grid();
    auto gauss = [](double r) { return std::exp(-r * r / 2) / (2 * pi); };
    const auto rho = sample_radial(g, gauss);
    for (double s : {0.5, 1.0, 2.0}) CHECK(planar_L1_to_optimizer(rho, s) == doctest::Approx(oracle::radial_L1(gauss, s)).epsilon(1e-8));

    double s_star = 0.0;
    const double d = oracle::min_over_scale([&](double s) { return oracle::radial_L1(gauss, s); }, -2.0, 2.0, &s_star);
    const auto near = nearest_planar_L1(rho);
    CHECK(near.distance == doctest::Approx(d).epsilon(1e-8));
    CHECK(near.params.s == doctest::Approx(s_star).epsilon(1e-4));
    CHECK(near.distance == doctest::Approx(0.35953697).epsilon(1e-7));
    CHECK_FALSE(near.info.boundary_warning);
}

TEST_CASE("Cartesian nearest optimizer recovers a shifted member") {
    const auto cg = std::make_shared<const CartesianGrid>(CartesianGrid::make(40.0, 256));
    const PlanarOptimizerParams p{1.5, {0.4, -0.2}};
    const auto near = nearest_planar_L1(normalized(planar_optimizer(p, cg)));
    CHECK(near.params.s == doctest::Approx(1.5).epsilon(1e-3));
    CHECK(near.params.s * near.params.x0[0] == doctest::Approx(0.6).epsilon(1e-3));
    CHECK(near.params.s * near.params.x0[1] == doctest::Approx(-0.3).epsilon(1e-3));
    CHECK(near.distance < 5e-3);
}

TEST_CASE("sphere optimizer mean, barycentre and normalization") {
    const auto grid = make_sphere_grid(96);
    for (double t : {0.0, 0.4, 2.0}) {
        const Vec3 n{0.0, 0.6, 0.8};
        const auto u = sphere_optimizer({t, n}, grid);
        CHECK(u.exp_integral() == doctest::Approx(1.0).epsilon(1e-12));
        // ∫ -2 log(cosh t + sinh t z) dz/2, independently by Simpson
        const double mean = -oracle::simpson([t](double z) { return std::log(std::cosh(t) + std::sinh(t) * z); }, -1.0, 1.0, 4000);
        CHECK(u.integral() == doctest::Approx(mean).scale(1.0).epsilon(1e-10));
        CHECK(sphere_optimizer_mean(t) == doctest::Approx(mean).scale(1.0).epsilon(1e-10));
        const Vec3 b = sphere_barycenter(u);
        const double bn = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
        CHECK(bn == doctest::Approx(optimizer_barycenter_norm(t)).scale(1.0).epsilon(1e-10));
        // points against n: the density is largest where n·ω = -1
        if (t > 0) CHECK(b[1] * n[1] + b[2] * n[2] < 0);
    }
}

TEST_CASE("recentering an optimizer gives the constant field") {
    const auto grid = make_sphere_grid(48);
    const auto u = sphere_optimizer({1.2, {1.0, 0.0, 0.0}}, grid);
    const auto rc = recenter(u);
    CHECK(rc.barycenter_norm < 1e-10);
    for (double v : rc.field.values) CHECK(std::abs(v) < 1e-8);
}

TEST_CASE("nearest sphere optimizer recovers the member") {
    const auto grid = make_sphere_grid(48);
    const Vec3 n{0.0, std::sqrt(0.5), std::sqrt(0.5)};
    const auto u = sphere_optimizer({0.8, n}, grid);
    for (const auto& near : {nearest_sphere_entropy(u), nearest_sphere_gradient(u), nearest_sphere_reverse_entropy(u)}) {
        CHECK(near.params.t == doctest::Approx(0.8).epsilon(1e-5));
        CHECK(near.params.n[1] * n[1] + near.params.n[2] * n[2] == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(std::abs(near.value) < 1e-9);
    }
}

TEST_CASE("nearest sphere entropy of a zonal field matches a one-dimensional oracle") {
    const double a = 1.5;
    const double logz = std::log(std::sinh(a) / a);
    // H(e^u | e^{u_t}) with n = ±e_z, the minimizer lies on the axis by symmetry
    auto h = [&](double t) {
        return 0.5 * oracle::simpson(
                         [&](double z) {
                             const double u = a * z - logz;
                             return std::exp(u) * (u + 2 * std::log(std::cosh(t) - std::sinh(t) * z));
                         },
                         -1.0, 1.0, 4000);
    };
    const auto gs = golden_section(h, 0.0, 5.0, 1e-10);
    const auto grid = make_sphere_grid(48);
    const auto u = sample_sphere(grid, [&](const Vec3& w) { return a * w[2] - logz; });
    const auto near = nearest_sphere_entropy(u);
    CHECK(near.value == doctest::Approx(gs.value).epsilon(1e-8));
    CHECK(near.params.t == doctest::Approx(gs.x[0]).epsilon(1e-4));
    CHECK(near.params.n[2] == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(sphere_entropy_to_optimizer(u, {gs.x[0], {0.0, 0.0, -1.0}}) == doctest::Approx(gs.value).epsilon(1e-10));
}

TEST_CASE("nearest Poisson kernel on the circle") {
    for (const auto& p : {CircleOptimizerParams{0.0, 0.0}, CircleOptimizerParams{0.4, 2.0}, CircleOptimizerParams{0.8, -2.5}}) {
        const auto near = nearest_circle_L1(circle_optimizer(p));
        CHECK(near.distance < 1e-8);
        CHECK(near.params.r == doctest::Approx(p.r).scale(1.0).epsilon(1e-6));
        if (p.r > 0) CHECK(angle_diff(near.params.alpha, p.alpha) < 1e-6);
    }
    const auto v = circle_optimizer({0.5, 1.0});
    CHECK(v(1.0) == doctest::Approx(std::log(circle_optimizer_density({0.5, 1.0}, 1.0))).epsilon(1e-14));
    CHECK(circle_optimizer_density({0.5, 1.0}, 1.0) == doctest::Approx(3.0));
}

TEST_CASE("general minimizers") {
    const auto rb = nelder_mead(
        [](const std::vector<double>& x) {
            return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
        },
        {-1.2, 1.0}, 0.5, 1e-20, 10000);
    CHECK(rb.x[0] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(rb.x[1] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(rb.evaluations <= 10000);

    const auto gs = golden_section([](double x) { return std::cos(x); }, 2.0, 5.0);
    CHECK(gs.x[0] == doctest::Approx(pi).epsilon(1e-7));   // flat minimum: x resolves to √eps
    CHECK(gs.value == doctest::Approx(-1.0));
}
