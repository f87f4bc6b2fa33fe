#include <cmath>
#include <memory>
#include <numbers>

#include "doctest.h"
#include "lhls/errors.hpp"
#include "lhls/stability.hpp"

using namespace lhls;
using std::numbers::pi;

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

std::shared_ptr<const RadialGrid> log_grid(int n = 2048) {
    return std::make_shared<const RadialGrid>(RadialGrid::make(1e6, n, RadialScheme::log_uniform));
}

}  // namespace

TEST_CASE("planar certificate for the Gaussian") {
    const auto rho = sample_radial(log_grid(), [](double r) { return std::exp(-r * r / 2) / (2 * pi); });
    const auto c = planar_stability_certificate(rho);
    CHECK(c.value == doctest::Approx(std::log(2.0) - kEulerGamma).epsilon(1e-9));
    CHECK(c.constant == 0.125);
    CHECK(c.distance == doctest::Approx(0.35953697).epsilon(1e-7));
    CHECK(c.gap == doctest::Approx(c.value - 0.125 * c.distance * c.distance).epsilon(1e-14));
    CHECK(c.gap > 0.09);
    CHECK(c.pass);
    const auto j = to_json(c);
    for (const char* k : {"inequality", "value", "constant", "distance", "gap", "tol", "pass", "grid", "search"})
        CHECK(j.contains(k));
    CHECK(j["search"]["s"].get<double>() == doctest::Approx(nearest_planar_L1(rho).params.s));
}

TEST_CASE("planar certificate at an optimizer is tight") {
    const auto c = planar_stability_certificate(planar_optimizer({2.0, {0.0, 0.0}}, log_grid()));
    CHECK(std::abs(c.value) < 1e-10);
    CHECK(c.distance < 1e-8);
    CHECK(c.pass);
}

TEST_CASE("planar certificate rejects the wrong mass") {
    const auto rho = sample_radial(log_grid(512), [](double r) { return 1.1 * std::exp(-r * r / 2) / (2 * pi); });
    CHECK_THROWS_AS(planar_stability_certificate(rho), NormalizationError);
}

TEST_CASE("Cartesian certificate for a shifted optimizer") {
    const auto cg = std::make_shared<const CartesianGrid>(CartesianGrid::make(40.0, 256));
    const auto rho = normalized(planar_optimizer({1.0, {0.5, 0.5}}, cg));
    const auto c = planar_stability_certificate(rho);
    CHECK(c.pass);
    CHECK(std::abs(c.value) < 1e-3);
}

TEST_CASE("spherical certificate") {
    const auto grid = make_sphere_grid(32);
    for (double a : {0.2, 0.8}) {
        const auto f = sample_sphere(grid, [a](const Vec3& w) { return a * w[2]; });
        const auto c = spherical_stability_certificate(f);
        CHECK(c.value == doctest::Approx(spherical_free_energy(f)).epsilon(1e-14));
        CHECK(c.gap >= 0.0);
        CHECK(c.pass);
    }
}

TEST_CASE("Onofri certificates") {
    const auto grid = make_sphere_grid(32);
    const double a = 1.0;
    const double logz = std::log(std::sinh(a) / a);
    const auto u = sample_sphere(grid, [&](const Vec3& w) { return a * w[2] + 0.3 * w[0] * w[1] - logz; });
    auto un = u;
    const double shift = std::log(u.exp_integral());
    for (auto& v : un.values) v -= shift;
    const auto oc = onofri_stability_certificates(un);
    CHECK(oc.gradient.value == doctest::Approx(onofri_functional(un)).epsilon(1e-12));
    CHECK(oc.gradient.constant == 0.125);
    CHECK(oc.entropy.constant == 0.5);
    CHECK(oc.l1.constant == 0.25);
    CHECK(oc.gradient.pass);
    CHECK(oc.entropy.pass);
    CHECK(oc.l1.pass);
    CHECK(oc.recentered.barycenter_norm < 1e-8);

    auto bad = un;
    for (auto& v : bad.values) v += 0.1;
    CHECK_THROWS_AS(onofri_stability_certificates(bad), NormalizationError);
}

TEST_CASE("constrained Onofri gap") {
    const auto grid = make_sphere_grid(32);
    // even in ω, so the barycentre of e^u vanishes
    const auto u = sample_sphere(grid, [](const Vec3& w) { return 0.9 * w[2] * w[2] - 0.4 * w[0] * w[1]; });
    CHECK(constrained_onofri_gap(u) >= 0.0);
    const double logz = std::log(std::sinh(0.5) / 0.5);
    const auto tilted = sample_sphere(grid, [&](const Vec3& w) { return 0.5 * w[2] - logz; });
    CHECK_THROWS_AS(constrained_onofri_gap(tilted), DomainError);
    const auto rc = recenter(tilted);
    CHECK(constrained_onofri_gap(rc.field) >= -1e-12);
}

TEST_CASE("circle certificate") {
    CircleField u;
    u.coef = {0.0, {0.2, 0.1}, {0.0, -0.15}, {0.05, 0.0}};
    const double shift = circle_log_exp_integral(u);
    u.coef[0] -= shift;
    const auto c = circle_stability_certificate(u);
    CHECK(c.value == doctest::Approx(lebedev_milin_functional(u)).epsilon(1e-12));
    CHECK(c.constant == 0.25);
    CHECK(c.pass);
    CHECK(circle_stability_certificate(circle_optimizer({0.3, 1.0})).distance < 1e-8);
}

TEST_CASE("transfer chain") {
    const auto grid = make_sphere_grid(32);
    const auto f = sample_sphere(grid, [](const Vec3& w) { return 0.6 * w[2] + 0.2 * (3 * w[0] * w[0] - 1); });
    const auto tc = transfer_chain(f);
    CHECK(tc.all());
    CHECK(tc.young_lhs >= tc.young_rhs - 1e-9);
    CHECK(tc.onofri_lhs >= tc.onofri_rhs - 1e-9);
    CHECK(tc.quarter_sum >= tc.eighth_square - 1e-12);
    CHECK(tc.eighth_square >= tc.final_rhs - 1e-12);

    const auto shifted = sample_sphere(grid, [](const Vec3& w) { return 0.1 + 0.6 * w[2]; });
    CHECK_THROWS_AS(transfer_chain(shifted), DomainError);
    const auto negative = sample_sphere(grid, [](const Vec3& w) { return 1.5 * w[2]; });
    CHECK_THROWS_AS(transfer_chain(negative), DomainError);
}

TEST_CASE("duality demo, one dimension") {
    // 𝓔* = y²/4, 𝓕* = y²/8, so 𝓔* - 𝓕* = y²/8 = (λμ/2)y² with λ = ¼, μ = 1
    const auto r = toy_duality_demo(quadratic_pair_1d());
    CHECK(r.all());
    CHECK(r.mu == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.max_transform_error < 1e-3);
    CHECK(r.max_transfer_residual < 1e-3);
    CHECK(r.primal_equality_points >= 1);
    CHECK(r.dual_equality_points >= 1);
    const auto j = to_json(r);
    CHECK(j["order_holds"].get<bool>());
    CHECK(j.contains("max_lipschitz_excess"));
}

TEST_CASE("duality demo, two dimensions") {
    const auto pair = anisotropic_pair_2d();
    CHECK(pair.dimension == 2);
    const auto r = toy_duality_demo(pair);
    CHECK(r.all());
    CHECK(r.mu == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.min_transfer_margin >= -pair.slack);
}

TEST_CASE("duality demo input checks") {
    auto pair = quadratic_pair_1d();
    pair.F = [](const std::vector<double>& x) { return 0.5 * x[0] * x[0]; };
    pair.F_star_exact = nullptr;
    CHECK_THROWS_AS(toy_duality_demo(pair), DomainError);
    pair = quadratic_pair_1d();
    pair.dimension = 3;
    CHECK_THROWS_AS(toy_duality_demo(pair), ParameterError);
}
