#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "lhls/geometry.hpp"
#include "lhls/optimizers.hpp"
#include "oracles.hpp"

using namespace lhls;

namespace {
Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    return normalized(Vec3{n(rng), n(rng), n(rng)});
}
}  // namespace

TEST_CASE("stereographic projection round trip and identities") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        const Vec3 w = random_unit(rng);
        const auto x = stereo_forward(w);
        REQUIRE_FALSE(x.at_infinity);
        const Vec3 back = stereo_inverse(x.x1, x.x2);
        for (int i = 0; i < 3; ++i) CHECK(back[i] == doctest::Approx(w[i]).epsilon(1e-10));
        CHECK(std::abs(stereo_norm_residual(w)) < 1e-10);
    }
    CHECK(stereo_forward({0.0, 0.0, -1.0}).at_infinity);
    const auto north = stereo_forward({0.0, 0.0, 1.0});
    CHECK(north.x1 == 0.0);
    CHECK(north.x2 == 0.0);
    CHECK(chordal_identity_check(0.3, -1.2, 2.0, 0.5) < 1e-13);
    CHECK(chordal_identity_check(-40.0, 3.0, 0.01, 0.0) < 1e-13);
}

TEST_CASE("the pushed-forward sphere measure is h and has unit mass") {
    const double mass = oracle::simpson([](double t) {
        const double r = std::exp(t);
        return sphere_measure_density(r * r) * 2.0 * std::numbers::pi * r * r;
    }, -30.0, 30.0, 200000);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sphere_measure_density(0.0) == doctest::Approx(1.0 / std::numbers::pi));
}

TEST_CASE("boosts preserve total area and invert along the same axis") {
    const auto grid = make_sphere_grid(48);
    const ConformalParams p{1.3, normalized(Vec3{0.2, -0.4, 0.9})};
    const auto b = ConformalMap::boost(p);
    std::vector<double> jac(grid->size());
    for (int j = 0; j < grid->rings(); ++j)
        for (int k = 0; k < grid->azimuths(); ++k) {
            Vec3 w;
            grid->point(j, k, w.data());
            double lj = 0.0;
            const Vec3 t = b.apply(w, &lj);
            CHECK(dot(t, t) == doctest::Approx(1.0));
            jac[static_cast<std::size_t>(j) * grid->azimuths() + k] = std::exp(lj);
        }
    CHECK(grid->integrate(jac) == doctest::Approx(1.0).epsilon(1e-12));

    const Vec3 minus_n{-p.n[0], -p.n[1], -p.n[2]};
    const auto id = b.compose(ConformalMap::boost({p.t, minus_n}));
    const auto& m = id.matrix();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(m[4 * i + j] == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0));

    const auto bp = b.boost_part();
    CHECK(bp.t == doctest::Approx(p.t).epsilon(1e-12));
    for (int i = 0; i < 3; ++i) CHECK(bp.n[i] == doctest::Approx(p.n[i]).epsilon(1e-12));
}

TEST_CASE("pushing the zero field produces a unit-mass optimizer") {
    const auto grid = make_sphere_grid(64);
    const auto zero = sample_sphere(grid, [](const Vec3&) { return 0.0; });
    const ConformalParams p{0.8, normalized(Vec3{1.0, 1.0, 0.0})};
    const auto pushed = conformal_push(zero, p);
    CHECK(pushed.exp_integral() == doctest::Approx(1.0).epsilon(1e-12));
    // U = log J is a member of the optimizer family; its mean is -2(t coth t - 1)
    CHECK(pushed.integral() == doctest::Approx(-2.0 * (p.t / std::tanh(p.t) - 1.0)).epsilon(1e-10));
}

TEST_CASE("the lift T sends h to the constant 1 and preserves mass") {
    const auto rgrid = std::make_shared<const RadialGrid>(RadialGrid::make(1e6, 1024, RadialScheme::log_uniform));
    const auto h = planar_optimizer({1.0, {0.0, 0.0}}, rgrid);
    const auto zgrid = make_zonal_grid(64);
    const auto th = lift_T(h, zgrid);
    for (double v : th.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
    const auto g = sample_radial(rgrid, [](double r) { return std::exp(-r * r) / std::numbers::pi; });
    CHECK(lift_T(g, zgrid).integral() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("spherical harmonics are orthonormal and transforms invert") {
    const auto grid = make_sphere_grid(12);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n;
    SphExpansion c(12);
    for (double& v : c.coefficients()) v = n(rng);
    const auto back = analyze(synthesize(c, grid), 12);
    for (std::size_t i = 0; i < c.coefficients().size(); ++i)
        CHECK(back.coefficients()[i] == doctest::Approx(c.coefficients()[i]).epsilon(1e-11).scale(1.0));
    // Y_10 = sqrt(3) z
    const Vec3 w = normalized(Vec3{0.3, 0.1, 0.7});
    CHECK(harmonics_at(2, w)(1, 0) == doctest::Approx(std::sqrt(3.0) * w[2]));
    const auto y = harmonics_at(12, w);
    double direct = 0.0;
    for (std::size_t i = 0; i < c.coefficients().size(); ++i) direct += c.coefficients()[i] * y.coefficients()[i];
    CHECK(c.evaluate(w) == doctest::Approx(direct).epsilon(1e-12));
    const auto rot = rotate_from_pole(w, {0.0, 0.0, 1.0});
    for (int i = 0; i < 3; ++i) CHECK(rot[i] == doctest::Approx(w[i]));
}
