#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "lhls/errors.hpp"
#include "lhls/grids.hpp"
#include "oracles.hpp"

using namespace lhls;
using std::numbers::pi;

TEST_CASE("pairwise sum is accurate and order-stable") {
    std::vector<double> v(1000003, 0.1);
    const double s = pairwise_sum(v);
    CHECK(s == doctest::Approx(100000.3).epsilon(1e-14));
    CHECK(pairwise_sum(v) == s);
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
    std::vector<double> w(v.size(), 2.0);
    CHECK(weighted_sum(v, w) == doctest::Approx(200000.6).epsilon(1e-14));
    CHECK_THROWS_AS(weighted_sum(v, std::vector<double>(3, 1.0)), DimensionError);
}

TEST_CASE("Gauss-Legendre rules are exact to degree 2n-1") {
    for (int n : {1, 2, 5, 12, 40}) {
        const auto rule = gauss_legendre(n);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += rule.weights[i] * std::pow(rule.nodes[i], k);
            const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
            CHECK(acc == doctest::Approx(exact).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(gauss_legendre(0), ParameterError);
}

TEST_CASE("Legendre values match the explicit low-degree polynomials") {
    for (double x : {-1.0, -0.3, 0.0, 0.45, 1.0}) {
        const auto p = legendre_values(4, x);
        CHECK(p[0] == doctest::Approx(1.0));
        CHECK(p[1] == doctest::Approx(x));
        CHECK(p[2] == doctest::Approx(0.5 * (3 * x * x - 1)));
        CHECK(p[3] == doctest::Approx(0.5 * (5 * x * x * x - 3 * x)));
        CHECK(p[4] == doctest::Approx((35 * std::pow(x, 4) - 30 * x * x + 3) / 8));
    }
}

TEST_CASE("radial grids integrate Gaussian cores and algebraic tails") {
    const auto g = RadialGrid::make(1e6, 1024, RadialScheme::log_uniform);
    std::vector<double> gauss(g.size()), tail(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.nodes()[i];
        gauss[i] = std::exp(-r * r);
        tail[i] = oracle::h_density(r, 1.0);
    }
    CHECK(g.integrate(gauss) == doctest::Approx(pi).epsilon(1e-13));
    CHECK(g.integrate(tail) == doctest::Approx(1e12 / (1.0 + 1e12)).epsilon(1e-13));

    const auto c = g.cumulative(gauss);
    for (std::size_t i = 0; i < g.size(); i += 97) {
        const double r = g.nodes()[i];
        CHECK(c[i] == doctest::Approx(pi * -std::expm1(-r * r)).epsilon(1e-10));
    }
    for (double r : {1e-3, 0.37, 1.0, 2.5, 40.0}) {
        CHECK(g.cumulative_at(gauss, r) == doctest::Approx(pi * -std::expm1(-r * r)).epsilon(1e-10));
        CHECK(g.interpolate(gauss, r) == doctest::Approx(std::exp(-r * r)).epsilon(1e-9));
    }

    const auto u = RadialGrid::make(3.0, 256, RadialScheme::uniform);
    std::vector<double> poly(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) poly[i] = u.nodes()[i] * u.nodes()[i];
    CHECK(u.integrate(poly) == doctest::Approx(pi * std::pow(3.0, 4) / 2.0).epsilon(1e-13));
    CHECK(u.interpolate(poly, 1.234) == doctest::Approx(1.234 * 1.234).epsilon(1e-12));

    CHECK_THROWS_AS(RadialGrid::make(-1.0, 256, RadialScheme::uniform), DomainError);
    CHECK_THROWS_AS(RadialGrid::make(1.0, 4, RadialScheme::uniform), ParameterError);
    CHECK_THROWS_AS(g.integrate(std::vector<double>(3, 0.0)), DimensionError);
}

TEST_CASE("Cartesian grid integrates a Gaussian") {
    const auto g = CartesianGrid::make(10.0, 200);
    std::vector<double> v(g.size());
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j) v[g.index(i, j)] = std::exp(-(g.coord(i) * g.coord(i) + g.coord(j) * g.coord(j)));
    CHECK(g.integrate(v) == doctest::Approx(pi).epsilon(1e-12));
    CHECK(g.spacing() == doctest::Approx(0.1));
    CHECK_THROWS_AS(CartesianGrid::make(0.0, 64), DomainError);
}

TEST_CASE("sphere and circle grids are normalized and exact on low moments") {
    const auto g = SphereGrid::for_degree(16);
    std::vector<double> one(g.size(), 1.0), z2(g.size()), xy2(g.size());
    for (int j = 0; j < g.rings(); ++j)
        for (int k = 0; k < g.azimuths(); ++k) {
            double w[3];
            g.point(j, k, w);
            const auto idx = static_cast<std::size_t>(j) * g.azimuths() + k;
            z2[idx] = w[2] * w[2];
            xy2[idx] = w[0] * w[0] * w[1] * w[1];
            CHECK(w[0] * w[0] + w[1] * w[1] + w[2] * w[2] == doctest::Approx(1.0));
        }
    CHECK(g.integrate(one) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.integrate(z2) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(g.integrate(xy2) == doctest::Approx(1.0 / 15.0).epsilon(1e-14));

    const auto c = CircleGrid::make(64);
    std::vector<double> cos2(c.size());
    for (int m = 0; m < 64; ++m) cos2[m] = std::cos(c.theta(m)) * std::cos(c.theta(m));
    CHECK(c.integrate(cos2) == doctest::Approx(0.5).epsilon(1e-14));
}
