#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <string>

#include "doctest.h"
#include "lhls/acceptance.hpp"
#include "lhls/errors.hpp"
#include "lhls/descriptor.hpp"
#include "oracles.hpp"

using namespace lhls;
using std::numbers::pi;

namespace {

std::string error_text(const std::string& text) {
    try {
        parse_descriptor(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

std::string write_temp(const std::string& name, const std::string& body) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << body;
    return p.string();
}

}  // namespace

TEST_CASE("parse and format round trip") {
    for (const char* text : {"gaussian", "gaussian:sigma=2.5", "optimizer:s=0.3,x1=1,x2=-2",
                             "perturbed-optimizer:eps=0.2", "perturbed-optimizer:eps=-0.1,mode=3,s=2",
                             "sphere-optimizer:t=1.5,theta=0.3", "band-limited-random:seed=7,L=4",
                             "circle-poisson:r=0.5,alpha=1", "circle-perturbed:r=0.2,eps=0.05,seed=3",
                             "mixture[0.25*gaussian;0.75*optimizer:s=2]", "8pi*gaussian:sigma=0.5"}) {
        CAPTURE(text);
        const auto desc = parse_descriptor(text);
        CHECK(format_descriptor(desc) == text);
    }
    // defaults and key order are normalized
    CHECK(format_descriptor(parse_descriptor("optimizer: x2=0, s=1 ")) == "optimizer");
    CHECK(format_descriptor(parse_descriptor("gaussian:x2=1,sigma=0.1")) == "gaussian:sigma=0.1,x2=1");
}

TEST_CASE("parsed fields") {
    const auto g = parse_descriptor("8pi*gaussian:sigma=2");
    CHECK(g.critical_mass);
    CHECK(g.kind == "gaussian");
    CHECK(g.param("sigma") == 2.0);
    CHECK(g.param("x1") == 0.0);
    CHECK(g.radial());
    CHECK(g.domain() == DescriptorDomain::planar);
    CHECK_FALSE(parse_descriptor("gaussian:x1=1").radial());
    CHECK_THROWS_AS(g.param("t"), ParameterError);

    const auto m = parse_descriptor("mixture[0.5*gaussian;0.5*optimizer:s=3]");
    REQUIRE(m.components.size() == 2);
    CHECK(m.components[1].first == 0.5);
    CHECK(m.components[1].second.param("s") == 3.0);
    CHECK(m.radial());
    CHECK(parse_descriptor("sphere-optimizer").domain() == DescriptorDomain::sphere);
    CHECK(parse_descriptor("circle-poisson").domain() == DescriptorDomain::circle);
}

TEST_CASE("parse errors name the position") {
    CHECK(error_text("gaussian:foo=1").find("unknown key 'foo' for gaussian at position 9") != std::string::npos);
    CHECK(error_text("gausian").find("unknown kind 'gausian' at position 0") != std::string::npos);
    CHECK(error_text("gaussian:sigma=").find("expected a number at position 15") != std::string::npos);
    CHECK(error_text("gaussian:sigma=1,sigma=2").find("duplicate key 'sigma'") != std::string::npos);
    CHECK(error_text("gaussian trailing").find("position") != std::string::npos);
    CHECK(error_text("mixture[0.5*gaussian;0.4*optimizer]").find("sum to 1") != std::string::npos);
    CHECK(error_text("mixture[1*sphere-optimizer]").find("planar") != std::string::npos);
    CHECK(error_text("perturbed-optimizer").find("requires eps") != std::string::npos);
    CHECK(error_text("gaussian:sigma=-1").find("sigma > 0") != std::string::npos);
    CHECK(error_text("circle-poisson:r=1").find("0 <= r < 1") != std::string::npos);
    CHECK(error_text("band-limited-random:seed=1,L=2.5").find("integer") != std::string::npos);
    CHECK(error_text("").find("position 0") != std::string::npos);
}

TEST_CASE("Legendre series") {
    const auto a = parse_legendre_series("1+0.5*P1-0.25*P3");
    REQUIRE(a.size() == 4);
    CHECK(a[0] == 1.0);
    CHECK(a[1] == 0.5);
    CHECK(a[2] == 0.0);
    CHECK(a[3] == -0.25);
    CHECK(format_legendre_series(a) == "1+0.5*P1-0.25*P3");
    CHECK(parse_legendre_series(" 1 + P2 ")[2] == 1.0);
    CHECK_THROWS_AS(parse_legendre_series("0.5+P1"), ParseError);
    CHECK_THROWS_AS(parse_legendre_series("1+0.5*Q1"), ParseError);
    CHECK_THROWS_AS(parse_legendre_series(""), ParseError);
    CHECK_THROWS_AS(parse_legendre_series("1 0.5*P1"), ParseError);
}

TEST_CASE("planar builders have unit mass") {
    const auto grid = std::make_shared<const RadialGrid>(RadialGrid::make(1e6, 2048, RadialScheme::log_uniform));
    for (const char* text : {"gaussian:sigma=0.3", "optimizer:s=4", "perturbed-optimizer:eps=0.4",
                             "perturbed-optimizer:eps=-0.3,mode=5,s=0.5", "mixture[0.3*gaussian;0.7*optimizer:s=2]"}) {
        CAPTURE(text);
        const auto desc = parse_descriptor(text);
        // the analytic density itself integrates to one, before any renormalization
        const auto f = planar_function(desc);
        const double mass = oracle::simpson([&](double t) {
            const double r = std::exp(t);
            return f(r, 0.0) * 2 * pi * r * r;
        }, -25.0, 25.0, 200000);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(build_radial(desc, grid).mass() == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(build_radial(parse_descriptor("gaussian:x1=1"), grid), DomainError);
    CHECK_THROWS_AS(build_radial(parse_descriptor("sphere-optimizer"), grid), DomainError);

    const auto cg = std::make_shared<const CartesianGrid>(CartesianGrid::make(20.0, 128));
    const auto rho = build_planar(parse_descriptor("mixture[0.5*gaussian:x1=2;0.5*gaussian:x1=-2]"), cg);
    CHECK(rho.mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rho.at(2.0, 0.0) == doctest::Approx(rho.at(-2.0, 0.0)).epsilon(1e-9));
}

TEST_CASE("sphere and circle builders") {
    const auto grid = make_sphere_grid(24);
    const auto a = build_sphere_field(parse_descriptor("band-limited-random:seed=5"), grid);
    const auto b = build_sphere_field(parse_descriptor("band-limited-random:seed=5"), grid);
    const auto c = build_sphere_field(parse_descriptor("band-limited-random:seed=6"), grid);
    CHECK(a.exp_integral() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    // band limit L = 6
    const auto coef = analyze(a);
    double high = 0.0;
    for (int l = 7; l <= coef.lmax(); ++l) high += coef.degree_power(l);
    CHECK(high < 1e-24);

    const auto opt = build_sphere_field(parse_descriptor("sphere-optimizer:t=0.5,theta=1,phi=2"), grid);
    CHECK(opt.exp_integral() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(build_sphere_field(parse_descriptor("gaussian"), grid), DomainError);

    const auto u = build_circle_field(parse_descriptor("circle-perturbed:r=0.3,eps=0.1,seed=2"));
    CHECK(std::abs(circle_log_exp_integral(u)) < 1e-12);
    const auto v = build_circle_field(parse_descriptor("circle-perturbed:r=0.3,eps=0.1,seed=2"));
    CHECK(u.coef == v.coef);
    const auto p = build_circle_field(parse_descriptor("circle-poisson:r=0.5,alpha=1"));
    CHECK(p(1.0) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("run configuration files") {
    const auto path = write_temp("lhls_cfg_ok.txt",
                                 "# coarse run\nradial_n = 1024\nks_T=10   # shorter\n\noracle = true\nseed = 9\nout = /tmp/x\n");
    const auto c = load_run_config(path);
    CHECK(c.radial_n == 1024);
    CHECK(c.ks_T == 10.0);
    CHECK(c.oracle);
    CHECK(c.seed == 9u);
    CHECK(c.out_dir == "/tmp/x");
    CHECK(c.cartesian_n == RunConfig{}.cartesian_n);
    const auto j = to_json(c);
    CHECK(j["radial_n"].get<int>() == 1024);

    CHECK_THROWS_AS(load_run_config(write_temp("lhls_cfg_key.txt", "grid = 3\n")), ParseError);
    CHECK_THROWS_AS(load_run_config(write_temp("lhls_cfg_val.txt", "tol = small\n")), ParseError);
    CHECK_THROWS_AS(load_run_config(write_temp("lhls_cfg_line.txt", "tol\n")), ParseError);
    CHECK_THROWS_AS(load_run_config(write_temp("lhls_cfg_range.txt", "radial_n = 8\n")), ParameterError);
    CHECK_THROWS_AS(load_run_config("/nonexistent/lhls.cfg"), ParseError);

    RunConfig bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    CHECK_NOTHROW(RunConfig{}.validate());
}
