#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "lhls/errors.hpp"
#include "lhls/flows.hpp"
#include "oracles.hpp"

using namespace lhls;
using std::numbers::pi;

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

// H(1 ‖ 1 + a z) = -½∫ log(1 + a z) dz
double linear_entropy(double a) {
    return 1.0 - ((1 + a) * std::log1p(a) - (1 - a) * std::log1p(-a)) / (2 * a);
}

double h8pi(double r, double s) { return kCriticalMass * oracle::h_density(r, s); }

}  // namespace

TEST_CASE("heat entropy of a linear profile") {
    for (double a : {0.1, 0.5, 0.9}) {
        const HeatState st{{1.0, a}, 0.0};
        CHECK(heat_entropy(st) == doctest::Approx(linear_entropy(a)).epsilon(1e-12));
        const auto later = heat_evolve(st, 0.5);
        CHECK(later.a[1] == doctest::Approx(a * std::exp(-1.0)));
        CHECK(heat_entropy(later) == doctest::Approx(linear_entropy(a * std::exp(-1.0))).epsilon(1e-12));
        CHECK(heat_evolve(later, -0.5).a[1] == doctest::Approx(a).epsilon(1e-14));
    }
    CHECK(linear_entropy(0.5) == doctest::Approx(0.0452287).epsilon(1e-6));
    CHECK(heat_entropy(heat_evolve(HeatState{{1.0, 0.5}, 0.0}, 0.5)) == doctest::Approx(0.0056971).epsilon(1e-5));
}

TEST_CASE("heat dissipation against Simpson") {
    // ρ = 1 + 0.4 P1 + 0.3 P2, ∫|∇ log ρ|² dσ = ½∫(1 - z²)(ρ'/ρ)² dz
    const HeatState st{{1.0, 0.4, 0.3}, 0.0};
    auto rho = [](double z) { return 1 + 0.4 * z + 0.3 * 0.5 * (3 * z * z - 1); };
    auto drho = [](double z) { return 0.4 + 0.9 * z; };
    const double oracle_value = 0.5 * oracle::simpson([&](double z) {
        const double q = drho(z) / rho(z);
        return (1 - z * z) * q * q;
    }, -1.0, 1.0, 20000);
    CHECK(heat_dissipation(st) == doctest::Approx(oracle_value).epsilon(1e-10));
    CHECK(st.density(0.3) == doctest::Approx(rho(0.3)));

    const auto c = dissipation_check(st, 1e-4);
    CHECK(c.pass);
    CHECK(c.rhs == doctest::Approx(-oracle_value).epsilon(1e-10));
    CHECK(std::abs(c.lhs - c.rhs) < 1e-6);
}

TEST_CASE("heat decay bound") {
    const HeatState st{{1.0, 0.6, -0.2, 0.1}, 0.0};
    const auto r = decay_check(st, {0.0, 0.1, 0.5, 1.0, 3.0});
    CHECK(r.all_pass());
    REQUIRE(r.entries.size() == 5);
    for (const auto& e : r.entries) CHECK(e.bound == doctest::Approx(std::exp(-4 * e.t) * r.initial_entropy));
    CHECK(to_json(r).dump().find("entries") != std::string::npos);
}

TEST_CASE("heat input checks") {
    CHECK_THROWS_AS(heat_state_from_function([](double z) { return 1.2 + z; }, 8), NormalizationError);
    const auto st = heat_state_from_function([](double z) { return 1 + 0.5 * z * z * z; }, 8);
    CHECK(st.a[3] == doctest::Approx(0.5 * 2.0 / 5.0));
    CHECK(st.a[1] == doctest::Approx(0.5 * 3.0 / 5.0));
    CHECK_THROWS_AS(heat_entropy(HeatState{{1.0, 1.5}, 0.0}), DomainError);
}

TEST_CASE("KS initial state checks the mass") {
    CHECK_THROWS_AS(ks_initial_state([](double r) { return oracle::h_density(r, 1.0); }), DomainError);
    const auto st = ks_initial_state([](double r) { return h8pi(r, 1.0); });
    // the mesh holds the mass inside r_max = 1e5
    CHECK(st.M.back() == doctest::Approx(kCriticalMass * 1e10 / (1 + 1e10)).epsilon(1e-14));
    CHECK_THROWS_AS(ks_initial_state([](double r) { return h8pi(r, 2.0); }), DomainError);
    CHECK(st.s.size() == 1024);
    // M(r) = 8π r²/(1 + r²)
    for (std::size_t i = 0; i < st.s.size(); i += 97) {
        const double r2 = std::exp(2 * st.s[i]);
        CHECK(st.M[i] == doctest::Approx(kCriticalMass * r2 / (1 + r2)).epsilon(1e-10));
    }
}

TEST_CASE("KS free energy and distance") {
    const auto opt = ks_initial_state([](double r) { return h8pi(r, 0.5); });
    CHECK(std::abs(ks_free_energy(opt)) < 1e-8);
    const auto [d0, s0] = ks_distance(opt);
    CHECK(d0 < 1e-6);
    CHECK(s0 == doctest::Approx(0.5).epsilon(1e-5));

    const auto g = ks_initial_state([](double r) { return 4.0 * std::exp(-r * r / 2); });
    CHECK(ks_free_energy(g) == doctest::Approx(std::log(2.0) - kEulerGamma).epsilon(1e-6));
    const auto [d, s] = ks_distance(g);
    CHECK(d == doctest::Approx(kCriticalMass * 0.35953697).epsilon(1e-5));

    // h_1 and h_{1/2} cross at r² = ½ where M_1 = 1/3 and M_{1/2} = 2/3
    const auto h1 = ks_initial_state([](double r) { return h8pi(r, 1.0); });
    // cellwise sum: a crossing inside a cell costs O(Δs²)
    CHECK(ks_L1(h1, opt) == doctest::Approx(kCriticalMass * 2.0 / 3.0).epsilon(2e-4));
    CHECK(ks_L1(h1, h1) == 0.0);
}

TEST_CASE("KS flow keeps an optimizer fixed") {
    KSOptions o;
    o.n = 256;
    o.T = 2.0;
    o.samples = 8;
    const auto traj = ks_evolve(ks_initial_state([](double r) { return h8pi(r, 1.0); }, o), o);
    CHECK(traj.max_drift_L1 < 1e-8);
    CHECK(traj.max_mass_error < 1e-8);   // the tail beyond r_max is 8π·1e-10
    CHECK(traj.energy_monotone);
}

TEST_CASE("KS flow from a Gaussian") {
    KSOptions o;
    o.n = 256;
    o.T = 5.0;
    o.samples = 12;
    const auto traj = ks_evolve(ks_initial_state([](double r) { return 4.0 * std::exp(-r * r / 2); }, o), o);
    REQUIRE(traj.samples.size() == 13);
    CHECK(traj.samples.front().t == 0.0);
    CHECK(traj.samples.back().t == doctest::Approx(5.0));
    CHECK(traj.energy_monotone);
    CHECK(traj.bound_holds);
    CHECK(traj.min_mass_increment >= -1e-13 * kCriticalMass);
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        CHECK(traj.samples[i].t > traj.samples[i - 1].t);
        CHECK(traj.samples[i].free_energy <= traj.samples[i - 1].free_energy + 1e-10);
        CHECK(traj.samples[i].dissipation >= 0.0);
    }

    std::ostringstream csv;
    write_csv(csv, traj);
    CHECK(csv.str().rfind("t,free_energy,distance_L1,dissipation,mass_error\n", 0) == 0);
    std::size_t lines = 0;
    for (char ch : csv.str()) lines += ch == '\n';
    CHECK(lines == 14);
    const auto j = to_json(traj, o);
    CHECK(j.contains("samples"));
}

TEST_CASE("rate fit") {
    FlowTrajectory traj;
    const double T = 10.0;
    for (int k = 0; k <= 30; ++k) {
        const double t = T * std::pow(10.0, -3.0 + 0.1 * k);
        KSSample s;
        s.t = t;
        s.free_energy = 0.2 / t;
        s.distance = 3.0 / std::sqrt(t);
        traj.samples.push_back(s);
    }
    const auto fit = ks_rate_fit(traj);
    CHECK(fit.defined);
    CHECK(fit.entropy_exponent == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(fit.distance_exponent == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(fit.entropy_consistent);
    CHECK(fit.distance_consistent);
    CHECK(fit.window_end == doctest::Approx(T));
    CHECK(to_json(fit).contains("entropy_exponent"));

    // growth breaks the consistency flags
    for (auto& s : traj.samples) s.free_energy = 0.2 * s.t;
    CHECK_FALSE(ks_rate_fit(traj).entropy_consistent);

    FlowTrajectory short_run;
    for (double t : {1.0, 2.0, 4.0}) short_run.samples.push_back({t, 0.1 / t, 1.0 / t});
    CHECK_THROWS_AS(ks_rate_fit(short_run), ParameterError);
}

TEST_CASE("KS refinement changes sampled free energies little") {
    auto run = [](int n, double cap) {
        KSOptions o;
        o.n = n;
        o.T = 5.0;
        o.samples = 10;
        o.max_change = cap;
        return ks_evolve(ks_initial_state([](double r) { return 4.0 * std::exp(-r * r / 2); }, o), o);
    };
    const auto coarse = run(256, 4e-3), fine = run(512, 2e-3);
    REQUIRE(coarse.samples.size() == fine.samples.size());
    for (std::size_t i = 0; i < coarse.samples.size(); ++i) {
        CHECK(coarse.samples[i].t == doctest::Approx(fine.samples[i].t).epsilon(1e-12));
        CHECK(coarse.samples[i].free_energy == doctest::Approx(fine.samples[i].free_energy).epsilon(1e-3));
    }
}
