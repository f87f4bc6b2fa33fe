#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lhls/acceptance.hpp"
#include "lhls/errors.hpp"
#include "lhls/flows.hpp"
#include "lhls/functionals.hpp"
#include "lhls/geometry.hpp"
#include "lhls/descriptor.hpp"
#include "lhls/optimizers.hpp"
#include "lhls/stability.hpp"

using namespace lhls;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kComputationFailure = 1, kInvalidInput = 2 };

struct Options {
    std::string config_path;
    int grid_n = 0;          // overrides the grid size relevant to the command
    double rmax = 0.0;
    double tol = 0.0;
    bool oracle = false;
    long seed = -1;
    std::string out;
    bool json_out = false;
};

RunConfig make_config(const Options& o) {
    RunConfig c = o.config_path.empty() ? RunConfig{} : load_run_config(o.config_path);
    if (o.rmax > 0.0) c.radial_rmax = o.rmax;
    if (o.tol > 0.0) c.tol = o.tol;
    if (o.oracle) c.oracle = true;
    if (o.seed >= 0) c.seed = static_cast<unsigned>(o.seed);
    if (!o.out.empty()) c.out_dir = o.out;
    c.validate();
    return c;
}

void emit(const json& j, const Options& o, const std::string& text) {
    if (o.json_out) std::cout << j.dump(2) << '\n';
    else std::cout << text;
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    std::ofstream f(std::filesystem::path(dir) / name);
    if (!f) throw ParameterError("cli", "cannot write " + (std::filesystem::path(dir) / name).string());
    f << content;
}

// Characteristic length and offset of a planar descriptor, for sizing Cartesian boxes.
void planar_extent(const Descriptor& s, double& scale, double& offset) {
    if (s.kind == "mixture") {
        for (const auto& [w, c] : s.components) planar_extent(c, scale, offset);
        return;
    }
    if (s.kind == "gaussian") {
        scale = std::max(scale, s.param("sigma"));
        offset = std::max({offset, std::abs(s.param("x1")), std::abs(s.param("x2"))});
    } else if (s.kind == "optimizer") {
        const double sc = s.param("s");
        scale = std::max(scale, sc);
        offset = std::max({offset, sc * std::abs(s.param("x1")), sc * std::abs(s.param("x2"))});
    } else {
        scale = std::max(scale, s.param("s"));
    }
}

std::shared_ptr<const CartesianGrid> cartesian_for(const Descriptor& s, int n) {
    double scale = 0.0, offset = 0.0;
    planar_extent(s, scale, offset);
    return std::make_shared<const CartesianGrid>(CartesianGrid::make(80.0 * scale + offset, n));
}

json grid_meta(const RunConfig& c, bool radial) {
    if (radial) return {{"type", "radial"}, {"n", c.radial_n}, {"r_max", c.radial_rmax}, {"scheme", "log_uniform"}};
    return {{"type", "cartesian"}, {"n", c.cartesian_n}};
}

std::string line(const char* key, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-22s %.10g\n", key, v);
    return buf;
}

int cmd_eval(const std::string& text, const Options& o) {
    RunConfig c = make_config(o);
    Descriptor desc = parse_descriptor(text);
    desc.critical_mass = false;   // functionals act on the unit-mass profile
    json j{{"input", text}, {"seed", c.seed}};
    std::string out = "input                  " + text + "\n";
    if (desc.domain() == DescriptorDomain::planar) {
        FreeEnergyTerms t;
        double mass;
        if (desc.radial()) {
            if (o.grid_n) c.radial_n = o.grid_n;
            const auto rho = build_radial(desc, std::make_shared<const RadialGrid>(RadialGrid::make(
                                                    c.radial_rmax, c.radial_n, RadialScheme::log_uniform)));
            mass = rho.mass();
            t = planar_free_energy_terms(rho);
        } else {
            if (o.grid_n) c.cartesian_n = o.grid_n;
            const auto rho = build_planar(desc, cartesian_for(desc, c.cartesian_n));
            mass = rho.mass();
            t = planar_free_energy_terms(normalized(rho));
        }
        j.update({{"domain", "planar"}, {"grid", grid_meta(c, desc.radial())}, {"grid_mass", mass},
                  {"entropy", t.entropy}, {"interaction", t.interaction}, {"free_energy", t.value}});
        out += line("grid_mass", mass) + line("entropy", t.entropy) + line("interaction", t.interaction) +
               line("free_energy", t.value);
    } else if (desc.domain() == DescriptorDomain::sphere) {
        if (o.grid_n) c.sphere_lmax = o.grid_n;
        const auto u = build_sphere_field(desc, make_sphere_grid(c.sphere_lmax));
        SphereField f = u;
        for (double& v : f.values) v = std::exp(v) - 1.0;
        const auto t = spherical_free_energy_terms(f);
        const double J = onofri_functional(u), D = dirichlet_energy(u), mean = u.integral();
        j.update({{"domain", "sphere"}, {"grid", {{"type", "sphere"}, {"lmax", c.sphere_lmax}}},
                  {"onofri", J}, {"dirichlet", D}, {"mean", mean},
                  {"free_energy_of_density", {{"entropy", t.entropy}, {"interaction", t.interaction}, {"value", t.value}}}});
        out += line("onofri", J) + line("dirichlet", D) + line("mean", mean) + line("free_energy(e^u-1)", t.value);
    } else {
        const auto u = build_circle_field(desc);
        const double lm = lebedev_milin_functional(u), e = half_laplacian_energy(u);
        j.update({{"domain", "circle"}, {"bandwidth", u.bandwidth()}, {"lebedev_milin", lm},
                  {"half_laplacian_energy", e}, {"mean", u.mean()}});
        out += line("lebedev_milin", lm) + line("half_laplacian_energy", e) + line("mean", u.mean());
    }
    emit(j, o, out);
    return kPass;
}

std::string certificate_text(const StabilityCertificate& s) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "[%s] %s: value %.6e >= %g * %.6e^2 (gap %.3e, tol %.1e)\n", s.pass ? "PASS" : "FAIL",
                  s.inequality.c_str(), s.value, s.constant, s.distance, s.gap, s.tol);
    return buf;
}

int cmd_stability(const std::string& text, const Options& o) {
    RunConfig c = make_config(o);
    Descriptor desc = parse_descriptor(text);
    desc.critical_mass = false;
    const CertificateOptions opt{c.tol, 1e-4, c.oracle};
    StabilityCertificate cert;
    if (desc.domain() == DescriptorDomain::planar) {
        if (desc.radial()) {
            if (o.grid_n) c.radial_n = o.grid_n;
            cert = planar_stability_certificate(build_radial(desc, std::make_shared<const RadialGrid>(RadialGrid::make(
                                                                          c.radial_rmax, c.radial_n, RadialScheme::log_uniform))),
                                                opt);
        } else {
            if (o.grid_n) c.cartesian_n = o.grid_n;
            cert = planar_stability_certificate(normalized(build_planar(desc, cartesian_for(desc, c.cartesian_n))), opt);
        }
    } else if (desc.domain() == DescriptorDomain::sphere) {
        if (o.grid_n) c.sphere_lmax = o.grid_n;
        auto f = build_sphere_field(desc, make_sphere_grid(c.sphere_lmax));
        for (double& v : f.values) v = std::exp(v) - 1.0;
        cert = spherical_stability_certificate(f, opt);
    } else {
        cert = circle_stability_certificate(build_circle_field(desc), opt);
    }
    auto j = to_json(cert);
    j["input"] = text;
    j["seed"] = c.seed;
    emit(j, o, certificate_text(cert));
    return cert.pass ? kPass : kComputationFailure;
}

int cmd_onofri(const std::string& text, const Options& o) {
    RunConfig c = make_config(o);
    const Descriptor desc = parse_descriptor(text);
    if (desc.domain() != DescriptorDomain::sphere) throw DomainError("cli", "onofri needs a sphere field, got " + desc.kind);
    if (o.grid_n) c.sphere_lmax = o.grid_n;
    const auto u = build_sphere_field(desc, make_sphere_grid(c.sphere_lmax));
    const auto oc = onofri_stability_certificates(u, {c.tol, 1e-4, c.oracle});
    const double constrained = constrained_onofri_gap(oc.recentered.field);
    const bool pass = oc.gradient.pass && oc.entropy.pass && oc.l1.pass;
    json j{{"input", text},
           {"seed", c.seed},
           {"onofri", onofri_functional(u)},
           {"gradient", to_json(oc.gradient)},
           {"entropy", to_json(oc.entropy)},
           {"l1", to_json(oc.l1)},
           {"recenter", {{"barycenter_norm", oc.recentered.barycenter_norm}, {"iterations", oc.recentered.iterations}}},
           {"constrained_gap", constrained},
           {"pass", pass}};
    std::string out = line("onofri", onofri_functional(u)) + certificate_text(oc.gradient) + certificate_text(oc.entropy) +
                      certificate_text(oc.l1) + line("recentered |b|", oc.recentered.barycenter_norm) +
                      line("constrained gap", constrained);
    emit(j, o, out);
    return pass ? kPass : kComputationFailure;
}

int cmd_heat(const std::string& text, const Options& o, double T) {
    const RunConfig c = make_config(o);
    const auto a = parse_legendre_series(text);
    const auto s0 = heat_state_from_function(
        [&](double z) {
            double v = 0.0;
            const auto p = legendre_values(static_cast<int>(a.size()) - 1, z);
            for (std::size_t l = 0; l < a.size(); ++l) v += a[l] * p[l];
            return v;
        },
        static_cast<int>(a.size()) + 8);
    const double h0 = heat_entropy(s0);
    std::string csv = "t,entropy,bound,dissipation\n";
    json rows = json::array();
    constexpr int kSteps = 40;
    for (int k = 0; k <= kSteps; ++k) {
        const double t = T * k / kSteps;
        const auto s = heat_evolve(s0, t);
        const double h = heat_entropy(s), d = heat_dissipation(s), b = std::exp(-4.0 * t) * h0;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g\n", t, h, b, d);
        csv += buf;
        rows.push_back({{"t", t}, {"entropy", h}, {"bound", b}, {"dissipation", d}});
    }
    const auto decay = decay_check(s0, {0.1, 0.25, 0.5, 1.0});
    const auto diss = dissipation_check(s0, 1e-3);
    const bool pass = decay.all_pass() && diss.pass;
    json j{{"input", format_legendre_series(a)}, {"initial_entropy", h0}, {"decay", to_json(decay)},
           {"dissipation", to_json(diss)}, {"trajectory", rows}, {"pass", pass}};
    if (!c.out_dir.empty()) {
        write_file(c.out_dir, "heat_trajectory.csv", csv);
        write_file(c.out_dir, "heat_report.json", j.dump(2) + "\n");
    }
    std::string out = line("initial_entropy", h0);
    for (const auto& e : decay.entries) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "[%s] t = %-5g H = %.6f <= %.6f\n", e.pass ? "PASS" : "FAIL", e.t, e.entropy, e.bound);
        out += buf;
    }
    out += line("dissipation residual", diss.residual);
    emit(j, o, out);
    return pass ? kPass : kComputationFailure;
}

int cmd_ks(const std::string& text, const Options& o, double T) {
    RunConfig c = make_config(o);
    if (o.grid_n) c.ks_n = o.grid_n;
    if (T > 0.0) c.ks_T = T;
    c.validate();
    Descriptor desc = parse_descriptor(text);
    if (!desc.critical_mass) throw DomainError("cli", "Keller-Segel data must carry mass 8pi (prefix the descriptor with 8pi*)");
    if (!desc.radial()) throw DomainError("cli", "Keller-Segel solver is radial; " + text + " is not radial");
    KSOptions opt;
    opt.n = c.ks_n;
    opt.T = c.ks_T;
    const auto f = planar_function(desc);
    const auto traj = ks_evolve(ks_initial_state([&](double r) { return kCriticalMass * f(r, 0.0); }, opt), opt);
    const auto fit = ks_rate_fit(traj);
    const bool stationary = desc.kind == "optimizer";
    bool pass = traj.energy_monotone && traj.bound_holds && traj.max_mass_error <= 1e-6;
    if (stationary) pass = pass && traj.max_drift_L1 <= 1e-4;
    else pass = pass && fit.entropy_consistent && fit.distance_consistent;
    auto j = to_json(traj, opt);
    j["input"] = text;
    j["rate_fit"] = to_json(fit);
    j["stationary_data"] = stationary;
    j["pass"] = pass;
    if (!c.out_dir.empty()) {
        std::ostringstream csv;
        write_csv(csv, traj);
        write_file(c.out_dir, "ks_trajectory.csv", csv.str());
        write_file(c.out_dir, "ks_report.json", j.dump(2) + "\n");
    }
    std::string out = line("steps", double(traj.steps)) + line("max mass error", traj.max_mass_error) +
                      line("max energy increase", traj.max_energy_increase) + line("max L1 drift", traj.max_drift_L1) +
                      line("final free energy", traj.samples.back().free_energy) +
                      line("final distance", traj.samples.back().distance) +
                      line("entropy exponent", fit.entropy_exponent) + line("distance exponent", fit.distance_exponent);
    out += std::string("energy monotone ") + (traj.energy_monotone ? "yes" : "NO") + ", bound " +
           (traj.bound_holds ? "holds" : "FAILS") + ", consistency flags " + (fit.entropy_consistent ? "ok" : "FAIL") +
           "/" + (fit.distance_consistent ? "ok" : "FAIL") + "\n" + (pass ? "PASS\n" : "FAIL\n");
    emit(j, o, out);
    return pass ? kPass : kComputationFailure;
}

int cmd_duality(const std::string& pair, const Options& o) {
    const auto convex = pair == "2d" ? anisotropic_pair_2d() : quadratic_pair_1d();
    const auto rep = toy_duality_demo(convex);
    auto j = to_json(rep);
    j["pair"] = pair;
    std::string out = std::string(rep.all() ? "PASS" : "FAIL") + " duality demonstrator (" + pair + ")\n" +
                      line("transform error", rep.max_transform_error) + line("order violation", rep.max_order_violation) +
                      line("transfer margin", rep.min_transfer_margin) + line("lipschitz excess", rep.max_lipschitz_excess) +
                      line("mu", rep.mu);
    emit(j, o, out);
    return rep.all() ? kPass : kComputationFailure;
}

int cmd_suite(const Options& o, const std::vector<int>& only) {
    RunConfig c = make_config(o);
    if (o.grid_n) c.radial_n = o.grid_n;
    c.validate();
    const auto results = run_acceptance(c, only);
    json rows = json::array();
    std::vector<int> failed;
    for (const auto& r : results) {
        auto j = to_json(r);
        j.erase("seconds");   // keeps the JSON byte-identical across runs
        rows.push_back(j);
        if (!r.pass) failed.push_back(r.id);
        (o.json_out ? std::cerr : std::cout) << format_line(r) << '\n';
    }
    json j{{"config", to_json(c)}, {"criteria", rows}, {"failed", failed}, {"pass", failed.empty()}};
    if (o.json_out) std::cout << j.dump(2) << '\n';
    else {
        std::cout << results.size() - failed.size() << "/" << results.size() << " criteria pass";
        if (!failed.empty()) {
            std::cout << "; failing:";
            for (int id : failed) std::cout << ' ' << id;
        }
        std::cout << '\n';
    }
    if (!c.out_dir.empty()) write_file(c.out_dir, "suite.json", j.dump(2) + "\n");
    return failed.empty() ? kPass : kComputationFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks of logarithmic HLS, Onofri and Lebedev-Milin inequalities"};
    app.fallthrough();
    app.require_subcommand(1);
    Options o;
    app.add_option("--config", o.config_path, "flat key = value run configuration");
    app.add_option("--grid-n", o.grid_n, "grid size for the command (radial nodes, Cartesian cells, sphere degree, KS mesh)")
        ->check(CLI::Range(4, 1 << 20));
    app.add_option("--rmax", o.rmax, "radial grid outer radius")->check(CLI::PositiveNumber);
    app.add_option("--tol", o.tol, "absolute certificate tolerance")->check(CLI::Range(1e-16, 1.0));
    app.add_flag("--oracle", o.oracle, "cross-check nearest-point searches with dense sweeps");
    app.add_option("--seed", o.seed, "base seed of random families")->check(CLI::NonNegativeNumber);
    app.add_option("--out", o.out, "directory for trajectory and report files");
    app.add_flag("--json", o.json_out, "machine-readable output");

    std::string desc, kind, pair = "1d";
    double T = 0.0;
    std::vector<int> only;
    auto* eval = app.add_subcommand("eval", "functional values of a density or field");
    eval->add_option("desc", desc, "input descriptor, e.g. gaussian:sigma=1")->required();
    auto* stab = app.add_subcommand("stability", "stability certificate (planar, sphere or circle by descriptor)");
    stab->add_option("desc", desc, "planar, sphere or circle input descriptor")->required();
    auto* onof = app.add_subcommand("onofri", "the three Onofri stability certificates of a sphere field");
    onof->add_option("desc", desc, "sphere input descriptor, e.g. band-limited-random:seed=1")->required();
    auto* flow = app.add_subcommand("flow", "heat flow on S^2 or radial critical-mass Keller-Segel");
    flow->add_option("kind", kind, "heat or ks")->required()->check(CLI::IsMember({"heat", "ks"}));
    flow->add_option("desc", desc, "Legendre series (heat) or 8pi*<planar descriptor> (ks)")->required();
    flow->add_option("--T", T, "final time")->check(CLI::PositiveNumber);
    auto* heatflow = app.add_subcommand("heatflow", "alias of flow heat");
    heatflow->add_option("desc", desc, "Legendre series, e.g. 1+0.5*P1")->required();
    heatflow->add_option("--T", T, "final time")->check(CLI::PositiveNumber);
    auto* ks = app.add_subcommand("ks", "alias of flow ks");
    ks->add_option("desc", desc, "e.g. 8pi*gaussian:sigma=1")->required();
    ks->add_option("--T", T, "final time")->check(CLI::PositiveNumber);
    auto* dual = app.add_subcommand("duality-demo", "brute-force convex duality stability transfer");
    dual->add_option("--pair", pair, "1d or 2d convex pair (default 1d)")->check(CLI::IsMember({"1d", "2d"}));
    auto* suite = app.add_subcommand("suite", "run the acceptance matrix");
    suite->add_option("--only", only, "criterion ids")->check(CLI::Range(1, kCriterionCount));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kInvalidInput;
    }
    try {
        if (eval->parsed()) return cmd_eval(desc, o);
        if (stab->parsed()) return cmd_stability(desc, o);
        if (onof->parsed()) return cmd_onofri(desc, o);
        if (flow->parsed()) return kind == "heat" ? cmd_heat(desc, o, T > 0 ? T : 2.0) : cmd_ks(desc, o, T);
        if (heatflow->parsed()) return cmd_heat(desc, o, T > 0 ? T : 2.0);
        if (ks->parsed()) return cmd_ks(desc, o, T);
        if (dual->parsed()) return cmd_duality(pair, o);
        if (suite->parsed()) return cmd_suite(o, only);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const NormalizationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kComputationFailure;
    }
    return kInvalidInput;
}
