#include "lhls/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "lhls/entropy.hpp"
#include "lhls/errors.hpp"

namespace lhls {

namespace {

constexpr double kPi = std::numbers::pi;

StabilityCertificate finish(std::string inequality, double value, double constant, double distance,
                            const CertificateOptions& opt) {
    StabilityCertificate c;
    c.inequality = std::move(inequality);
    c.value = value;
    c.constant = constant;
    c.distance = distance;
    c.gap = value - constant * distance * distance;
    c.tol = opt.abs_tol + opt.rel_tol * std::abs(value);
    c.pass = c.gap >= -c.tol;
    return c;
}

nlohmann::json search_json(const SearchInfo& info) {
    return {{"evaluations", info.evaluations},
            {"starts", info.starts},
            {"boundary_warning", info.boundary_warning},
            {"note", info.note}};
}

nlohmann::json params_json(const SphereOptimizerParams& p) { return {{"t", p.t}, {"n", {p.n[0], p.n[1], p.n[2]}}}; }

std::string grid_label(const SphereGrid& g) {
    return "sphere " + std::to_string(g.rings()) + "x" + std::to_string(g.azimuths());
}

// Fibonacci directions on S^2.
std::vector<Vec3> fibonacci_directions(int n) {
    std::vector<Vec3> out(n);
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        out[i] = {r * std::cos(golden * i), r * std::sin(golden * i), z};
    }
    return out;
}

// Dense sweep over (t, n) for oracle cross-checks.
std::pair<double, SphereOptimizerParams> sphere_oracle(const std::function<double(const SphereOptimizerParams&)>& f,
                                                       bool zonal, double t_max) {
    double best = std::numeric_limits<double>::infinity();
    SphereOptimizerParams arg;
    if (zonal) {
        for (int i = -2000; i <= 2000; ++i) {
            const double t = t_max * i / 2000.0;
            SphereOptimizerParams p{std::abs(t), {0.0, 0.0, t >= 0.0 ? 1.0 : -1.0}};
            const double v = f(p);
            if (v < best) best = v, arg = p;
        }
        return {best, arg};
    }
    const auto dirs = fibonacci_directions(400);
    for (int i = 0; i <= 50; ++i) {
        const double t = t_max * i / 50.0;
        for (const auto& n : dirs) {
            SphereOptimizerParams p{t, n};
            const double v = f(p);
            if (v < best) best = v, arg = p;
            if (i == 0) break;
        }
    }
    return {best, arg};
}

void attach_oracle(StabilityCertificate& c, double oracle_distance, const nlohmann::json& where) {
    c.search["oracle_distance"] = oracle_distance;
    c.search["oracle_at"] = where;
    c.search["oracle_agrees"] = c.distance <= oracle_distance + 1e-4;
}

}  // namespace

nlohmann::json to_json(const StabilityCertificate& c) {
    return {{"inequality", c.inequality}, {"value", c.value}, {"constant", c.constant}, {"distance", c.distance},
            {"gap", c.gap},               {"tol", c.tol},     {"pass", c.pass},         {"grid", c.grid},
            {"search", c.search}};
}

StabilityCertificate planar_stability_certificate(const RadialDensity& rho, const CertificateOptions& opt) {
    const double value = planar_free_energy(rho);
    const auto near = nearest_planar_L1(rho);
    auto c = finish("planar log-HLS: H(rho) >= 1/8 inf ||rho - g||_1^2", value, 0.125, near.distance, opt);
    c.grid = "radial n=" + std::to_string(rho.grid->size()) + " r_max=" + std::to_string(rho.grid->r_max());
    c.search = search_json(near.info);
    c.search["s"] = near.params.s;
    c.search["x0"] = {0.0, 0.0};
    if (opt.oracle) {
        double best = std::numeric_limits<double>::infinity(), arg = 1.0;
        for (int i = 0; i < 10000; ++i) {
            const double s = std::exp(-kLogScaleBox + 2.0 * kLogScaleBox * i / 9999.0);
            const double d = planar_L1_to_optimizer(rho, s);
            if (d < best) best = d, arg = s;
        }
        attach_oracle(c, best, {{"s", arg}});
    }
    return c;
}

StabilityCertificate planar_stability_certificate(const PlanarDensity& rho, const CertificateOptions& opt) {
    const double value = planar_free_energy(rho);
    const auto near = nearest_planar_L1(rho);
    auto c = finish("planar log-HLS: H(rho) >= 1/8 inf ||rho - g||_1^2", value, 0.125, near.distance, opt);
    c.grid = "cartesian " + std::to_string(rho.grid->n()) + "^2 L=" + std::to_string(rho.grid->half_width());
    c.search = search_json(near.info);
    c.search["s"] = near.params.s;
    c.search["x0"] = {near.params.x0[0], near.params.x0[1]};
    if (opt.oracle) {
        // local 3D lattice around the search result
        double best = std::numeric_limits<double>::infinity();
        PlanarOptimizerParams arg = near.params;
        const double ls0 = std::log(near.params.s);
        const double c1 = near.params.s * near.params.x0[0], c2 = near.params.s * near.params.x0[1];
        for (int i = -6; i <= 6; ++i)
            for (int j = -6; j <= 6; ++j)
                for (int k = -6; k <= 6; ++k) {
                    const double s = std::exp(ls0 + 0.02 * i);
                    PlanarOptimizerParams p{s, {(c1 + 0.02 * s * j) / s, (c2 + 0.02 * s * k) / s}};
                    const double d = planar_L1_to_optimizer(rho, p);
                    if (d < best) best = d, arg = p;
                }
        attach_oracle(c, best, {{"s", arg.s}, {"x0", {arg.x0[0], arg.x0[1]}}});
    }
    return c;
}

StabilityCertificate spherical_stability_certificate(const SphereField& f, const CertificateOptions& opt) {
    const double value = spherical_free_energy(f);
    SphereField rho = f;
    for (double& v : rho.values) v += 1.0;
    const auto near = nearest_sphere_L1(rho);
    auto c = finish("spherical log-HLS: H_S(f) >= 1/8 inf ||(f+1) - e^v||_1^2", value, 0.125, near.value, opt);
    c.grid = grid_label(*f.grid);
    c.search = search_json(near.info);
    c.search["optimizer"] = params_json(near.params);
    if (opt.oracle) {
        const auto [best, arg] = sphere_oracle([&](const SphereOptimizerParams& p) { return sphere_L1_to_optimizer(rho, p); },
                                               f.grid->azimuths() < 3, std::max(3.0, 2.0 * near.params.t + 1.0));
        attach_oracle(c, best, params_json(arg));
    }
    return c;
}

OnofriCertificates onofri_stability_certificates(const SphereField& u, const CertificateOptions& opt) {
    if (std::abs(u.exp_integral() - 1.0) > 1e-8)
        throw NormalizationError("stability", "onofri_stability_certificates requires ∫e^u dσ = 1");
    OnofriCertificates out{{}, {}, {}, recenter(u)};
    const double value = onofri_functional(u);
    const bool zonal = u.grid->azimuths() < 3;

    // U_τ ≈ 0 means u ≈ the member obtained by pushing 0 with τ^{-1}; its
    // parameters are (t, -n) for the boost part (t, n) of τ.
    auto bp = out.recentered.map.boost_part();
    const SphereOptimizerParams start{bp.t, {-bp.n[0], -bp.n[1], -bp.n[2]}};
    const std::vector<SphereOptimizerParams> extra{start};
    const double t_oracle = std::max(3.0, 2.0 * start.t + 1.0);

    {
        const auto near = nearest_sphere_gradient(u, extra);
        auto& c = out.gradient = finish("Onofri: J(u) >= 1/8 inf int |grad(u - v)|^2", value, 0.125,
                                        std::sqrt(std::max(near.value, 0.0)), opt);
        c.search = search_json(near.info);
        c.search["optimizer"] = params_json(near.params);
        c.search["squared_distance"] = near.value;
        if (opt.oracle) {
            const auto [best, arg] = sphere_oracle(
                [&](const SphereOptimizerParams& p) { return sphere_gradient_to_optimizer(u, p); }, zonal, t_oracle);
            attach_oracle(c, std::sqrt(std::max(best, 0.0)), params_json(arg));
        }
    }
    {
        const auto near = nearest_sphere_reverse_entropy(u, extra);
        auto& c = out.entropy = finish("Onofri: J(u) >= 1/2 inf H(e^v | e^u)", value, 0.5,
                                       std::sqrt(std::max(near.value, 0.0)), opt);
        c.search = search_json(near.info);
        c.search["optimizer"] = params_json(near.params);
        c.search["relative_entropy"] = near.value;
        if (opt.oracle) {
            const auto [best, arg] = sphere_oracle(
                [&](const SphereOptimizerParams& p) { return sphere_reverse_entropy_to_optimizer(u, p); }, zonal,
                t_oracle);
            attach_oracle(c, std::sqrt(std::max(best, 0.0)), params_json(arg));
        }
    }
    {
        SphereField e = u;
        for (double& v : e.values) v = std::exp(v);
        const auto near = nearest_sphere_L1(e, extra);
        auto& c = out.l1 = finish("Onofri: J(u) >= 1/4 inf ||e^u - e^v||_1^2", value, 0.25, near.value, opt);
        c.search = search_json(near.info);
        c.search["optimizer"] = params_json(near.params);
        if (opt.oracle) {
            const auto [best, arg] = sphere_oracle(
                [&](const SphereOptimizerParams& p) { return sphere_L1_to_optimizer(e, p); }, zonal, t_oracle);
            attach_oracle(c, best, params_json(arg));
        }
    }
    for (auto* c : {&out.gradient, &out.entropy, &out.l1}) {
        c->grid = grid_label(*u.grid);
        c->search["recenter_iterations"] = out.recentered.iterations;
        c->search["recenter_start"] = params_json(start);
    }
    return out;
}

double constrained_onofri_gap(const SphereField& u) {
    const auto b = sphere_barycenter(u);
    if (std::sqrt(dot(b, b)) > 1e-8)
        throw DomainError("stability", "constrained_onofri_gap requires vanishing barycentre of e^u (recenter first)");
    return 0.125 * dirichlet_energy(u) - log_partition(u.values, u.grid->weights()) + u.integral();
}

StabilityCertificate circle_stability_certificate(const CircleField& u, const CertificateOptions& opt) {
    const double value = lebedev_milin_functional(u);
    const auto near = nearest_circle_L1(u);
    auto c = finish("Lebedev-Milin: LM(u) >= 1/4 inf ||e^u - e^v||_1^2", value, 0.25, near.distance, opt);
    const int n = std::max(1024, 8 * u.bandwidth());
    c.grid = "circle n=" + std::to_string(n);
    c.search = search_json(near.info);
    c.search["r"] = near.params.r;
    c.search["alpha"] = near.params.alpha;
    if (opt.oracle) {
        const auto grid = CircleGrid::make(n);
        auto e = u.sample(n);
        for (double& v : e) v = std::exp(v);
        double best = std::numeric_limits<double>::infinity();
        CircleOptimizerParams arg;
        std::vector<double> d(n);
        for (int i = 0; i < 400; ++i) {
            const double r = std::tanh(4.0 * i / 399.0);
            for (int k = 0; k < (i == 0 ? 1 : 512); ++k) {
                CircleOptimizerParams p{r, 2.0 * kPi * k / 512.0};
                for (int j = 0; j < n; ++j) d[j] = std::abs(e[j] - circle_optimizer_density(p, grid.theta(j)));
                const double v = grid.integrate(d);
                if (v < best) best = v, arg = p;
            }
        }
        attach_oracle(c, best, {{"r", arg.r}, {"alpha", arg.alpha}});
    }
    return c;
}

TransferChain transfer_chain(const SphereField& f, double tol) {
    if (std::abs(f.integral()) > 1e-8) throw DomainError("stability", "transfer_chain requires ∫f dσ = 0");
    for (double v : f.values)
        if (!(v + 1.0 > 0.0)) throw DomainError("stability", "transfer_chain requires f + 1 > 0");
    const auto& g = *f.grid;

    // u = 2Gf maximizes ⟨u, f⟩ - 𝓕(u), so 𝓕*(f) = ⟨u, f⟩ - 𝓕(u) exactly.
    SphereField u = sphere_green_apply(f);
    for (double& v : u.values) v *= 2.0;
    const double shift = log_partition(u.values, g.weights());
    for (double& v : u.values) v -= shift;

    std::vector<double> uf(g.size()), ef(g.size());
    SphereField eu = u;
    for (std::size_t i = 0; i < g.size(); ++i) {
        uf[i] = u.values[i] * f.values[i];
        ef[i] = (f.values[i] + 1.0) * std::log(f.values[i] + 1.0);
        eu.values[i] = std::exp(u.values[i]);
    }
    const double pairing = g.integrate(uf);
    const double E = -u.integral();   // log∫e^u = 0
    const double E_star = g.integrate(ef);
    const double F = 0.25 * dirichlet_energy(u);
    const double F_star = pairing - F;

    const auto near = nearest_sphere_L1(eu);
    const double a = near.value;
    SphereField rho = f;
    for (double& v : rho.values) v += 1.0;
    std::vector<double> diff(g.size()), diff0(g.size());
    for (int j = 0; j < g.rings(); ++j)
        for (int k = 0; k < g.azimuths(); ++k) {
            Vec3 w;
            g.point(j, k, w.data());
            const auto i = static_cast<std::size_t>(j) * g.azimuths() + k;
            diff[i] = std::abs(rho.values[i] - eu.values[i]);
            diff0[i] = std::abs(rho.values[i] - std::exp(sphere_optimizer_value(near.params, w)));
        }
    const double b = g.integrate(diff);
    const double c = g.integrate(diff0);

    TransferChain t;
    t.young_lhs = E + E_star - pairing;
    t.young_rhs = 0.5 * b * b;
    t.onofri_lhs = F - E;
    t.onofri_rhs = 0.25 * a * a;
    t.dual_gap = E_star - F_star;
    t.quarter_sum = 0.25 * (a * a + b * b);
    t.eighth_square = 0.125 * (a + b) * (a + b);
    t.final_rhs = 0.125 * c * c;
    t.young_holds = t.young_lhs >= t.young_rhs - tol;
    t.onofri_holds = t.onofri_lhs >= t.onofri_rhs - tol;
    t.sum_holds = t.dual_gap >= t.quarter_sum - tol;
    t.square_holds = t.quarter_sum >= t.eighth_square - tol;
    t.triangle_holds = t.eighth_square >= t.final_rhs - tol;
    return t;
}

// ---------------------------------------------------------------------------
// Finite-dimensional duality demonstrator

namespace {

std::vector<std::vector<double>> lattice(int dim, int per_axis, double box) {
    std::vector<double> axis(per_axis);
    for (int i = 0; i < per_axis; ++i) axis[i] = -box + 2.0 * box * i / (per_axis - 1);
    std::vector<std::vector<double>> pts;
    if (dim == 1) {
        for (double x : axis) pts.push_back({x});
    } else {
        for (double x : axis)
            for (double y : axis) pts.push_back({x, y});
    }
    return pts;
}

double dotv(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

std::vector<double> numeric_gradient(const std::function<double(const std::vector<double>&)>& f,
                                     const std::vector<double>& x) {
    constexpr double h = 1e-6;
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

struct Conjugate {
    std::vector<double> value;
    std::vector<std::size_t> argmax;
};

// Exact maximum of ⟨x, y⟩ - f(x) over the primal lattice.
Conjugate brute_conjugate(const std::vector<std::vector<double>>& primal, const std::vector<double>& f,
                          const std::vector<std::vector<double>>& dual) {
    Conjugate c{std::vector<double>(dual.size()), std::vector<std::size_t>(dual.size())};
    for (std::size_t j = 0; j < dual.size(); ++j) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t i = 0; i < primal.size(); ++i) {
            const double v = dotv(primal[i], dual[j]) - f[i];
            if (v > best) best = v, arg = i;
        }
        c.value[j] = best;
        c.argmax[j] = arg;
    }
    return c;
}

double conjugate_at(const std::vector<std::vector<double>>& primal, const std::vector<double>& f,
                    const std::vector<double>& y) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < primal.size(); ++i) best = std::max(best, dotv(primal[i], y) - f[i]);
    return best;
}

}  // namespace

DualityReport toy_duality_demo(const ConvexPair& pair) {
    if (pair.dimension != 1 && pair.dimension != 2)
        throw ParameterError("stability", "toy_duality_demo supports dimension 1 or 2");
    if (!pair.E || !pair.F) throw ParameterError("stability", "toy_duality_demo needs both E and F");
    const int np = pair.primal_points > 0 ? pair.primal_points : (pair.dimension == 1 ? 401 : 101);
    const int nd = pair.dual_points > 0 ? pair.dual_points : (pair.dimension == 1 ? 401 : 200);
    const auto primal = lattice(pair.dimension, np, pair.box);
    const auto dual = lattice(pair.dimension, nd, pair.box);

    std::vector<double> e(primal.size()), f(primal.size());
    for (std::size_t i = 0; i < primal.size(); ++i) {
        e[i] = pair.E(primal[i]);
        f[i] = pair.F(primal[i]);
        if (e[i] > f[i] + 1e-12 * (1.0 + std::abs(f[i])))
            throw DomainError("stability", "toy_duality_demo: E <= F violated on the primal sweep");
    }

    DualityReport r;
    r.mu = std::min(4.0 * pair.C * pair.lambda, 1.0);
    const auto es = brute_conjugate(primal, e, dual);
    const auto fs = brute_conjugate(primal, f, dual);

    // (i) order reversal
    r.max_order_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < dual.size(); ++j) {
        r.max_order_violation = std::max(r.max_order_violation, fs.value[j] - es.value[j]);
        if (pair.E_star_exact)
            r.max_transform_error = std::max(r.max_transform_error, std::abs(es.value[j] - pair.E_star_exact(dual[j])));
        if (pair.F_star_exact)
            r.max_transform_error = std::max(r.max_transform_error, std::abs(fs.value[j] - pair.F_star_exact(dual[j])));
    }
    r.order_holds = r.max_order_violation <= 1e-12;

    // Equality sets: E0 on the primal lattice, E*0 = ∇𝓔(E0).
    std::vector<std::vector<double>> e0, e0_star;
    for (std::size_t i = 0; i < primal.size(); ++i)
        if (f[i] - e[i] <= 1e-12 * (1.0 + std::abs(f[i]))) {
            e0.push_back(primal[i]);
            e0_star.push_back(numeric_gradient(pair.E, primal[i]));
        }
    if (e0.empty()) throw DomainError("stability", "toy_duality_demo: equality set E0 is empty on the sweep");
    r.primal_equality_points = e0.size();

    // (ii) ∇𝓔 maps E0 into E*0, and ∇𝓔* maps E*0 back into E0.
    for (const auto& y : e0_star) {
        bool inside = true;
        for (double v : y) inside = inside && std::abs(v) <= pair.box;
        if (!inside) continue;
        r.max_equality_set_gap = std::max(r.max_equality_set_gap, conjugate_at(primal, e, y) - conjugate_at(primal, f, y));
    }
    double back_gap = 0.0;
    for (std::size_t j = 0; j < dual.size(); ++j)
        if (es.value[j] - fs.value[j] <= 1e-12) {
            ++r.dual_equality_points;
            const auto k = es.argmax[j];
            back_gap = std::max(back_gap, f[k] - e[k]);
        }
    r.max_equality_set_gap = std::max(r.max_equality_set_gap, back_gap);
    r.equality_sets_match = r.max_equality_set_gap <= pair.slack;

    // (iii) transferred quadratic stability
    r.min_transfer_margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < dual.size(); ++j) {
        double d2 = std::numeric_limits<double>::infinity();
        for (const auto& y0 : e0_star) d2 = std::min(d2, dist2(dual[j], y0));
        const double margin = es.value[j] - fs.value[j] - 0.5 * pair.lambda * r.mu * d2;
        r.min_transfer_margin = std::min(r.min_transfer_margin, margin);
        r.max_transfer_residual = std::max(r.max_transfer_residual, std::abs(margin));
    }
    r.transfer_holds = r.min_transfer_margin >= -pair.slack;

    // (iv) ∇𝓔 is (2λ)^{-1}-Lipschitz when 𝓔* is λ-convex
    std::vector<std::vector<double>> grad(primal.size());
    for (std::size_t i = 0; i < primal.size(); ++i) grad[i] = numeric_gradient(pair.E, primal[i]);
    r.max_lipschitz_excess = -std::numeric_limits<double>::infinity();
    auto lipschitz_pair = [&](std::size_t a, std::size_t b) {
        const double lhs = std::sqrt(dist2(grad[a], grad[b]));
        const double rhs = std::sqrt(dist2(primal[a], primal[b])) / (2.0 * pair.lambda);
        r.max_lipschitz_excess = std::max(r.max_lipschitz_excess, lhs - rhs);
    };
    if (pair.dimension == 1) {
        for (std::size_t a = 0; a < primal.size(); ++a)
            for (std::size_t b = a + 1; b < primal.size(); ++b) lipschitz_pair(a, b);
    } else {
        std::mt19937_64 rng(20240601);
        std::uniform_int_distribution<std::size_t> pick(0, primal.size() - 1);
        for (int k = 0; k < 200000; ++k) lipschitz_pair(pick(rng), pick(rng));
    }
    r.lipschitz_holds = r.max_lipschitz_excess <= 1e-6;

    // Young's inequality and its strong form on all lattice pairs:
    // 𝓔(x) + 𝓔*(y) ≥ ⟨x, y⟩ + λ|y - ∇𝓔(x)|^2.
    r.max_young_violation = -std::numeric_limits<double>::infinity();
    double strong = -std::numeric_limits<double>::infinity();
    std::vector<double> es_ref(dual.size());
    for (std::size_t j = 0; j < dual.size(); ++j) es_ref[j] = pair.E_star_exact ? pair.E_star_exact(dual[j]) : es.value[j];
    for (std::size_t i = 0; i < primal.size(); ++i)
        for (std::size_t j = 0; j < dual.size(); ++j) {
            const double gap = dotv(primal[i], dual[j]) - e[i] - es_ref[j];
            r.max_young_violation = std::max(r.max_young_violation, gap);
            strong = std::max(strong, gap + pair.lambda * dist2(dual[j], grad[i]));
        }
    r.young_holds = r.max_young_violation <= 1e-12 && strong <= pair.slack;
    return r;
}

nlohmann::json to_json(const DualityReport& r) {
    return {{"mu", r.mu},
            {"max_order_violation", r.max_order_violation},
            {"max_transform_error", r.max_transform_error},
            {"min_transfer_margin", r.min_transfer_margin},
            {"max_transfer_residual", r.max_transfer_residual},
            {"max_lipschitz_excess", r.max_lipschitz_excess},
            {"max_young_violation", r.max_young_violation},
            {"max_equality_set_gap", r.max_equality_set_gap},
            {"primal_equality_points", r.primal_equality_points},
            {"dual_equality_points", r.dual_equality_points},
            {"order_holds", r.order_holds},
            {"equality_sets_match", r.equality_sets_match},
            {"transfer_holds", r.transfer_holds},
            {"lipschitz_holds", r.lipschitz_holds},
            {"young_holds", r.young_holds},
            {"pass", r.all()}};
}

ConvexPair quadratic_pair_1d() {
    ConvexPair s;
    s.dimension = 1;
    s.E = [](const std::vector<double>& x) { return x[0] * x[0]; };
    s.F = [](const std::vector<double>& x) { return 2.0 * x[0] * x[0]; };
    s.C = 1.0;
    s.lambda = 0.25;
    s.E_star_exact = [](const std::vector<double>& y) { return 0.25 * y[0] * y[0]; };
    s.F_star_exact = [](const std::vector<double>& y) { return 0.125 * y[0] * y[0]; };
    return s;
}

ConvexPair anisotropic_pair_2d() {
    ConvexPair s;
    s.dimension = 2;
    s.E = [](const std::vector<double>& x) { return x[0] * x[0] + 2.0 * x[1] * x[1]; };
    s.F = [](const std::vector<double>& x) { return 2.0 * x[0] * x[0] + 3.0 * x[1] * x[1]; };
    s.C = 1.0;
    // E* = y1²/4 + y2²/8, so E* - |y|²/8 is convex
    s.lambda = 0.125;
    s.E_star_exact = [](const std::vector<double>& y) { return 0.25 * y[0] * y[0] + 0.125 * y[1] * y[1]; };
    s.F_star_exact = [](const std::vector<double>& y) { return 0.125 * y[0] * y[0] + y[1] * y[1] / 12.0; };
    return s;
}

}  // namespace lhls
