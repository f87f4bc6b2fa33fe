#include "lhls/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "lhls/errors.hpp"
#include "lhls/grids.hpp"

namespace lhls {

namespace {

constexpr double kPi = std::numbers::pi;

int heat_quadrature_points(const HeatState& s) { return std::max(128, 4 * static_cast<int>(s.a.size()) + 32); }

double legendre_sum(const std::vector<double>& a, double z) {
    const auto p = legendre_values(static_cast<int>(a.size()) - 1, z);
    double v = 0.0;
    for (std::size_t l = 0; l < a.size(); ++l) v += a[l] * p[l];
    return v;
}

// (1 - z^2) ρ'(z) using (1 - z^2) P_l' = l (P_{l-1} - z P_l).
double weighted_derivative(const std::vector<double>& a, double z) {
    const auto p = legendre_values(static_cast<int>(a.size()) - 1, z);
    double v = 0.0;
    for (std::size_t l = 1; l < a.size(); ++l) v += a[l] * double(l) * (p[l - 1] - z * p[l]);
    return v;
}

}  // namespace

double HeatState::density(double z) const { return legendre_sum(a, z); }

HeatState heat_state_from_function(const std::function<double(double)>& rho, int lmax) {
    if (lmax < 0) throw ParameterError("flows", "heat state degree must be >= 0");
    const auto rule = gauss_legendre(std::max(2 * lmax + 64, 128));
    HeatState s;
    s.a.assign(lmax + 1, 0.0);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const auto p = legendre_values(lmax, rule.nodes[q]);
        const double f = rho(rule.nodes[q]);
        for (int l = 0; l <= lmax; ++l) s.a[l] += 0.5 * (2 * l + 1) * rule.weights[q] * f * p[l];
    }
    if (std::abs(s.a[0] - 1.0) > 1e-10)
        throw NormalizationError("flows", "heat state requires unit mass (a_0 = 1)");
    s.a[0] = 1.0;
    return s;
}

HeatState heat_evolve(const HeatState& s, double t) {
    if (s.a.empty() || std::abs(s.a[0] - 1.0) > 1e-12)
        throw NormalizationError("flows", "heat state requires a_0 = 1");
    HeatState out = s;
    for (std::size_t l = 1; l < out.a.size(); ++l) out.a[l] *= std::exp(-double(l) * (l + 1) * t);
    out.t = s.t + t;
    return out;
}

double heat_entropy(const HeatState& s) {
    const auto rule = gauss_legendre(heat_quadrature_points(s));
    std::vector<double> terms(rule.nodes.size());
    for (std::size_t q = 0; q < terms.size(); ++q) {
        const double r = s.density(rule.nodes[q]);
        if (!(r > 0.0)) throw DomainError("flows", "heat density is not positive; log ρ diagnostics refused");
        terms[q] = -0.5 * rule.weights[q] * std::log(r);
    }
    return pairwise_sum(terms);
}

double heat_dissipation(const HeatState& s) {
    const auto rule = gauss_legendre(heat_quadrature_points(s));
    std::vector<double> terms(rule.nodes.size());
    for (std::size_t q = 0; q < terms.size(); ++q) {
        const double z = rule.nodes[q];
        const double r = s.density(z);
        if (!(r > 0.0)) throw DomainError("flows", "heat density is not positive; log ρ diagnostics refused");
        const double d = weighted_derivative(s.a, z);
        // ½ (1 - z^2)(ρ'/ρ)^2 = ½ [(1 - z^2)ρ']^2 / ((1 - z^2) ρ^2)
        terms[q] = 0.5 * rule.weights[q] * d * d / ((1.0 - z * z) * r * r);
    }
    return pairwise_sum(terms);
}

DissipationCheck dissipation_check(const HeatState& s, double dt) {
    if (!(dt > 0.0)) throw ParameterError("flows", "dissipation_check needs dt > 0");
    DissipationCheck c;
    c.lhs = (heat_entropy(heat_evolve(s, dt)) - heat_entropy(heat_evolve(s, -dt))) / (2.0 * dt);
    c.rhs = -heat_dissipation(s);
    c.residual = std::abs(c.lhs - c.rhs);
    c.tolerance = std::max(1e-4, 10.0 * dt * dt * (1.0 + std::abs(c.rhs)));
    c.pass = c.residual <= c.tolerance;
    return c;
}

bool DecayReport::all_pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const DecayEntry& e) { return e.pass; });
}

DecayReport decay_check(const HeatState& s, const std::vector<double>& times) {
    DecayReport r;
    r.initial_entropy = heat_entropy(s);
    for (double t : times) {
        if (t < 0.0) throw ParameterError("flows", "decay_check times must be >= 0");
        DecayEntry e;
        e.t = t;
        e.entropy = heat_entropy(heat_evolve(s, t));
        e.bound = std::exp(-4.0 * t) * r.initial_entropy;
        e.pass = e.entropy <= e.bound + 1e-8;
        r.entries.push_back(e);
    }
    return r;
}

nlohmann::json to_json(const DissipationCheck& c) {
    return {{"lhs", c.lhs}, {"rhs", c.rhs}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}};
}

nlohmann::json to_json(const DecayReport& r) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"t", e.t}, {"entropy", e.entropy}, {"bound", e.bound}, {"pass", e.pass}});
    return {{"initial_entropy", r.initial_entropy}, {"entries", entries}, {"pass", r.all_pass()}};
}

// ---------------------------------------------------------------------------
// Keller–Segel

namespace {

double mesh_step(const KSState& st) { return st.s[1] - st.s[0]; }

std::vector<double> log_mesh(const KSOptions& opt) {
    if (opt.n < 16) throw ParameterError("flows", "KS mesh needs at least 16 nodes");
    if (!(opt.r_min > 0.0) || !(opt.r_max > opt.r_min))
        throw ParameterError("flows", "KS mesh needs 0 < r_min < r_max");
    std::vector<double> s(opt.n);
    const double a = std::log(opt.r_min), b = std::log(opt.r_max);
    for (int i = 0; i < opt.n; ++i) s[i] = a + (b - a) * i / (opt.n - 1);
    return s;
}

// Thomas algorithm; sub[0] and sup[n-1] are unused.
std::vector<double> solve_tridiagonal(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup,
                                      std::vector<double> rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
    return x;
}

// M_h(r) / 8π for h_s.
double h_cumulative(double r, double s) { return r * r / (s * s + r * r); }

}  // namespace

KSState ks_initial_state(const std::function<double(double)>& rho, const KSOptions& opt) {
    KSState st;
    st.s = log_mesh(opt);
    st.M.assign(st.s.size(), 0.0);
    st.dt = opt.dt0;
    const auto rule = gauss_legendre(16);
    auto shell = [&](double a, double b) {
        double acc = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double r = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[q];
            acc += 0.5 * (b - a) * rule.weights[q] * 2.0 * kPi * r * rho(r);
        }
        return acc;
    };
    double prev_r = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < st.s.size(); ++i) {
        const double r = std::exp(st.s[i]);
        acc += shell(prev_r, r);
        st.M[i] = acc;
        prev_r = r;
    }
    double tail = 0.0;
    for (int k = 0; k < 60; ++k) {
        const double a = opt.r_max * std::pow(10.0, k * 0.05), b = opt.r_max * std::pow(10.0, (k + 1) * 0.05);
        tail += shell(a, b);
    }
    if (std::abs(acc + tail - kCriticalMass) > 1e-6)
        throw DomainError("flows", "Keller–Segel initial data must have mass 8π (got " + std::to_string(acc + tail) + ")");
    if (tail > 1e-8) throw DomainError("flows", "Keller–Segel domain too small: mass beyond r_max exceeds 1e-8");
    for (std::size_t i = 1; i < st.M.size(); ++i)
        if (st.M[i] < st.M[i - 1]) throw DomainError("flows", "Keller–Segel initial density must be nonnegative");
    return st;
}

KSState ks_initial_state(const RadialDensity& rho, const KSOptions& opt) {
    return ks_initial_state([&](double r) { return rho.at(r); }, opt);
}

double ks_free_energy(const KSState& st) {
    // Inner disk with constant density, then the trapezoid rule in s = log r
    // for ∫ m_s [log(m_s / 2πr²) + 4 s m] ds with m = M/8π. The integrand is
    // negligible at both ends, so accuracy is set by the fourth-order m_s.
    const double ds = mesh_step(st);
    const std::size_t n = st.M.size();
    std::vector<double> m(n), terms(n + 1);
    for (std::size_t i = 0; i < n; ++i) m[i] = st.M[i] / kCriticalMass;
    const double r0 = std::exp(st.s[0]);
    terms[0] = (m[0] > 0.0 ? m[0] * std::log(m[0] / (kPi * r0 * r0)) : 0.0) + 2.0 * m[0] * m[0] * (std::log(r0) - 0.25);
    for (std::size_t i = 0; i < n; ++i) {
        double dm;
        if (i >= 2 && i + 2 < n) dm = (m[i - 2] - 8.0 * m[i - 1] + 8.0 * m[i + 1] - m[i + 2]) / (12.0 * ds);
        else if (i == 0) dm = (m[1] - m[0]) / ds;
        else if (i + 1 == n) dm = (m[n - 1] - m[n - 2]) / ds;
        else dm = (m[i + 1] - m[i - 1]) / (2.0 * ds);
        const double w = (i == 0 || i + 1 == n) ? 0.5 * ds : ds;
        const double ent = dm > 0.0 ? dm * std::log(dm / (2.0 * kPi * std::exp(2.0 * st.s[i]))) : 0.0;
        terms[i + 1] = w * (ent + 4.0 * st.s[i] * m[i] * dm);
    }
    return pairwise_sum(terms) + 1.0 + std::log(kPi);
}

double ks_L1(const KSState& a, const KSState& b) {
    if (a.M.size() != b.M.size()) throw DimensionError("flows", "ks_L1 needs states on the same mesh");
    std::vector<double> d(a.M.size() + 1);
    d[0] = std::abs(a.M[0] - b.M[0]);
    for (std::size_t i = 0; i + 1 < a.M.size(); ++i)
        d[i + 1] = std::abs((a.M[i + 1] - a.M[i]) - (b.M[i + 1] - b.M[i]));
    d.back() += std::abs(a.M.back() - b.M.back());
    return pairwise_sum(d);
}

std::pair<double, double> ks_distance(const KSState& st) {
    const std::size_t n = st.M.size();
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = std::exp(st.s[i]);
    std::vector<double> G(n), tv;
    // total variation of G = M - 8π M_h along r; extrema of G are refined by
    // the parabola through three neighbouring nodes (uniform in log r)
    auto dist = [&](double ls) {
        const double s = std::exp(ls);
        for (std::size_t i = 0; i < n; ++i) G[i] = st.M[i] - kCriticalMass * h_cumulative(r[i], s);
        tv.clear();
        double prev = 0.0;
        auto step = [&](double v) { tv.push_back(std::abs(v - prev)); prev = v; };
        step(G[0]);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double dl = G[i] - G[i - 1], dr = G[i + 1] - G[i];
            if ((dl > 0.0 && dr < 0.0) || (dl < 0.0 && dr > 0.0)) {
                const double curv = G[i + 1] - 2.0 * G[i] + G[i - 1];
                step(G[i] - (dr + dl) * (dr + dl) / (8.0 * curv));
            }
        }
        step(G[n - 1]);
        step(st.M[n - 1] - kCriticalMass);
        return pairwise_sum(tv);
    };
    const double lo = st.s.front() + 2.0, hi = st.s.back() - 2.0;
    constexpr int kScan = 200;
    int best = 0;
    double fb = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kScan; ++i) {
        const double v = dist(lo + (hi - lo) * i / (kScan - 1));
        if (v < fb) fb = v, best = i;
    }
    const double h = (hi - lo) / (kScan - 1);
    double a = lo + h * std::max(best - 1, 0), b = lo + h * std::min(best + 1, kScan - 1);
    // golden section
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), e = a + g * (b - a), fc = dist(c), fe = dist(e);
    while (b - a > 1e-10) {
        if (fc <= fe) b = e, e = c, fe = fc, c = b - g * (b - a), fc = dist(c);
        else a = c, c = e, fc = fe, e = a + g * (b - a), fe = dist(e);
    }
    double best_ls = lo + h * best;
    if (std::min(fc, fe) < fb) fb = std::min(fc, fe), best_ls = fc <= fe ? c : e;
    return {fb, std::exp(best_ls)};
}

namespace {

// One linearly implicit step of the well-balanced scheme. The flux
//   Φ_{i+½} = [e^{-Δs} M_{i+1} - e^{Δs} M_i + 2 sinh(Δs) M_i M_{i+1} / 8π] / Δs
// vanishes exactly on every sampled 8π h_s, so stationary states are kept
// to rounding. The product is lagged as ½(M_i^n M_{i+1} + M_i M_{i+1}^n).
std::vector<double> ks_step(const KSState& st, double dt) {
    const std::size_t n = st.M.size();
    const std::size_t m = n - 1;   // unknowns M_0..M_{n-2}; M_{n-1} is the total
    const double ds = mesh_step(st);
    const double ep = std::exp(ds), em = std::exp(-ds), c = 2.0 * std::sinh(ds) / kCriticalMass;
    const auto& M = st.M;
    // Φ_{i+½} = alpha[i] M_i + beta[i] M_{i+1}
    std::vector<double> alpha(m), beta(m);
    for (std::size_t i = 0; i < m; ++i) {
        alpha[i] = (-ep + 0.5 * c * M[i + 1]) / ds;
        beta[i] = (em + 0.5 * c * M[i]) / ds;
    }
    std::vector<double> sub(m, 0.0), diag(m), sup(m, 0.0), rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double k = dt / (ds * std::exp(2.0 * st.s[i]));
        diag[i] = 1.0 - k * alpha[i];
        rhs[i] = M[i];
        if (i + 1 < m) sup[i] = -k * beta[i];
        else rhs[i] += k * beta[i] * M[n - 1];
        // the flux through the innermost face vanishes (M ∝ r² near the origin)
        if (i > 0) {
            sub[i] = k * alpha[i - 1];
            diag[i] += k * beta[i - 1];
        }
    }
    auto x = solve_tridiagonal(std::move(sub), std::move(diag), std::move(sup), std::move(rhs));
    x.push_back(M[n - 1]);
    return x;
}

std::vector<double> sample_times(const KSOptions& opt) {
    std::vector<double> ts{0.0};
    const int k = std::max(opt.samples, 2);
    for (int i = 0; i < k; ++i) ts.push_back(opt.T * std::pow(10.0, -3.0 + 3.0 * i / (k - 1)));
    return ts;
}

KSSample make_sample(const KSState& st, double dissipation, const KSOptions& opt) {
    KSSample smp;
    smp.t = st.t;
    smp.free_energy = ks_free_energy(st);
    std::tie(smp.distance, smp.scale) = ks_distance(st);
    smp.dissipation = dissipation;
    smp.mass_error = std::abs(st.M.back() - kCriticalMass);
    smp.bound_holds = smp.distance <= kCriticalMass * std::sqrt(8.0 * std::max(smp.free_energy, 0.0)) + opt.bound_tol;
    return smp;
}

}  // namespace

FlowTrajectory ks_evolve(const KSState& initial, const KSOptions& opt) {
    if (!(opt.T > 0.0) || !(opt.dt0 > 0.0) || !(opt.dt_max >= opt.dt0) || !(opt.max_change > 0.0))
        throw ParameterError("flows", "invalid Keller–Segel time-stepping options");
    if (initial.M.size() < 16 || initial.s.size() != initial.M.size())
        throw DimensionError("flows", "malformed Keller–Segel state");
    FlowTrajectory out;
    KSState st = initial;
    st.dt = st.dt > 0.0 ? st.dt : opt.dt0;
    const auto ts = sample_times(opt);
    std::size_t next = 0;
    double energy = ks_free_energy(st), dissipation = 0.0;
    out.min_mass_increment = std::numeric_limits<double>::infinity();
    auto record = [&] {
        out.samples.push_back(make_sample(st, dissipation, opt));
        out.max_mass_error = std::max(out.max_mass_error, out.samples.back().mass_error);
        ++next;
    };
    while (next < ts.size() && ts[next] <= st.t) record();
    while (next < ts.size()) {
        double dt = std::min(st.dt, ts[next] - st.t);
        std::vector<double> M1;
        for (;;) {
            if (dt < 1e-14) throw EvolutionError("flows", "Keller–Segel time step underflow at t = " + std::to_string(st.t));
            M1 = ks_step(st, dt);
            double change = 0.0, min_inc = M1[0];
            bool finite = true;
            for (std::size_t i = 0; i < M1.size(); ++i) {
                finite = finite && std::isfinite(M1[i]);
                change = std::max(change, std::abs(M1[i] - st.M[i]));
                if (i > 0) min_inc = std::min(min_inc, M1[i] - M1[i - 1]);
            }
            if (finite && min_inc >= -1e-13 * kCriticalMass && change <= opt.max_change * kCriticalMass) {
                if (change < 0.25 * opt.max_change * kCriticalMass) st.dt = std::min(1.1 * std::max(st.dt, dt), opt.dt_max);
                out.min_mass_increment = std::min(out.min_mass_increment, min_inc);
                break;
            }
            dt *= 0.5;
            st.dt = dt;
        }
        st.M = std::move(M1);
        st.t = (ts[next] - st.t - dt) <= 1e-12 * std::max(1.0, ts[next]) ? ts[next] : st.t + dt;
        ++out.steps;
        const double e1 = ks_free_energy(st);
        out.max_energy_increase = std::max(out.max_energy_increase, e1 - energy);
        dissipation = (energy - e1) / dt;
        energy = e1;
        out.max_drift_L1 = std::max(out.max_drift_L1, ks_L1(st, initial));
        while (next < ts.size() && ts[next] <= st.t) record();
    }
    out.final_state = st;
    out.energy_monotone = out.max_energy_increase <= opt.energy_tol;
    out.bound_holds = std::all_of(out.samples.begin(), out.samples.end(), [](const KSSample& s) { return s.bound_holds; });
    return out;
}

RateFit ks_rate_fit(const FlowTrajectory& traj) {
    RateFit fit;
    if (traj.samples.empty()) throw ParameterError("flows", "rate fit needs samples");
    const double T = traj.samples.back().t;
    fit.window_start = T / 100.0;
    fit.window_end = T;
    std::vector<const KSSample*> w;
    double earliest = T;
    for (const auto& s : traj.samples) {
        if (s.t > 0.0) earliest = std::min(earliest, s.t);
        if (s.t >= fit.window_start * (1.0 - 1e-12) && s.t > 0.0) w.push_back(&s);
    }
    if (w.size() < 3 || earliest > fit.window_start * (1.0 + 1e-9))
        throw ParameterError("flows", "rate fit needs samples spanning two decades of time");
    auto slope = [&](auto value) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int k = 0;
        for (const auto* s : w) {
            const double v = value(*s);
            if (!(v > 0.0)) continue;
            const double x = std::log(s->t), y = std::log(v);
            sx += x, sy += y, sxx += x * x, sxy += x * y, ++k;
        }
        if (k < 3) return std::numeric_limits<double>::quiet_NaN();
        return (k * sxy - sx * sy) / (k * sxx - sx * sx);
    };
    fit.entropy_exponent = slope([](const KSSample& s) { return s.free_energy; });
    fit.distance_exponent = slope([](const KSSample& s) { return s.distance; });
    fit.defined = std::isfinite(fit.entropy_exponent) && std::isfinite(fit.distance_exponent);
    if (!fit.defined) fit.note = "free energy or distance reached zero inside the window";
    const double split = std::sqrt(w.front()->t * w.back()->t);
    auto consistent = [&](auto value) {
        double early = 0.0, late = 0.0;
        for (const auto* s : w) (s->t < split ? early : late) = std::max(s->t < split ? early : late, value(*s));
        return late <= early;
    };
    fit.entropy_consistent = consistent([](const KSSample& s) { return s.free_energy * std::pow(s.t, 0.125); });
    fit.distance_consistent = consistent([](const KSSample& s) { return s.distance * std::pow(s.t, 0.0625); });
    return fit;
}

void write_csv(std::ostream& os, const FlowTrajectory& traj) {
    os << "t,free_energy,distance_L1,dissipation,mass_error\n";
    os.precision(12);
    for (const auto& s : traj.samples)
        os << s.t << ',' << s.free_energy << ',' << s.distance << ',' << s.dissipation << ',' << s.mass_error << '\n';
}

nlohmann::json to_json(const FlowTrajectory& traj, const KSOptions& opt) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : traj.samples)
        samples.push_back({{"t", s.t}, {"free_energy", s.free_energy}, {"distance_L1", s.distance},
                           {"scale", s.scale}, {"dissipation", s.dissipation}, {"mass_error", s.mass_error},
                           {"bound_holds", s.bound_holds}});
    return {{"grid", {{"n", opt.n}, {"r_min", opt.r_min}, {"r_max", opt.r_max}, {"mesh", "uniform in log r"}}},
            {"T", opt.T},
            {"steps", traj.steps},
            {"max_energy_increase", traj.max_energy_increase},
            {"energy_monotone", traj.energy_monotone},
            {"max_mass_error", traj.max_mass_error},
            {"min_mass_increment", traj.min_mass_increment},
            {"max_drift_L1", traj.max_drift_L1},
            {"bound_holds", traj.bound_holds},
            {"samples", samples}};
}

nlohmann::json to_json(const RateFit& fit) {
    nlohmann::json j{{"defined", fit.defined},
                     {"entropy_consistent", fit.entropy_consistent},
                     {"distance_consistent", fit.distance_consistent},
                     {"window", {fit.window_start, fit.window_end}}};
    j["entropy_exponent"] = fit.defined ? nlohmann::json(fit.entropy_exponent) : nlohmann::json(nullptr);
    j["distance_exponent"] = fit.defined ? nlohmann::json(fit.distance_exponent) : nlohmann::json(nullptr);
    if (!fit.note.empty()) j["note"] = fit.note;
    return j;
}

}  // namespace lhls
