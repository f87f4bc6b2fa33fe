#include "lhls/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "lhls/entropy.hpp"
#include "lhls/errors.hpp"

namespace lhls {

namespace {

constexpr double kPi = std::numbers::pi;

double h_profile(double r2) {
    const double q = 1.0 + r2;
    return 1.0 / (kPi * q * q);
}

}  // namespace

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          double step, double ftol, int max_eval) {
    const std::size_t d = x0.size();
    std::vector<std::vector<double>> pts(d + 1, x0);
    std::vector<double> val(d + 1);
    for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += step;
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };
    for (std::size_t i = 0; i <= d; ++i) val[i] = eval(pts[i]);

    std::vector<std::size_t> order(d + 1);
    while (evals < max_eval) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return val[a] < val[b]; });
        const auto best = order.front(), worst = order.back(), second = order[d - 1];
        double size = 0.0;
        for (std::size_t i = 0; i <= d; ++i)
            for (std::size_t k = 0; k < d; ++k) size = std::max(size, std::abs(pts[i][k] - pts[best][k]));
        if (val[worst] - val[best] <= ftol && size <= 1e-9) break;
        if (size <= 1e-13) break;

        std::vector<double> c(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i)
            if (i != worst)
                for (std::size_t k = 0; k < d; ++k) c[k] += pts[i][k] / double(d);
        auto along = [&](double coef) {
            std::vector<double> x(d);
            for (std::size_t k = 0; k < d; ++k) x[k] = c[k] + coef * (pts[worst][k] - c[k]);
            return x;
        };
        auto xr = along(-1.0);
        const double fr = eval(xr);
        if (fr < val[best]) {
            auto xe = along(-2.0);
            const double fe = eval(xe);
            if (fe < fr) pts[worst] = xe, val[worst] = fe;
            else pts[worst] = xr, val[worst] = fr;
        } else if (fr < val[second]) {
            pts[worst] = xr, val[worst] = fr;
        } else {
            auto xc = fr < val[worst] ? along(-0.5) : along(0.5);
            const double fc = eval(xc);
            if (fc < std::min(fr, val[worst])) {
                pts[worst] = xc, val[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < d; ++k) pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
                    val[i] = eval(pts[i]);
                }
            }
        }
    }
    const auto it = std::min_element(val.begin(), val.end());
    return {pts[it - val.begin()], *it, evals};
}

SimplexResult golden_section(const std::function<double(double)>& f, double a, double b, double xtol) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    int evals = 2;
    while (b - a > xtol) {
        if (fc <= fd) {
            b = d, d = c, fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c, c = d, fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        ++evals;
    }
    return fc <= fd ? SimplexResult{{c}, fc, evals} : SimplexResult{{d}, fd, evals};
}

// ---------------------------------------------------------------------------
// Planar family

double planar_optimizer_value(const PlanarOptimizerParams& p, double x1, double x2) {
    const double y1 = x1 / p.s - p.x0[0], y2 = x2 / p.s - p.x0[1];
    return h_profile(y1 * y1 + y2 * y2) / (p.s * p.s);
}

RadialDensity planar_optimizer(const PlanarOptimizerParams& p, std::shared_ptr<const RadialGrid> grid) {
    if (p.x0[0] != 0.0 || p.x0[1] != 0.0)
        throw DomainError("optimizers", "radial optimizer requires x0 = 0");
    if (!(p.s > 0.0)) throw ParameterError("optimizers", "optimizer scale s must be positive");
    return sample_radial(std::move(grid), [&](double r) { return planar_optimizer_value(p, r, 0.0); });
}

PlanarDensity planar_optimizer(const PlanarOptimizerParams& p, std::shared_ptr<const CartesianGrid> grid) {
    if (!(p.s > 0.0)) throw ParameterError("optimizers", "optimizer scale s must be positive");
    return sample_planar(std::move(grid), [&](double x1, double x2) { return planar_optimizer_value(p, x1, x2); });
}

double planar_L1_to_optimizer(const RadialDensity& rho, double s) {
    // Split [0, r_max] at the sign changes of ρ - h_s; on each piece the L¹
    // norm is the difference of cumulative masses, which avoids the kinks.
    const auto& g = *rho.grid;
    const auto r = g.nodes();
    const double s2 = s * s;
    auto gap = [&](double x) { return g.interpolate(rho.values, x) - h_profile(x * x / s2) / s2; };
    auto cum = [&](double x) { return g.cumulative_at(rho.values, x) - x * x / (s2 + x * x); };
    std::vector<double> cuts{0.0};
    double prev = rho.values[0] - h_profile(r[0] * r[0] / s2) / s2;
    for (std::size_t i = 1; i < g.size(); ++i) {
        const double cur = rho.values[i] - h_profile(r[i] * r[i] / s2) / s2;
        if ((prev < 0.0) != (cur < 0.0) && prev != 0.0 && cur != 0.0) {
            double a = r[i - 1], b = r[i], fa = prev;
            for (int it = 0; it < 60 && b - a > 1e-15 * b; ++it) {
                const double m = 0.5 * (a + b), fm = gap(m);
                if ((fm < 0.0) == (fa < 0.0)) a = m, fa = fm; else b = m;
            }
            cuts.push_back(0.5 * (a + b));
        }
        prev = cur;
    }
    const double rm = g.r_max();
    cuts.push_back(rm);
    std::vector<double> pieces(cuts.size());
    double last = 0.0;
    for (std::size_t k = 1; k < cuts.size(); ++k) {
        const double c = cum(cuts[k]);
        pieces[k - 1] = std::abs(c - last);
        last = c;
    }
    pieces.back() = s2 / (s2 + rm * rm);
    return pairwise_sum(pieces);
}

double planar_L1_to_optimizer(const PlanarDensity& rho, const PlanarOptimizerParams& p) {
    const auto& g = *rho.grid;
    std::vector<double> diff(g.size()), inside(g.size());
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j) {
            const auto k = g.index(i, j);
            const double v = planar_optimizer_value(p, g.coord(i), g.coord(j));
            diff[k] = std::abs(rho.values[k] - v);
            inside[k] = v;
        }
    return g.integrate(diff) + std::max(0.0, 1.0 - g.integrate(inside));
}

namespace {

constexpr double kTieTol = 1e-12;

// Candidate ordering: smaller distance, then smaller s, then smaller x0.
bool better(const NearestPlanar& a, const NearestPlanar& b) {
    if (a.distance < b.distance - kTieTol) return true;
    if (b.distance < a.distance - kTieTol) return false;
    if (a.params.s != b.params.s) return a.params.s < b.params.s;
    return a.params.x0 < b.params.x0;
}

void require_unit(double mass, const char* what) {
    if (std::abs(mass - 1.0) > kMassTolerance)
        throw NormalizationError("optimizers", std::string(what) + " requires unit mass");
}

}  // namespace

NearestPlanar nearest_planar_L1(const RadialDensity& rho) {
    require_unit(rho.mass(), "nearest_planar_L1");
    constexpr int kScan = 121;
    constexpr int kStarts = 5;
    std::vector<double> ls(kScan), f(kScan);
    for (int i = 0; i < kScan; ++i) {
        ls[i] = -kLogScaleBox + 2.0 * kLogScaleBox * i / (kScan - 1);
        f[i] = planar_L1_to_optimizer(rho, std::exp(ls[i]));
    }
    std::vector<int> minima;
    for (int i = 0; i < kScan; ++i) {
        const bool left = i == 0 || f[i] <= f[i - 1];
        const bool right = i == kScan - 1 || f[i] <= f[i + 1];
        if (left && right) minima.push_back(i);
    }
    std::sort(minima.begin(), minima.end(), [&](int a, int b) { return f[a] < f[b]; });
    if (minima.size() > kStarts) minima.resize(kStarts);

    NearestPlanar best;
    best.distance = std::numeric_limits<double>::infinity();
    int evals = kScan;
    for (int i : minima) {
        const double a = ls[std::max(i - 1, 0)], b = ls[std::min(i + 1, kScan - 1)];
        const auto r = golden_section([&](double x) { return planar_L1_to_optimizer(rho, std::exp(x)); }, a, b, 1e-9);
        evals += r.evaluations;
        NearestPlanar cand;
        cand.params.s = std::exp(r.x[0]);
        cand.distance = r.value;
        if (better(cand, best)) best = cand;
    }
    best.info.evaluations = evals;
    best.info.starts = static_cast<int>(minima.size());
    const double lbest = std::log(best.params.s);
    if (std::abs(std::abs(lbest) - kLogScaleBox) < 2.0 * kLogScaleBox / (kScan - 1)) {
        best.info.boundary_warning = true;
        best.info.note = "minimum at the boundary of the log-scale search box";
    }
    return best;
}

NearestPlanar nearest_planar_L1(const PlanarDensity& rho) {
    require_unit(rho.mass(), "nearest_planar_L1");
    const auto& g = *rho.grid;

    // Centre candidates: the barycentre and the densest cell.
    std::vector<double> x1(g.size()), x2(g.size());
    std::size_t argmax = 0;
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j) {
            const auto k = g.index(i, j);
            x1[k] = g.coord(i) * rho.values[k];
            x2[k] = g.coord(j) * rho.values[k];
            if (rho.values[k] > rho.values[argmax]) argmax = k;
        }
    std::vector<std::array<double, 2>> centres{{g.integrate(x1), g.integrate(x2)},
                                                {g.coord(int(argmax / g.n())), g.coord(int(argmax % g.n()))}};

    // y = (log s, c1, c2) with centre c = s·x0
    auto objective = [&](const std::vector<double>& y) {
        const double ls = std::clamp(y[0], -kLogScaleBox, kLogScaleBox);
        const double s = std::exp(ls);
        PlanarOptimizerParams p{s, {y[1] / s, y[2] / s}};
        return planar_L1_to_optimizer(rho, p) + std::abs(y[0] - ls);
    };

    NearestPlanar best;
    best.distance = std::numeric_limits<double>::infinity();
    int evals = 0;
    for (const auto& c : centres) {
        double bl = 0.0, bf = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 24; ++i) {
            const double ls = -kLogScaleBox + kLogScaleBox * i / 12.0;
            const double v = objective({ls, c[0], c[1]});
            ++evals;
            if (v < bf) bf = v, bl = ls;
        }
        const double s0 = std::exp(bl);
        auto r = nelder_mead(objective, {bl, c[0], c[1]}, 0.25 * std::max(s0, g.spacing()), 1e-13, 3000);
        // restart once from the result to shake off simplex collapse
        const auto r2 = nelder_mead(objective, r.x, 0.05 * std::max(std::exp(r.x[0]), g.spacing()), 1e-14, 3000);
        evals += r.evaluations + r2.evaluations;
        if (r2.value <= r.value) r = r2;
        NearestPlanar cand;
        cand.params.s = std::exp(std::clamp(r.x[0], -kLogScaleBox, kLogScaleBox));
        cand.params.x0 = {r.x[1] / cand.params.s, r.x[2] / cand.params.s};
        cand.distance = r.value;
        if (better(cand, best)) best = cand;
    }
    best.info.evaluations = evals;
    best.info.starts = static_cast<int>(centres.size());
    if (std::abs(std::log(best.params.s)) > kLogScaleBox - 1e-6) {
        best.info.boundary_warning = true;
        best.info.note = "minimum at the boundary of the log-scale search box";
    }
    return best;
}

// ---------------------------------------------------------------------------
// Sphere family

namespace {

// log(cosh t + sinh t·x) without cancellation for large t.
double log_lambda(double t, double x) {
    x = std::clamp(x, -1.0, 1.0);
    const double at = std::abs(t);
    const double xs = t >= 0.0 ? x : -x;
    // ½e^{t}(1+x) + ½e^{-t}(1-x)
    const double a = 1.0 + xs, b = 1.0 - xs;
    if (a == 0.0) return -at;
    return at + std::log(0.5 * a + 0.5 * b * std::exp(-2.0 * at));
}

bool is_axial(const Vec3& n) { return std::abs(std::abs(n[2]) - 1.0) < 1e-14; }

}  // namespace

double sphere_optimizer_value(const SphereOptimizerParams& p, const Vec3& omega) {
    return -2.0 * log_lambda(p.t, dot(p.n, omega));
}

SphereField sphere_optimizer(const SphereOptimizerParams& p, std::shared_ptr<const SphereGrid> grid) {
    if (std::abs(p.t) > kConformalCap) throw ParameterError("optimizers", "optimizer parameter t exceeds cap 20");
    if (std::abs(std::sqrt(dot(p.n, p.n)) - 1.0) > 1e-12)
        throw ParameterError("optimizers", "optimizer axis n must be a unit vector");
    const bool zonal = p.t == 0.0 || is_axial(p.n);
    if (!zonal && grid->azimuths() < 3)
        throw ParameterError("optimizers", "off-axis optimizer requires a full sphere grid");
    return sample_sphere(grid, [&](const Vec3& w) { return sphere_optimizer_value(p, w); }, zonal);
}

Vec3 sphere_barycenter(const SphereField& u) {
    const auto& g = *u.grid;
    std::vector<double> e(g.size()), c[3];
    for (auto& v : c) v.resize(g.size());
    const double shift = *std::max_element(u.values.begin(), u.values.end());
    for (int j = 0; j < g.rings(); ++j)
        for (int k = 0; k < g.azimuths(); ++k) {
            Vec3 w;
            g.point(j, k, w.data());
            const auto i = static_cast<std::size_t>(j) * g.azimuths() + k;
            e[i] = std::exp(u.values[i] - shift);
            for (int d = 0; d < 3; ++d) c[d][i] = e[i] * w[d];
        }
    const double mass = g.integrate(e);
    return {g.integrate(c[0]) / mass, g.integrate(c[1]) / mass, g.integrate(c[2]) / mass};
}

double optimizer_barycenter_norm(double t) {
    t = std::abs(t);
    if (t < 1e-4) return 2.0 * t / 3.0 - 4.0 * t * t * t / 45.0;
    const double sh = std::sinh(t);
    return std::cosh(t) / sh - t / (sh * sh);
}

namespace {

// Inverse of optimizer_barycenter_norm on [0, cap].
double barycenter_rapidity(double c) {
    if (c <= 0.0) return 0.0;
    if (c >= optimizer_barycenter_norm(kConformalCap)) return kConformalCap;
    double lo = 0.0, hi = kConformalCap;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (optimizer_barycenter_norm(mid) < c ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct WeightedCloud {
    std::vector<Vec3> points;
    std::vector<double> mass;   // e^u w, normalized
};

WeightedCloud cloud_of(const SphereField& u) {
    const auto& g = *u.grid;
    WeightedCloud c;
    c.points.resize(g.size());
    c.mass.resize(g.size());
    const auto w = g.weights();
    for (int j = 0; j < g.rings(); ++j)
        for (int k = 0; k < g.azimuths(); ++k) {
            const auto i = static_cast<std::size_t>(j) * g.azimuths() + k;
            g.point(j, k, c.points[i].data());
            c.mass[i] = std::exp(u.values[i]) * w[i];
        }
    const double total = pairwise_sum(c.mass);
    for (double& m : c.mass) m /= total;
    return c;
}

}  // namespace

double sphere_optimizer_mean(double t) {
    t = std::abs(t);
    if (t < 1e-4) return -2.0 * t * t / 3.0;
    return -2.0 * (t / std::tanh(t) - 1.0);
}

double sphere_optimizer_dirichlet(double t) { return -4.0 * sphere_optimizer_mean(t); }

namespace {

// Legendre coefficients c_l = (2l+1)/2 ∫ f(x) P_l(x) dx, 0 ≤ l ≤ lmax, of
// f = -2 log λ (exponential = false) or f = λ^{-2} (exponential = true),
// λ = cosh t + sinh t·x. Panels are graded toward x = -1, where λ = e^{-t}.
std::vector<double> optimizer_profile_coefficients(double t, int lmax, bool exponential) {
    // Dense sweeps revisit the same t for many directions.
    thread_local struct {
        double t = -1.0;
        int lmax = -1;
        bool exponential = false;
        std::vector<double> c;
    } cache;
    if (cache.t == t && cache.lmax == lmax && cache.exponential == exponential) return cache.c;
    std::vector<double> c(static_cast<std::size_t>(lmax) + 1, 0.0);
    if (t == 0.0) {
        c[0] = exponential ? 1.0 : 0.0;
        return c;
    }
    const auto rule = gauss_legendre(lmax / 2 + 20);
    const double sh = std::sinh(t), em = std::exp(-t);
    const int levels = std::min(160, int(std::ceil(2.0 * t / std::log(2.0))) + 40);
    for (int k = 0; k < levels; ++k) {
        const double b = 2.0 * std::ldexp(1.0, -k), a = k + 1 == levels ? 0.0 : 0.5 * b;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double y = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[q];
            const double w = 0.5 * (b - a) * rule.weights[q];
            const double lam = em + sh * y;
            const double f = exponential ? 1.0 / (lam * lam) : -2.0 * std::log(lam);
            const auto p = legendre_values(lmax, y - 1.0);
            for (int l = 0; l <= lmax; ++l) c[l] += w * f * p[l];
        }
    }
    for (int l = 0; l <= lmax; ++l) c[l] *= 0.5 * (2 * l + 1);
    cache.t = t, cache.lmax = lmax, cache.exponential = exponential, cache.c = c;
    return c;
}

// U_l(n) = Σ_m û_lm Y_lm(n) for each degree l.
std::vector<double> degree_values_at(const SphExpansion& u, const Vec3& n) {
    const auto y = harmonics_at(u.lmax(), n);
    std::vector<double> out(static_cast<std::size_t>(u.lmax()) + 1, 0.0);
    for (int l = 0; l <= u.lmax(); ++l)
        for (int m = -l; m <= l; ++m) out[l] += u(l, m) * y(l, m);
    return out;
}

Vec3 vec_of(const std::vector<double>& y, bool zonal) {
    return zonal ? Vec3{0.0, 0.0, y[0]} : Vec3{y[0], y[1], y[2]};
}

SphereOptimizerParams params_of(const Vec3& a) {
    const double t = std::min(std::sqrt(dot(a, a)), kConformalCap);
    return {t, t > 0.0 ? normalized(a) : Vec3{0.0, 0.0, 1.0}};
}

// Minimize f over a = t·n, |a| ≤ 20 (a on the polar axis for zonal grids).
NearestSphere search_sphere_family(const std::function<double(const SphereOptimizerParams&)>& f, const SphereField& u,
                                   const std::vector<SphereOptimizerParams>& extra) {
    const bool zonal = u.grid->azimuths() < 3;
    auto objective = [&](const std::vector<double>& y) {
        Vec3 a = vec_of(y, zonal);
        const double t = std::sqrt(dot(a, a));
        return f(params_of(a)) + std::max(0.0, t - kConformalCap);
    };

    std::vector<Vec3> starts{{0.0, 0.0, 0.0}};
    {
        auto e = u;
        const double shift = std::log(e.exp_integral());
        for (double& v : e.values) v -= shift;
        const Vec3 b = sphere_barycenter(e);
        const double bn = std::sqrt(dot(b, b));
        if (bn > 0.0) {
            const double t0 = barycenter_rapidity(bn);
            starts.push_back({-t0 * b[0] / bn, -t0 * b[1] / bn, -t0 * b[2] / bn});
        }
    }
    for (const auto& p : extra) starts.push_back({p.t * p.n[0], p.t * p.n[1], p.t * p.n[2]});

    NearestSphere best;
    best.value = std::numeric_limits<double>::infinity();
    int evals = 0;
    for (const auto& s : starts) {
        std::vector<double> y0 = zonal ? std::vector<double>{s[2]} : std::vector<double>{s[0], s[1], s[2]};
        auto r = nelder_mead(objective, y0, 0.1, 1e-16, 4000);
        const auto r2 = nelder_mead(objective, r.x, 0.01, 1e-16, 4000);
        evals += r.evaluations + r2.evaluations;
        if (r2.value <= r.value) r = r2;
        const auto p = params_of(vec_of(r.x, zonal));
        if (r.value < best.value - kTieTol || (std::abs(r.value - best.value) <= kTieTol && p.t < best.params.t)) {
            best.value = r.value;
            best.params = p;
        }
    }
    best.value = f(best.params);
    best.info.evaluations = evals;
    best.info.starts = static_cast<int>(starts.size());
    if (best.params.t >= kConformalCap - 1e-6) {
        best.info.boundary_warning = true;
        best.info.note = "minimum at the conformal cap t = 20";
    }
    return best;
}

void require_exp_normalized(const SphereField& u, const char* op) {
    if (std::abs(u.exp_integral() - 1.0) > 1e-8)
        throw NormalizationError("optimizers", std::string(op) + " requires ∫e^u dσ = 1");
}

}  // namespace

double sphere_entropy_to_optimizer(const SphereField& u, const SphereOptimizerParams& p) {
    const auto& g = *u.grid;
    std::vector<double> terms(g.size());
    for (int j = 0; j < g.rings(); ++j)
        for (int k = 0; k < g.azimuths(); ++k) {
            Vec3 w;
            g.point(j, k, w.data());
            const auto i = static_cast<std::size_t>(j) * g.azimuths() + k;
            terms[i] = std::exp(u.values[i]) * (u.values[i] - sphere_optimizer_value(p, w));
        }
    return g.integrate(terms);
}

double sphere_reverse_entropy_to_optimizer(const SphereField& u, const SphereOptimizerParams& p) {
    // ∫e^v v = -2 ∫u_{t,-n} ... = 2(t coth t - 1) by change of variables
    const auto c = analyze(u);
    const auto k = optimizer_profile_coefficients(p.t, c.lmax(), true);
    const auto ul = degree_values_at(c, p.n);
    std::vector<double> terms(ul.size());
    for (std::size_t l = 0; l < ul.size(); ++l) terms[l] = k[l] / double(2 * l + 1) * ul[l];
    return -sphere_optimizer_mean(p.t) - pairwise_sum(terms);
}

double sphere_gradient_to_optimizer(const SphereField& u, const SphereOptimizerParams& p) {
    const auto c = analyze(u);
    const auto g = optimizer_profile_coefficients(p.t, c.lmax(), false);
    const auto ul = degree_values_at(c, p.n);
    std::vector<double> cross(ul.size(), 0.0);
    for (std::size_t l = 1; l < ul.size(); ++l) cross[l] = double(l) * (l + 1) * g[l] / double(2 * l + 1) * ul[l];
    return dirichlet_energy(u) - 2.0 * pairwise_sum(cross) + sphere_optimizer_dirichlet(p.t);
}

double sphere_L1_to_optimizer(const SphereField& rho, const SphereOptimizerParams& p) {
    const auto& g = *rho.grid;
    std::vector<double> terms(g.size());
    for (int j = 0; j < g.rings(); ++j)
        for (int k = 0; k < g.azimuths(); ++k) {
            Vec3 w;
            g.point(j, k, w.data());
            const auto i = static_cast<std::size_t>(j) * g.azimuths() + k;
            terms[i] = std::abs(rho.values[i] - std::exp(sphere_optimizer_value(p, w)));
        }
    return g.integrate(terms);
}

NearestSphere nearest_sphere_entropy(const SphereField& u, const std::vector<SphereOptimizerParams>& extra) {
    require_exp_normalized(u, "nearest_sphere_entropy");
    // H(e^u | e^{u_a}) = ∫e^u u + 2∫e^u log λ_a; only the second term moves.
    const auto cloud = cloud_of(u);
    std::vector<double> self(u.values.size());
    for (std::size_t i = 0; i < self.size(); ++i) self[i] = std::exp(u.values[i]) * u.values[i];
    const double base = u.grid->integrate(self);
    std::vector<double> terms(cloud.mass.size());
    return search_sphere_family(
        [&](const SphereOptimizerParams& p) {
            for (std::size_t i = 0; i < terms.size(); ++i)
                terms[i] = cloud.mass[i] * log_lambda(p.t, dot(p.n, cloud.points[i]));
            return base + 2.0 * pairwise_sum(terms);
        },
        u, extra);
}

NearestSphere nearest_sphere_reverse_entropy(const SphereField& u, const std::vector<SphereOptimizerParams>& extra) {
    require_exp_normalized(u, "nearest_sphere_reverse_entropy");
    const auto c = analyze(u);
    return search_sphere_family(
        [&](const SphereOptimizerParams& p) {
            const auto k = optimizer_profile_coefficients(p.t, c.lmax(), true);
            const auto ul = degree_values_at(c, p.n);
            std::vector<double> terms(ul.size());
            for (std::size_t l = 0; l < ul.size(); ++l) terms[l] = k[l] / double(2 * l + 1) * ul[l];
            return -sphere_optimizer_mean(p.t) - pairwise_sum(terms);
        },
        u, extra);
}

NearestSphere nearest_sphere_gradient(const SphereField& u, const std::vector<SphereOptimizerParams>& extra) {
    const auto c = analyze(u);
    const double du = dirichlet_energy(u);
    return search_sphere_family(
        [&](const SphereOptimizerParams& p) {
            const auto g = optimizer_profile_coefficients(p.t, c.lmax(), false);
            const auto ul = degree_values_at(c, p.n);
            std::vector<double> cross(ul.size(), 0.0);
            for (std::size_t l = 1; l < ul.size(); ++l)
                cross[l] = double(l) * (l + 1) * g[l] / double(2 * l + 1) * ul[l];
            return du - 2.0 * pairwise_sum(cross) + sphere_optimizer_dirichlet(p.t);
        },
        u, extra);
}

NearestSphere nearest_sphere_L1(const SphereField& rho, const std::vector<SphereOptimizerParams>& extra) {
    SphereField logrho = rho;
    for (double& v : logrho.values) v = std::log(std::max(v, 1e-300));
    // starts are seeded from the barycentre of ρ itself
    return search_sphere_family([&](const SphereOptimizerParams& p) { return sphere_L1_to_optimizer(rho, p); }, logrho,
                                extra);
}

Recentered recenter(const SphereField& u, double tol, int max_iter) {
    if (std::abs(u.exp_integral() - 1.0) > 1e-6)
        throw NormalizationError("optimizers", "recenter requires ∫e^u dσ = 1");
    const bool zonal = u.axisymmetric;
    if (!zonal && u.grid->azimuths() < 3)
        throw ParameterError("optimizers", "recenter of a non-axisymmetric field requires a full sphere grid");

    Recentered out{u, ConformalMap{}, 0.0, 0};
    Vec3 b = sphere_barycenter(u);
    out.barycenter_norm = std::sqrt(dot(b, b));
    if (out.barycenter_norm <= tol) return out;

    // Zonal fields only need axial boosts, which add in signed rapidity.
    double rapidity = 0.0;
    SphExpansion coeffs = zonal ? SphExpansion(0) : analyze(u);
    auto field_for = [&](const ConformalMap& tau, double rap) {
        if (zonal) return conformal_push(u, ConformalParams{std::abs(rap), {0.0, 0.0, rap >= 0.0 ? 1.0 : -1.0}});
        return conformal_push(coeffs, tau, u.grid);
    };

    for (int it = 1; it <= max_iter; ++it) {
        const double bn = out.barycenter_norm;
        // Newton step a = (I - M2)^{-1} b from the linearized barycentre
        // response; far from centred, the exact inverse for the optimizer
        // family along b is used instead.
        Vec3 a;
        if (bn > 0.5) {
            const double t = barycenter_rapidity(bn);
            a = {t * b[0] / bn, t * b[1] / bn, t * b[2] / bn};
        } else {
            const auto cloud = cloud_of(out.field);
            double m[3][3] = {};
            for (std::size_t i = 0; i < cloud.mass.size(); ++i)
                for (int p = 0; p < 3; ++p)
                    for (int q = 0; q < 3; ++q) m[p][q] += cloud.mass[i] * cloud.points[i][p] * cloud.points[i][q];
            double j[3][3];
            for (int p = 0; p < 3; ++p)
                for (int q = 0; q < 3; ++q) j[p][q] = (p == q ? 1.0 : 0.0) - m[p][q];
            const double det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1]) -
                               j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0]) +
                               j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
            if (std::abs(det) < 1e-300) throw ConvergenceError("optimizers", "recenter: singular barycentre Jacobian");
            // Cramer's rule
            for (int p = 0; p < 3; ++p) {
                double c[3][3];
                for (int r = 0; r < 3; ++r)
                    for (int q = 0; q < 3; ++q) c[r][q] = q == p ? b[r] : j[r][q];
                a[p] = (c[0][0] * (c[1][1] * c[2][2] - c[1][2] * c[2][1]) - c[0][1] * (c[1][0] * c[2][2] - c[1][2] * c[2][0]) +
                        c[0][2] * (c[1][0] * c[2][1] - c[1][1] * c[2][0])) /
                       det;
            }
        }
        if (zonal) a[0] = a[1] = 0.0;

        // Backtrack until the barycentre shrinks.
        for (int half = 0; half < 40; ++half) {
            const double t = std::min(std::sqrt(dot(a, a)), kConformalCap);
            const Vec3 n = t > 0.0 ? normalized(a) : Vec3{0.0, 0.0, 1.0};
            const auto step = ConformalMap::boost({t, n});
            const auto tau = out.map.compose(step);
            const double rap = rapidity + (n[2] >= 0.0 ? t : -t);
            auto field = field_for(tau, rap);
            const Vec3 nb = sphere_barycenter(field);
            const double nbn = std::sqrt(dot(nb, nb));
            if (nbn < bn || half == 39) {
                out.field = std::move(field);
                out.map = tau;
                rapidity = rap;
                b = nb;
                out.barycenter_norm = nbn;
                break;
            }
            for (double& v : a) v *= 0.5;
        }
        out.iterations = it;
        if (out.barycenter_norm <= tol) return out;
    }
    throw ConvergenceError("optimizers", "recenter: barycentre " + std::to_string(out.barycenter_norm) +
                                             " above tolerance after " + std::to_string(max_iter) + " iterations");
}

// ---------------------------------------------------------------------------
// Circle family

double circle_optimizer_density(const CircleOptimizerParams& p, double theta) {
    return (1.0 - p.r * p.r) / (1.0 - 2.0 * p.r * std::cos(theta - p.alpha) + p.r * p.r);
}

CircleField circle_optimizer(const CircleOptimizerParams& p, int bandwidth) {
    if (!(p.r >= 0.0) || p.r > kCircleRadiusCap)
        throw ParameterError("optimizers", "Poisson parameter r must lie in [0, 1 - 1e-6]");
    if (bandwidth <= 0) bandwidth = p.r == 0.0 ? 1 : std::max(1, int(std::ceil(std::log(1e-17) / std::log(p.r))));
    CircleField u;
    u.coef.assign(bandwidth + 1, 0.0);
    u.coef[0] = std::log1p(-p.r * p.r);
    double rk = 1.0;
    for (int k = 1; k <= bandwidth; ++k) {
        rk *= p.r;
        u.coef[k] = rk / k * std::polar(1.0, -k * p.alpha);
    }
    return u;
}

NearestCircle nearest_circle_L1(const CircleField& u, int n) {
    if (n <= 0) n = std::max(1024, 8 * u.bandwidth());
    const auto grid = CircleGrid::make(n);
    auto e = u.sample(n);
    for (double& v : e) v = std::exp(v);
    if (std::abs(grid.integrate(e) - 1.0) > 1e-8)
        throw NormalizationError("optimizers", "nearest_circle_L1 requires ∫e^u dσ = 1");

    // q = r·(cos α, sin α), smooth through r = 0
    auto params_of = [](const std::vector<double>& q) {
        const double r = std::hypot(q[0], q[1]);
        return CircleOptimizerParams{std::min(r, kCircleRadiusCap), r > 0.0 ? std::atan2(q[1], q[0]) : 0.0};
    };
    auto objective = [&](const std::vector<double>& q) {
        const auto p = params_of(q);
        std::vector<double> d(n);
        for (int j = 0; j < n; ++j) d[j] = std::abs(e[j] - circle_optimizer_density(p, grid.theta(j)));
        return grid.integrate(d) + std::max(0.0, std::hypot(q[0], q[1]) - kCircleRadiusCap);
    };

    std::vector<std::pair<double, std::vector<double>>> scan;
    int evals = 0;
    for (int i = 0; i < 12; ++i) {
        const double r = std::tanh(0.25 * i);
        for (int k = 0; k < (i == 0 ? 1 : 24); ++k) {
            const double a = 2.0 * kPi * k / 24.0;
            std::vector<double> q{r * std::cos(a), r * std::sin(a)};
            scan.emplace_back(objective(q), q);
            ++evals;
        }
    }
    std::sort(scan.begin(), scan.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    NearestCircle best;
    best.distance = std::numeric_limits<double>::infinity();
    const int starts = std::min<int>(3, scan.size());
    for (int s = 0; s < starts; ++s) {
        auto r = nelder_mead(objective, scan[s].second, 0.05, 1e-15, 3000);
        const auto r2 = nelder_mead(objective, r.x, 0.005, 1e-15, 3000);
        evals += r.evaluations + r2.evaluations;
        if (r2.value <= r.value) r = r2;
        const auto p = params_of(r.x);
        if (r.value < best.distance - kTieTol ||
            (std::abs(r.value - best.distance) <= kTieTol && p.r < best.params.r)) {
            best.distance = r.value;
            best.params = p;
        }
    }
    if (best.params.alpha < 0.0) best.params.alpha += 2.0 * kPi;
    best.info.evaluations = evals;
    best.info.starts = starts;
    if (best.params.r >= kCircleRadiusCap - 1e-9) {
        best.info.boundary_warning = true;
        best.info.note = "minimum at the radius cap";
    }
    return best;
}

}  // namespace lhls
