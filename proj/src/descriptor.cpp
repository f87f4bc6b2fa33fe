#include "lhls/descriptor.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>

#include "lhls/errors.hpp"
#include "lhls/optimizers.hpp"

namespace lhls {

namespace {

struct KeyDef {
    const char* key;
    double fallback;
    bool required;
    bool integral;
};

const std::vector<KeyDef>* keys_for(const std::string& kind) {
    static const std::vector<std::pair<std::string, std::vector<KeyDef>>> table{
        {"gaussian", {{"sigma", 1, false, false}, {"x1", 0, false, false}, {"x2", 0, false, false}}},
        {"optimizer", {{"s", 1, false, false}, {"x1", 0, false, false}, {"x2", 0, false, false}}},
        {"perturbed-optimizer", {{"eps", 0, true, false}, {"mode", 2, false, true}, {"s", 1, false, false}}},
        {"sphere-optimizer", {{"t", 0, false, false}, {"theta", 0, false, false}, {"phi", 0, false, false}}},
        {"band-limited-random", {{"seed", 0, true, true}, {"L", 6, false, true}, {"amplitude", 0.5, false, false}}},
        {"circle-poisson", {{"r", 0, false, false}, {"alpha", 0, false, false}}},
        {"circle-perturbed",
         {{"r", 0, false, false}, {"alpha", 0, false, false}, {"eps", 0, true, false}, {"seed", 1, false, true},
          {"K", 4, false, true}}},
    };
    for (const auto& [k, v] : table)
        if (k == kind) return &v;
    return nullptr;
}

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    Descriptor top() {
        skip();
        Descriptor desc;
        if (s_.substr(i_, 4) == "8pi*") {
            i_ += 4;
            desc = component();
            if (desc.domain() != DescriptorDomain::planar) fail("8pi* applies to planar densities only");
            desc.critical_mass = true;
        } else {
            desc = component();
        }
        skip();
        if (i_ != s_.size()) fail("unexpected trailing input");
        return desc;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("cli", what + " at position " + std::to_string(i_) + " in \"" + std::string(s_) + "\"");
    }
    void skip() {
        while (i_ < s_.size() && s_[i_] == ' ') ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) return ++i_, true;
        return false;
    }
    std::string ident() {
        skip();
        const auto b = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '-' || s_[i_] == '_')) ++i_;
        if (b == i_) fail("expected a name");
        return std::string(s_.substr(b, i_ - b));
    }
    double number() {
        skip();
        double v = 0.0;
        const auto* first = s_.data() + i_;
        const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
        if (ec != std::errc() || !std::isfinite(v)) fail("expected a number");
        i_ += static_cast<std::size_t>(ptr - first);
        return v;
    }

    Descriptor component() {
        const auto at = i_;
        Descriptor desc;
        desc.kind = ident();
        if (desc.kind == "mixture") {
            if (!eat('[')) fail("expected '[' after mixture");
            do {
                const double w = number();
                if (!eat('*')) fail("expected '*' after mixture weight");
                auto c = component();
                if (c.kind == "mixture" || c.domain() != DescriptorDomain::planar) fail("mixture components must be planar densities");
                desc.components.emplace_back(w, std::move(c));
            } while (eat(';'));
            if (!eat(']')) fail("expected ']' closing mixture");
            double total = 0.0;
            for (const auto& [w, c] : desc.components) {
                if (!(w > 0.0)) fail("mixture weights must be positive");
                total += w;
            }
            if (std::abs(total - 1.0) > 1e-12) fail("mixture weights must sum to 1");
            return desc;
        }
        const auto* defs = keys_for(desc.kind);
        if (!defs) {
            i_ = at;
            fail("unknown kind '" + desc.kind + "'");
        }
        std::vector<std::pair<std::string, double>> given;
        if (eat(':')) {
            do {
                const auto kat = i_;
                const auto key = ident();
                if (!eat('=')) fail("expected '=' after " + key);
                const double v = number();
                bool known = false;
                for (const auto& d : *defs) known = known || key == d.key;
                if (!known) {
                    i_ = kat;
                    fail("unknown key '" + key + "' for " + desc.kind);
                }
                for (const auto& g : given)
                    if (g.first == key) {
                        i_ = kat;
                        fail("duplicate key '" + key + "'");
                    }
                given.emplace_back(key, v);
            } while (eat(','));
        }
        for (const auto& d : *defs) {
            double v = d.fallback;
            bool found = false;
            for (const auto& g : given)
                if (g.first == d.key) v = g.second, found = true;
            if (d.required && !found) fail(desc.kind + " requires " + d.key);
            if (d.integral && v != std::floor(v)) fail(std::string(d.key) + " must be an integer");
            desc.params.emplace_back(d.key, v);
        }
        validate(desc);
        return desc;
    }

    void validate(const Descriptor& s) {
        auto need = [&](bool ok, const std::string& what) {
            if (!ok) fail(s.kind + ": " + what);
        };
        const auto& k = s.kind;
        if (k == "gaussian") need(s.param("sigma") > 0.0, "sigma > 0");
        if (k == "optimizer" || k == "perturbed-optimizer") need(s.param("s") > 0.0, "s > 0");
        if (k == "perturbed-optimizer") {
            need(std::abs(s.param("eps")) <= 0.5, "|eps| <= 0.5");
            need(s.param("mode") >= 1.0, "mode >= 1");
        }
        if (k == "sphere-optimizer") need(s.param("t") >= 0.0 && s.param("t") <= kConformalCap, "0 <= t <= 20");
        if (k == "band-limited-random") {
            need(s.param("L") >= 1.0 && s.param("L") <= 64.0, "1 <= L <= 64");
            need(s.param("amplitude") > 0.0, "amplitude > 0");
            need(s.param("seed") >= 0.0, "seed >= 0");
        }
        if (k == "circle-poisson" || k == "circle-perturbed") need(s.param("r") >= 0.0 && s.param("r") < 1.0, "0 <= r < 1");
        if (k == "circle-perturbed") {
            need(s.param("K") >= 1.0 && s.param("K") <= 256.0, "1 <= K <= 256");
            need(s.param("seed") >= 0.0, "seed >= 0");
        }
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

std::string fmt(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

double Descriptor::param(const std::string& key) const {
    for (const auto& [k, v] : params)
        if (k == key) return v;
    throw ParameterError("cli", kind + " has no parameter '" + key + "'");
}

DescriptorDomain Descriptor::domain() const {
    if (kind == "sphere-optimizer" || kind == "band-limited-random") return DescriptorDomain::sphere;
    if (kind == "circle-poisson" || kind == "circle-perturbed") return DescriptorDomain::circle;
    return DescriptorDomain::planar;
}

bool Descriptor::radial() const {
    if (kind == "mixture") {
        for (const auto& c : components)
            if (!c.second.radial()) return false;
        return true;
    }
    if (kind == "gaussian" || kind == "optimizer") return param("x1") == 0.0 && param("x2") == 0.0;
    return kind == "perturbed-optimizer";
}

Descriptor parse_descriptor(std::string_view text) { return Parser(text).top(); }

std::string format_descriptor(const Descriptor& desc) {
    std::string out = desc.critical_mass ? "8pi*" : "";
    out += desc.kind;
    if (desc.kind == "mixture") {
        out += '[';
        for (std::size_t i = 0; i < desc.components.size(); ++i) {
            if (i) out += ';';
            out += fmt(desc.components[i].first) + '*' + format_descriptor(desc.components[i].second);
        }
        return out + ']';
    }
    const auto* defs = keys_for(desc.kind);
    if (!defs) throw ParameterError("cli", "unknown kind '" + desc.kind + "'");
    char sep = ':';
    for (const auto& d : *defs) {
        const double v = desc.param(d.key);
        if (!d.required && v == d.fallback) continue;
        out += sep;
        out += d.key;
        out += '=' + fmt(v);
        sep = ',';
    }
    return out;
}

std::function<double(double, double)> planar_function(const Descriptor& desc) {
    constexpr double pi = std::numbers::pi;
    const auto& k = desc.kind;
    if (k == "gaussian") {
        const double s = desc.param("sigma"), c1 = desc.param("x1"), c2 = desc.param("x2");
        return [=](double x, double y) {
            const double r2 = (x - c1) * (x - c1) + (y - c2) * (y - c2);
            return std::exp(-0.5 * r2 / (s * s)) / (2.0 * pi * s * s);
        };
    }
    if (k == "optimizer") {
        const PlanarOptimizerParams p{desc.param("s"), {desc.param("x1"), desc.param("x2")}};
        return [=](double x, double y) { return planar_optimizer_value(p, x, y); };
    }
    if (k == "perturbed-optimizer") {
        // cos(mode·π·u) with u = r²/(s²+r²) the mass fraction of h_s inside r;
        // integer modes integrate to zero against h_s, so the mass stays 1.
        const double s = desc.param("s"), eps = desc.param("eps"), mode = desc.param("mode");
        return [=](double x, double y) {
            const double r2 = x * x + y * y, u = r2 / (s * s + r2);
            const double h = 1.0 / (pi * s * s * (1.0 + r2 / (s * s)) * (1.0 + r2 / (s * s)));
            return h * (1.0 + eps * std::cos(mode * pi * u));
        };
    }
    if (k == "mixture") {
        std::vector<std::pair<double, std::function<double(double, double)>>> parts;
        for (const auto& [w, c] : desc.components) parts.emplace_back(w, planar_function(c));
        return [parts](double x, double y) {
            double v = 0.0;
            for (const auto& [w, f] : parts) v += w * f(x, y);
            return v;
        };
    }
    throw DomainError("cli", k + " is not a planar density");
}

RadialDensity build_radial(const Descriptor& desc, std::shared_ptr<const RadialGrid> grid) {
    if (!desc.radial()) throw DomainError("cli", format_descriptor(desc) + " is not radial about the origin");
    const auto f = planar_function(desc);
    const double scale = desc.critical_mass ? kCriticalMass : 1.0;
    return sample_radial(std::move(grid), [&](double r) { return scale * f(r, 0.0); });
}

PlanarDensity build_planar(const Descriptor& desc, std::shared_ptr<const CartesianGrid> grid) {
    const auto f = planar_function(desc);
    const double scale = desc.critical_mass ? kCriticalMass : 1.0;
    return sample_planar(std::move(grid), [&](double x, double y) { return scale * f(x, y); });
}

SphereField build_sphere_field(const Descriptor& desc, std::shared_ptr<const SphereGrid> grid) {
    if (desc.kind == "sphere-optimizer") {
        const double th = desc.param("theta"), ph = desc.param("phi");
        const Vec3 n{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
        return sphere_optimizer({desc.param("t"), n}, std::move(grid));
    }
    if (desc.kind == "band-limited-random") {
        const int L = static_cast<int>(desc.param("L"));
        const double amp = desc.param("amplitude");
        std::mt19937_64 rng(static_cast<std::uint64_t>(desc.param("seed")));
        std::normal_distribution<double> normal;
        SphExpansion c(L);
        for (int l = 1; l <= L; ++l)
            for (int m = -l; m <= l; ++m) c(l, m) = amp * normal(rng) / (double(l) * l);
        auto u = synthesize(c, std::move(grid));
        const double shift = std::log(u.exp_integral());
        for (double& v : u.values) v -= shift;
        return u;
    }
    throw DomainError("cli", desc.kind + " is not a sphere field");
}

CircleField build_circle_field(const Descriptor& desc) {
    const CircleOptimizerParams p{desc.param("r"), desc.param("alpha")};
    if (desc.kind == "circle-poisson") return circle_optimizer(p);
    if (desc.kind == "circle-perturbed") {
        const int K = static_cast<int>(desc.param("K"));
        auto u = circle_optimizer(p);
        if (u.bandwidth() < K) u.coef.resize(static_cast<std::size_t>(K) + 1);
        std::mt19937_64 rng(static_cast<std::uint64_t>(desc.param("seed")));
        std::normal_distribution<double> normal;
        const double eps = desc.param("eps");
        for (int k = 1; k <= K; ++k) {
            const double a = normal(rng), b = normal(rng);
            u.coef[k] += eps * std::complex<double>(a, b) / double(k);
        }
        u.coef[0] -= circle_log_exp_integral(u);
        return u;
    }
    throw DomainError("cli", desc.kind + " is not a circle field");
}

std::vector<double> parse_legendre_series(std::string_view text) {
    std::vector<double> a;
    std::size_t i = 0;
    auto fail = [&](const std::string& what) {
        throw ParseError("cli", what + " at position " + std::to_string(i) + " in \"" + std::string(text) + "\"");
    };
    auto skip = [&] {
        while (i < text.size() && text[i] == ' ') ++i;
    };
    bool first = true;
    while (true) {
        skip();
        if (i == text.size()) {
            if (first) fail("empty series");
            break;
        }
        double sign = 1.0;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1.0 : 1.0;
            ++i;
            skip();
        } else if (!first) {
            fail("expected '+' or '-'");
        }
        first = false;
        double coef = 1.0;
        if (i < text.size() && text[i] != 'P') {
            const auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), coef);
            if (ec != std::errc()) fail("expected a coefficient");
            i = static_cast<std::size_t>(ptr - text.data());
            skip();
            if (i < text.size() && text[i] == '*') {
                ++i;
                skip();
                if (i >= text.size() || text[i] != 'P') fail("expected P<degree> after '*'");
            }
        }
        int degree = 0;
        if (i < text.size() && text[i] == 'P') {
            ++i;
            const auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), degree);
            if (ec != std::errc() || degree < 0 || degree > 512) fail("expected a degree in 0..512");
            i = static_cast<std::size_t>(ptr - text.data());
        }
        if (a.size() <= static_cast<std::size_t>(degree)) a.resize(degree + 1, 0.0);
        a[degree] += sign * coef;
    }
    if (a.empty() || std::abs(a[0] - 1.0) > 1e-12) throw ParseError("cli", "heat data must have constant term 1 (unit mass)");
    return a;
}

std::string format_legendre_series(const std::vector<double>& a) {
    std::string out = a.empty() ? "0" : fmt(a[0]);
    for (std::size_t l = 1; l < a.size(); ++l) {
        if (a[l] == 0.0) continue;
        out += a[l] < 0.0 ? '-' : '+';
        out += fmt(std::abs(a[l])) + "*P" + std::to_string(l);
    }
    return out;
}

}  // namespace lhls
