#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lhls/optimizers.hpp"

namespace lhls {

struct CertificateOptions {
    double abs_tol = 1e-6;
    double rel_tol = 1e-4;   // relative to |value|
    bool oracle = false;     // cross-check the search with a dense sweep
};

/// value ≥ constant·distance², certified when gap = value - constant·distance² ≥ -tol.
struct StabilityCertificate {
    std::string inequality;
    double value = 0.0;
    double constant = 0.0;
    double distance = 0.0;
    double gap = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string grid;
    nlohmann::json search = nlohmann::json::object();
};

nlohmann::json to_json(const StabilityCertificate& c);

/// 𝓗(ρ) ≥ (1/8) inf ‖ρ - g‖_1^2 over the planar optimizers.
StabilityCertificate planar_stability_certificate(const RadialDensity& rho, const CertificateOptions& opt = {});
StabilityCertificate planar_stability_certificate(const PlanarDensity& rho, const CertificateOptions& opt = {});

/// 𝓗_S(f) ≥ (1/8) inf ‖(f + 1) - e^v‖_1^2 over v ∈ M_O.
StabilityCertificate spherical_stability_certificate(const SphereField& f, const CertificateOptions& opt = {});

struct OnofriCertificates {
    StabilityCertificate gradient;   // (1/8) inf ∫|∇u - ∇v|^2
    StabilityCertificate entropy;    // (1/2) inf H(e^v | e^u)
    StabilityCertificate l1;         // (1/4) inf ‖e^u - e^v‖_1^2
    Recentered recentered;
};

/// The three stability forms of J(u) ≥ 0. Searches start from the member
/// singled out by conformal recentering.
OnofriCertificates onofri_stability_certificates(const SphereField& u, const CertificateOptions& opt = {});

/// (1/8)∫|∇u|^2 - log∫e^u + ∫u for u with vanishing barycentre (|b| ≤ 1e-8).
double constrained_onofri_gap(const SphereField& u);

/// LM(u) ≥ (1/4) inf ‖e^u - e^v‖_1^2 over the Poisson family.
StabilityCertificate circle_stability_certificate(const CircleField& u, const CertificateOptions& opt = {});

/// Term-by-term replay of the duality argument that turns Onofri stability
/// into log-HLS stability on S^2, for mean-zero f with f + 1 > 0 and
/// u = 2Gf normalized so that ∫e^u = 1.
struct TransferChain {
    double young_lhs = 0.0;        // 𝓔(u) + 𝓔*(f) - ⟨u, f⟩
    double young_rhs = 0.0;        // ½‖(f + 1) - e^u‖_1^2
    double onofri_lhs = 0.0;       // 𝓕(u) - 𝓔(u)
    double onofri_rhs = 0.0;       // ¼‖e^u - e^{u0}‖_1^2
    double dual_gap = 0.0;         // 𝓔*(f) - 𝓕*(f)
    double quarter_sum = 0.0;      // ¼(a^2 + b^2)
    double eighth_square = 0.0;    // (1/8)(a + b)^2
    double final_rhs = 0.0;        // (1/8)‖(f + 1) - e^{u0}‖_1^2
    bool young_holds = false;
    bool onofri_holds = false;
    bool sum_holds = false;
    bool square_holds = false;
    bool triangle_holds = false;
    bool all() const { return young_holds && onofri_holds && sum_holds && square_holds && triangle_holds; }
};

TransferChain transfer_chain(const SphereField& f, double tol = 1e-9);

/// A pair 𝓔 ≤ 𝓕 of convex functions on [-box, box]^n, n ∈ {1, 2}.
struct ConvexPair {
    int dimension = 1;
    std::function<double(const std::vector<double>&)> E;
    std::function<double(const std::vector<double>&)> F;
    double C = 1.0;        // 𝓕 - 𝓔 ≥ C dist(x, E0)^2
    double lambda = 0.25;  // λ-convexity of 𝓔*
    double box = 3.0;
    int primal_points = 0;   // per axis; 0 picks 401 (1D) or 101 (2D)
    int dual_points = 0;     // per axis; 0 picks 401 (1D) or 200 (2D)
    double slack = 2e-2;
    /// Optional closed forms for the conjugates.
    std::function<double(const std::vector<double>&)> E_star_exact;
    std::function<double(const std::vector<double>&)> F_star_exact;
};

struct DualityReport {
    double max_order_violation = 0.0;       // max(𝓕* - 𝓔*) on the dual grid
    double max_transform_error = 0.0;       // vs closed forms, if given
    double min_transfer_margin = 0.0;       // min of 𝓔* - 𝓕* - (λμ/2)dist^2
    double max_transfer_residual = 0.0;     // max |𝓔* - 𝓕* - (λμ/2)dist^2|
    double max_lipschitz_excess = 0.0;      // max of |∇𝓔*(y) - ∇𝓔*(y')| - |y - y'|/(2λ)
    double max_young_violation = 0.0;       // max of ⟨x,y⟩ - 𝓔(x) - 𝓔*(y)
    double max_equality_set_gap = 0.0;      // max over x ∈ E0 of 𝓔*(∇𝓔(x)) - 𝓕*(∇𝓔(x))
    double mu = 0.0;
    std::size_t primal_equality_points = 0;
    std::size_t dual_equality_points = 0;
    bool order_holds = false;
    bool equality_sets_match = false;
    bool transfer_holds = false;
    bool lipschitz_holds = false;
    bool young_holds = false;
    bool all() const { return order_holds && equality_sets_match && transfer_holds && lipschitz_holds && young_holds; }
};

nlohmann::json to_json(const DualityReport& r);

DualityReport toy_duality_demo(const ConvexPair& pair);

/// The 1D pair 𝓔(x) = x^2, 𝓕(x) = 2x^2 with its closed-form conjugates.
ConvexPair quadratic_pair_1d();
/// 𝓔(x) = x1² + 2x2², 𝓕(x) = 2x1² + 3x2²; the transferred bound holds with slack.
ConvexPair anisotropic_pair_2d();

}  // namespace lhls
