#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "lhls/densities.hpp"

namespace lhls {

// ---------------------------------------------------------------------------
// Heat flow on S^2 for axisymmetric densities ρ(z) = Σ a_l P_l(z).

struct HeatState {
    std::vector<double> a;   // a_0 = 1
    double t = 0.0;

    double density(double z) const;
};

/// Legendre projection of a zonal density; a_0 must equal 1 within 1e-10.
HeatState heat_state_from_function(const std::function<double(double)>& rho, int lmax);

/// a_l ↦ a_l e^{-l(l+1)t}. Negative t runs the (exact, band-limited) flow backward.
HeatState heat_evolve(const HeatState& s, double t);

/// H(1 ‖ ρ) = -∫log ρ dσ. Throws DomainError when ρ ≤ 0 on the quadrature.
double heat_entropy(const HeatState& s);

/// ∫|∇ log ρ|^2 dσ.
double heat_dissipation(const HeatState& s);

struct DissipationCheck {
    double lhs = 0.0;        // centered difference of H(1‖ρ(t))
    double rhs = 0.0;        // -∫|∇ log ρ(t)|^2
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

DissipationCheck dissipation_check(const HeatState& s, double dt);

struct DecayEntry {
    double t = 0.0;
    double entropy = 0.0;
    double bound = 0.0;   // e^{-4t} H(1‖ρ(0))
    bool pass = false;
};

struct DecayReport {
    double initial_entropy = 0.0;
    std::vector<DecayEntry> entries;
    bool all_pass() const;
};

DecayReport decay_check(const HeatState& s, const std::vector<double>& times);

nlohmann::json to_json(const DissipationCheck& c);
nlohmann::json to_json(const DecayReport& r);

// ---------------------------------------------------------------------------
// Radial critical-mass Keller–Segel flow through the cumulative mass
// M(r) = ∫_{|x|<r} ρ, which obeys M_t = M_rr - M_r/r + M M_r/(2πr).

inline constexpr double kCriticalMass = 8.0 * 3.14159265358979323846;

struct KSOptions {
    int n = 1024;            // mesh nodes, uniform in log r
    double r_min = 1e-4;
    double r_max = 1e5;
    double T = 50.0;
    double dt0 = 1e-6;
    double dt_max = 0.05;
    double max_change = 2e-3;   // cap on max|ΔM|/8π per step
    int samples = 60;           // log-spaced sample times in addition to t = 0
    double energy_tol = 1e-8;
    double bound_tol = 1e-4;
};

struct KSState {
    std::vector<double> s;   // log r
    std::vector<double> M;   // cumulative mass; M.back() is the total
    double t = 0.0;
    double dt = 0.0;
};

struct KSSample {
    double t = 0.0;
    double free_energy = 0.0;   // 𝓗(ρ/8π)
    double distance = 0.0;      // inf_s ‖ρ - 8π h_s‖_1
    double scale = 0.0;         // minimizing s
    double dissipation = 0.0;   // -d𝓗/dt over the last step
    double mass_error = 0.0;
    bool bound_holds = false;   // d ≤ 8π sqrt(8𝓗) + tol
};

struct FlowTrajectory {
    std::vector<KSSample> samples;
    KSState final_state;
    long steps = 0;
    double max_energy_increase = 0.0;   // worst per-step increase of 𝓗
    double max_mass_error = 0.0;
    double min_mass_increment = 0.0;    // < 0 would break monotonicity of M
    double max_drift_L1 = 0.0;          // sup_t ‖ρ(t) - ρ(0)‖_1
    bool energy_monotone = false;
    bool bound_holds = false;
};

/// Mesh values of M for the density ρ(|x|). Throws DomainError unless the
/// total mass is 8π within 1e-6.
KSState ks_initial_state(const std::function<double(double)>& rho, const KSOptions& opt = {});
KSState ks_initial_state(const RadialDensity& rho, const KSOptions& opt = {});

/// 𝓗(ρ/8π) for the density encoded by a state.
double ks_free_energy(const KSState& st);
/// inf_s ‖ρ - 8π h_s‖_1 and the minimizing s.
std::pair<double, double> ks_distance(const KSState& st);
/// ‖ρ_a - ρ_b‖_1 for states on the same mesh.
double ks_L1(const KSState& a, const KSState& b);

FlowTrajectory ks_evolve(const KSState& initial, const KSOptions& opt = {});

struct RateFit {
    double entropy_exponent = 0.0;    // slope of log 𝓗 against log t
    double distance_exponent = 0.0;   // slope of log d against log t
    bool defined = false;
    bool entropy_consistent = false;   // 𝓗 t^{1/8}: late sup ≤ early sup
    bool distance_consistent = false;  // d t^{1/16}: late sup ≤ early sup
    double window_start = 0.0;
    double window_end = 0.0;
    std::string note;
};

/// Least-squares exponents over the samples with t in [T/100, T].
/// Throws ParameterError when the samples span less than two decades.
RateFit ks_rate_fit(const FlowTrajectory& traj);

void write_csv(std::ostream& os, const FlowTrajectory& traj);
nlohmann::json to_json(const FlowTrajectory& traj, const KSOptions& opt);
nlohmann::json to_json(const RateFit& fit);

}  // namespace lhls
