#pragma once

#include <array>
#include <string>

#include "lhls/densities.hpp"
#include "lhls/functionals.hpp"
#include "lhls/geometry.hpp"

namespace lhls {

/// Member h_{s,x0}(x) = s^{-2} h(x/s - x0) of the planar optimizer family,
/// h(x) = 1/(π(1+|x|^2)^2). Its centre is s·x0.
struct PlanarOptimizerParams {
    double s = 1.0;
    std::array<double, 2> x0{0.0, 0.0};
};

/// Search box for log s.
inline constexpr double kLogScaleBox = 6.0;

double planar_optimizer_value(const PlanarOptimizerParams& p, double x1, double x2);
/// Radial realization; requires x0 = 0.
RadialDensity planar_optimizer(const PlanarOptimizerParams& p, std::shared_ptr<const RadialGrid> grid);
PlanarDensity planar_optimizer(const PlanarOptimizerParams& p, std::shared_ptr<const CartesianGrid> grid);

/// u_{t,n}(ω) = -2 log(cosh t + sinh t n·ω); ∫e^u dσ = 1.
using SphereOptimizerParams = ConformalParams;
double sphere_optimizer_value(const SphereOptimizerParams& p, const Vec3& omega);
SphereField sphere_optimizer(const SphereOptimizerParams& p, std::shared_ptr<const SphereGrid> grid);

/// Normalized Poisson kernel e^u = (1 - r^2)/(1 - 2r cos(θ - α) + r^2).
struct CircleOptimizerParams {
    double r = 0.0;
    double alpha = 0.0;
};

inline constexpr double kCircleRadiusCap = 1.0 - 1e-6;

double circle_optimizer_density(const CircleOptimizerParams& p, double theta);
/// Truncated Fourier series of log of the kernel; bandwidth 0 picks one that
/// resolves r^k/k to 1e-17.
CircleField circle_optimizer(const CircleOptimizerParams& p, int bandwidth = 0);

struct SearchInfo {
    int evaluations = 0;
    int starts = 0;
    bool boundary_warning = false;
    std::string note;
};

struct NearestPlanar {
    PlanarOptimizerParams params;
    double distance = 0.0;
    SearchInfo info;
};

/// argmin over the family of ‖ρ - h_{s,x0}‖_1, the mass of h_{s,x0} outside
/// the grid counted in full. The radial version is pinned to x0 = 0.
NearestPlanar nearest_planar_L1(const RadialDensity& rho);
NearestPlanar nearest_planar_L1(const PlanarDensity& rho);

/// ‖ρ - h_{s,x0}‖_1 as evaluated by the searches.
double planar_L1_to_optimizer(const RadialDensity& rho, double s);
double planar_L1_to_optimizer(const PlanarDensity& rho, const PlanarOptimizerParams& p);

struct NearestSphere {
    SphereOptimizerParams params;
    double value = 0.0;
    SearchInfo info;
};

/// ∫u_{t,n} dσ = -2(t coth t - 1).
double sphere_optimizer_mean(double t);
/// ∫|∇u_{t,n}|^2 dσ = 8(t coth t - 1).
double sphere_optimizer_dirichlet(double t);

/// Searches over (t, n) ∈ [0, 20] × S^2. Each starts from t = 0, from the
/// member whose barycentre matches that of e^u, and from any extra starts.
/// argmin of H(e^u | e^{u_{t,n}}) = ∫e^u (u - u_{t,n}) dσ.
NearestSphere nearest_sphere_entropy(const SphereField& u, const std::vector<SphereOptimizerParams>& extra = {});
/// argmin of H(e^{u_{t,n}} | e^u).
NearestSphere nearest_sphere_reverse_entropy(const SphereField& u,
                                             const std::vector<SphereOptimizerParams>& extra = {});
/// argmin of ∫|∇(u - u_{t,n})|^2 dσ.
NearestSphere nearest_sphere_gradient(const SphereField& u, const std::vector<SphereOptimizerParams>& extra = {});
/// argmin of ‖ρ - e^{u_{t,n}}‖_1 for a density ρ (values, not logs).
NearestSphere nearest_sphere_L1(const SphereField& rho, const std::vector<SphereOptimizerParams>& extra = {});

/// The objectives of the searches above. The gradient and reverse-entropy
/// forms pair the spectrum of u with the exact zonal spectrum of u_{t,n}.
double sphere_entropy_to_optimizer(const SphereField& u, const SphereOptimizerParams& p);
double sphere_reverse_entropy_to_optimizer(const SphereField& u, const SphereOptimizerParams& p);
double sphere_gradient_to_optimizer(const SphereField& u, const SphereOptimizerParams& p);
double sphere_L1_to_optimizer(const SphereField& rho, const SphereOptimizerParams& p);

struct Recentered {
    SphereField field;
    ConformalMap map;
    double barycenter_norm = 0.0;
    int iterations = 0;
};

/// |∫e^u ω dσ| / ∫e^u dσ.
Vec3 sphere_barycenter(const SphereField& u);

/// Magnitude of the barycenter of e^{u_t}, (sinh t cosh t - t)/sinh^2 t.
double optimizer_barycenter_norm(double t);

/// Finds a conformal τ with barycenter of e^{U_τ} below tol. Throws
/// ConvergenceError when max_iter is exhausted.
Recentered recenter(const SphereField& u, double tol = 1e-10, int max_iter = 50);

struct NearestCircle {
    CircleOptimizerParams params;
    double distance = 0.0;
    SearchInfo info;
};

/// argmin over the Poisson family of ‖e^u - e^v‖_1 on n equispaced points.
NearestCircle nearest_circle_L1(const CircleField& u, int n = 0);

/// Nelder–Mead minimizer used by the searches; exposed for testing.
struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
};
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          double step, double ftol = 1e-14, int max_eval = 4000);

/// Golden-section minimization on [a, b].
SimplexResult golden_section(const std::function<double(double)>& f, double a, double b, double xtol = 1e-10);

}  // namespace lhls
