#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lhls/densities.hpp"
#include "lhls/flows.hpp"
#include "lhls/functionals.hpp"
#include "lhls/sphere.hpp"

namespace lhls {

// Text form of test inputs:
//
//   kind[:key=value,key=value,...]
//   mixture[w*component;w*component;...]
//   8pi*<planar descriptor>    (Keller–Segel data, mass 8π)
//
// Kinds and keys, in canonical order (omitted keys take the defaults):
//   gaussian             sigma=1, x1=0, x2=0
//   optimizer            s=1, x1=0, x2=0
//   perturbed-optimizer  eps, mode=2, s=1          |eps| ≤ ½, mode ≥ 1
//   sphere-optimizer     t=0, theta=0, phi=0       t ∈ [0, 20]
//   band-limited-random  seed, L=6, amplitude=0.5  1 ≤ L ≤ 64
//   circle-poisson       r=0, alpha=0              0 ≤ r < 1
//   circle-perturbed     r=0, alpha=0, eps, seed=1, K=4
//
// Heat-flow data use a separate Legendre series form, e.g. "1+0.5*P1".

enum class DescriptorDomain { planar, sphere, circle };

struct Descriptor {
    std::string kind;
    std::vector<std::pair<std::string, double>> params;      // canonical order, all keys present
    std::vector<std::pair<double, Descriptor>> components;     // mixture only
    bool critical_mass = false;                               // "8pi*" prefix

    double param(const std::string& key) const;
    DescriptorDomain domain() const;
    /// Planar kinds that depend on |x| only.
    bool radial() const;
};

/// Throws ParseError naming the character position of the problem.
Descriptor parse_descriptor(std::string_view text);
/// Canonical text; parse(format(s)) == s.
std::string format_descriptor(const Descriptor& desc);

/// Unit-mass planar density as a function of (x1, x2).
std::function<double(double, double)> planar_function(const Descriptor& desc);

RadialDensity build_radial(const Descriptor& desc, std::shared_ptr<const RadialGrid> grid);
PlanarDensity build_planar(const Descriptor& desc, std::shared_ptr<const CartesianGrid> grid);

/// Log-density u with ∫e^u dσ = 1.
SphereField build_sphere_field(const Descriptor& desc, std::shared_ptr<const SphereGrid> grid);
/// Log-density u with ∫e^u dσ = 1.
CircleField build_circle_field(const Descriptor& desc);

/// "a0+a1*P1+a2*P2..." with a0 = 1 required by the heat flow.
std::vector<double> parse_legendre_series(std::string_view text);
std::string format_legendre_series(const std::vector<double>& a);

}  // namespace lhls
