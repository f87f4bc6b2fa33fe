#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "lhls/grids.hpp"

namespace lhls {

/// Nonnegative radial density on R^2 sampled on a RadialGrid.
struct RadialDensity {
    std::shared_ptr<const RadialGrid> grid;
    std::vector<double> values;

    double mass() const { return grid->integrate(values); }
    double at(double r) const { return r > grid->r_max() ? 0.0 : grid->interpolate(values, r); }
    RadialDensity scaled(double factor) const;
};

/// Nonnegative density on R^2 sampled at the cell centres of a CartesianGrid.
struct PlanarDensity {
    std::shared_ptr<const CartesianGrid> grid;
    std::vector<double> values;

    double mass() const { return grid->integrate(values); }
    /// Bilinear interpolation; zero outside the box.
    double at(double x1, double x2) const;
    PlanarDensity scaled(double factor) const;
};

RadialDensity sample_radial(std::shared_ptr<const RadialGrid> grid, const std::function<double(double)>& fn);
PlanarDensity sample_planar(std::shared_ptr<const CartesianGrid> grid,
                            const std::function<double(double, double)>& fn);

/// Rescale so the quadrature mass is exactly 1.
RadialDensity normalized(RadialDensity rho);
PlanarDensity normalized(PlanarDensity rho);

}  // namespace lhls
