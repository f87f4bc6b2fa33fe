#include "lhls/densities.hpp"

#include <algorithm>
#include <cmath>

#include "lhls/errors.hpp"

namespace lhls {

RadialDensity RadialDensity::scaled(double factor) const {
    RadialDensity out = *this;
    for (double& v : out.values) v *= factor;
    return out;
}

PlanarDensity PlanarDensity::scaled(double factor) const {
    PlanarDensity out = *this;
    for (double& v : out.values) v *= factor;
    return out;
}

double PlanarDensity::at(double x1, double x2) const {
    const auto& g = *grid;
    const double fi = (x1 + g.half_width()) / g.spacing() - 0.5;
    const double fj = (x2 + g.half_width()) / g.spacing() - 0.5;
    if (fi < -0.5 || fj < -0.5 || fi > g.n() - 0.5 || fj > g.n() - 0.5) return 0.0;
    const int i0 = std::clamp(static_cast<int>(std::floor(fi)), 0, g.n() - 2);
    const int j0 = std::clamp(static_cast<int>(std::floor(fj)), 0, g.n() - 2);
    const double a = std::clamp(fi - i0, 0.0, 1.0), b = std::clamp(fj - j0, 0.0, 1.0);
    return (1 - a) * (1 - b) * values[g.index(i0, j0)] + a * (1 - b) * values[g.index(i0 + 1, j0)] +
           (1 - a) * b * values[g.index(i0, j0 + 1)] + a * b * values[g.index(i0 + 1, j0 + 1)];
}

RadialDensity sample_radial(std::shared_ptr<const RadialGrid> grid, const std::function<double(double)>& fn) {
    RadialDensity rho{grid, std::vector<double>(grid->size())};
    for (std::size_t i = 0; i < grid->size(); ++i) rho.values[i] = fn(grid->nodes()[i]);
    return rho;
}

PlanarDensity sample_planar(std::shared_ptr<const CartesianGrid> grid,
                            const std::function<double(double, double)>& fn) {
    PlanarDensity rho{grid, std::vector<double>(grid->size())};
    for (int i = 0; i < grid->n(); ++i)
        for (int j = 0; j < grid->n(); ++j) rho.values[grid->index(i, j)] = fn(grid->coord(i), grid->coord(j));
    return rho;
}

RadialDensity normalized(RadialDensity rho) {
    const double m = rho.mass();
    if (!(m > 0.0)) throw NormalizationError("densities", "cannot normalize a density with zero mass");
    return rho.scaled(1.0 / m);
}

PlanarDensity normalized(PlanarDensity rho) {
    const double m = rho.mass();
    if (!(m > 0.0)) throw NormalizationError("densities", "cannot normalize a density with zero mass");
    return rho.scaled(1.0 / m);
}

}  // namespace lhls
