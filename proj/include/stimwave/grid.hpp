#pragma once

#include <cmath>
#include <string>

#include "stimwave/errors.hpp"
#include "stimwave/params.hpp"

namespace stimwave {

/// Space-time lattice aligned with the characteristics of the advection
/// equation: c*dt == dr exactly (c = 1 internally), and r = 0 sits on a
/// node so that the delayed lookups psi(-r, t - r/c) never interpolate.
struct Grid1D {
    double dr = 0.01;
    double dt = 0.01;
    int n_left = 0;   // nodes with r < 0
    int n_right = 0;  // nodes with r > 0
    int n_steps = 0;

    int n_cells() const { return n_left + n_right + 1; }
    double r_min() const { return -n_left * dr; }
    double r_max() const { return n_right * dr; }
    double t_max() const { return n_steps * dt; }
    double r(int j) const { return (j - n_left) * dr; }
    int index_of_origin() const { return n_left; }

    /// Build a characteristics-aligned grid. r_min/r_max are snapped to the
    /// lattice; dt must equal dr (configuration error otherwise).
    static Grid1D make(double r_min, double r_max, double dr, int n_steps,
                       double dt = -1.0) {
        if (!(dr > 0.0) || !std::isfinite(dr))
            throw invalid_parameter_error("grid spacing must be positive");
        if (dt < 0.0) dt = dr;
        if (std::abs(dt - dr) > 1e-12 * dr)
            throw cfl_error("characteristics-aligned grid requires c*dt == dr");
        if (!(r_min < 0.0) || !(r_max > 0.0))
            throw invalid_parameter_error("grid must contain r = 0 strictly inside");
        if (n_steps < 0)
            throw invalid_parameter_error("n_steps must be nonnegative");
        Grid1D g;
        g.dr = dr;
        g.dt = dr;
        g.n_left = static_cast<int>(std::lround(-r_min / dr));
        g.n_right = static_cast<int>(std::lround(r_max / dr));
        if (g.n_left < 1) g.n_left = 1;
        if (g.n_right < 1) g.n_right = 1;
        g.n_steps = n_steps;
        return g;
    }
};

/// Default grid for a run up to t_max: the left edge holds the exponential
/// pulse down to a 1e-13 amplitude tail (30/delta), the right edge covers
/// the light cone of the evolution window.
inline Grid1D default_grid(const PhysParams& p, double t_max, double dr = 0.01) {
    p.validate();
    if (!(t_max >= 0.0) || !std::isfinite(t_max))
        throw invalid_parameter_error("t_max must be nonnegative");
    const double left = 30.0 / p.delta;
    const int n_steps = static_cast<int>(std::ceil(t_max / dr - 1e-9));
    const double right = std::max(n_steps * dr, dr);
    return Grid1D::make(-left, right, dr, n_steps);
}

} // namespace stimwave
