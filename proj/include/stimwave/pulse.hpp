#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "stimwave/errors.hpp"
#include "stimwave/grid.hpp"
#include "stimwave/params.hpp"
#include "stimwave/special.hpp"

namespace stimwave {

/// Single-photon wavepacket at t = 0 in the rotating frame: an exponential
/// profile sqrt(delta) e^{delta r / 2} on r <= 0, as emitted by a neighboring
/// atom of linewidth delta, normalized to unit discrete norm on the grid.
struct Pulse {
    std::vector<cplx> amplitude;  // samples on the grid nodes
    Grid1D grid;
    double width = 1.0;      // delta
    double detuning = 0.0;   // delta_L
    double norm_scale = 1.0; // amplitude[j] = norm_scale * sqrt(width) e^{width r/2}

    /// Trapezoid-consistent discrete norm: the edge node at r = 0 stores the
    /// average across the step-function jump and carries twice the weight.
    double discrete_norm() const {
        double s = 0.0;
        for (const cplx& a : amplitude) s += std::norm(a);
        s += std::norm(amplitude[static_cast<std::size_t>(grid.index_of_origin())]);
        return s * grid.dr;
    }

    /// Continuum profile behind the grid samples (used for the transport
    /// fill-in left of the stored domain). Step convention: value 1/2 at r=0.
    cplx initial_amplitude(double r) const {
        if (r > 0.0) return 0.0;
        const double v = norm_scale * std::sqrt(width) * std::exp(0.5 * width * r);
        return (r == 0.0) ? 0.5 * v : v;
    }
};

/// Sample and normalize the exponential pulse on the grid. The grid must
/// hold all but 1e-6 of the continuum norm (the tail beyond r_min carries
/// e^{delta r_min} of it).
inline Pulse make_exponential_pulse(const PhysParams& p, const Grid1D& g) {
    p.validate();
    const double tail = std::exp(p.delta * g.r_min());
    if (tail > 1e-6)
        throw domain_too_small_error(
            "grid too short for the pulse: norm fraction beyond r_min is " +
            std::to_string(tail) + " (> 1e-6); extend r_min to -30/delta");

    Pulse pulse;
    pulse.grid = g;
    pulse.width = p.delta;
    pulse.detuning = p.detuning;
    pulse.amplitude.assign(static_cast<std::size_t>(g.n_cells()), cplx(0.0, 0.0));

    const double a = std::sqrt(p.delta);
    for (int j = 0; j <= g.n_left; ++j) {
        const double r = g.r(j);
        double v = a * std::exp(0.5 * p.delta * r);
        if (j == g.n_left) v *= 0.5; // Theta(0) = 1/2 at the pulse edge
        pulse.amplitude[static_cast<std::size_t>(j)] = v;
    }

    double norm = pulse.discrete_norm();
    const double scale = 1.0 / std::sqrt(norm);
    for (cplx& v : pulse.amplitude) v *= scale;
    pulse.norm_scale = scale;
    return pulse;
}

} // namespace stimwave
