#pragma once

#include <cmath>
#include <string>

#include "stimwave/errors.hpp"

namespace stimwave {

/// Atom and pulse constants. Internally the library works in units with
/// c = 1, and all observables depend only on the ratios delta/gamma and
/// detuning/gamma, so rates may be given in any consistent unit.
///
///   gamma      - spontaneous decay rate into the 1D channel
///   delta      - linewidth of the incident exponential pulse
///   detuning   - pulse carrier frequency minus atomic transition frequency
///   beta       - fraction of emission funneled into the 1D channel
///   gamma_star - pure dephasing rate (enters only the trust factor)
struct PhysParams {
    double gamma = 1.0;
    double delta = 1.0;
    double detuning = 0.0;
    double beta = 1.0;
    double gamma_star = 0.0;

    /// Total decay rate of the two-continuum systems (transmitting guide,
    /// lambda atom): both have twice the resonant modes of the half guide.
    double gamma_prime() const { return 2.0 * gamma; }

    void validate() const {
        if (!(gamma > 0.0) || !std::isfinite(gamma))
            throw invalid_parameter_error("gamma must be positive and finite");
        if (!(delta > 0.0) || !std::isfinite(delta))
            throw invalid_parameter_error("delta must be positive and finite");
        if (!std::isfinite(detuning))
            throw invalid_parameter_error("detuning must be finite");
        if (!(beta >= 0.0 && beta <= 1.0))
            throw invalid_parameter_error("beta must lie in [0, 1]");
        if (!(gamma_star >= 0.0) || !std::isfinite(gamma_star))
            throw invalid_parameter_error("gamma_star must be nonnegative");
    }
};

/// Rescale so that gamma = 1 (times are then in units of 1/gamma and
/// positions in units of c/gamma). Dimensionless observables are invariant.
inline PhysParams nondimensionalize(const PhysParams& p) {
    if (!(p.gamma > 0.0) || !std::isfinite(p.gamma))
        throw invalid_parameter_error("nondimensionalize: gamma must be positive");
    PhysParams out = p;
    out.gamma = 1.0;
    out.delta = p.delta / p.gamma;
    out.detuning = p.detuning / p.gamma;
    out.gamma_star = p.gamma_star / p.gamma;
    return out;
}

} // namespace stimwave
