#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "stimwave/params.hpp"
#include "stimwave/qfactor.hpp"
#include "stimwave/quadrature.hpp"
#include "stimwave/special.hpp"

namespace stimwave {

namespace detail {

/// Rates of the generalized single-excitation problem
///   [d/dt + c d/dr] psi = -(damp/2) psi - feed Theta(r) Theta(t - r/c)
///                          e^{-i detuning r/c} psi(-r, t - r/c).
/// Semi-infinite guide: damp = feed = gamma. Even sector of a transmitting
/// guide: damp = feed = gamma'. Lambda atom: damp = gamma', feed = gamma'/2
/// (only the stimulated channel feeds back).
struct SectorRates {
    double damp = 1.0;
    double feed = 1.0;
    double detuning = 0.0;
};

/// Closed-form rotating-frame amplitude for the exponential pulse, valid for
/// 0 <= r <= t. Written with phi1 so it stays finite through the removable
/// singularity at delta == damp, zero detuning.
inline cplx psi_interacting(double r, double t, const SectorRates& s, double delta) {
    const cplx eps(0.5 * (s.damp - delta), -s.detuning);
    const cplx free_part = std::exp(cplx(-0.5 * delta * (t - r), 0.0));
    const cplx decay = std::exp(cplx(-0.5 * s.damp, s.detuning) * (t - r));
    const cplx grow = std::exp(eps * t);
    return std::sqrt(delta) * std::exp(-0.5 * s.damp * t) *
           (free_part - s.feed * r * decay * grow * phi1(-eps * r));
}

/// Full closed-form field (all branches). Continuum normalization.
inline cplx psi_closed_form(double r, double t, const SectorRates& s, double delta) {
    if (r > t) return 0.0;  // nothing ahead of the light cone
    if (r <= 0.0)           // incoming pulse, transported and damped
        return std::sqrt(delta) * std::exp(0.5 * delta * (r - t)) *
               std::exp(-0.5 * s.damp * t);
    return psi_interacting(r, t, s, delta);
}

/// Excited-state population of the generalized problem. Three evaluation
/// routes: the closed form away from the removable singularity of
/// q = 2 feed / (damp - delta - 2i detuning), an exact limit expression at
/// it, and a quadrature of the stable field in the crossover annulus.
inline double rho_ee_general(double t, const SectorRates& s, double delta) {
    if (t <= 0.0) return 1.0;
    const double X = s.damp;
    const cplx eps(0.5 * (X - delta), -s.detuning);
    const double ae = std::abs(eps);

    double value;
    if (ae > 1e-4 * X) {
        // closed form with the decaying prefactor distributed into every
        // term (all exponents nonpositive, no overflow for any parameters)
        const cplx q = s.feed / eps;
        const double q2 = std::norm(q);
        const cplx a(0.5 * (X + delta), s.detuning);
        const double e_all = std::exp(-(X + delta) * t);
        value = e_all + std::norm(1.0 + q) * (std::exp(-X * t) - e_all) +
                q2 * (delta / X) * (std::exp(-delta * t) - e_all) -
                2.0 * ((std::conj(q) + q2) * (delta / a) *
                       (std::exp(-std::conj(a) * t) - e_all))
                          .real();
    } else if (ae <= 1e-8 * X) {
        // limit delta -> damp, detuning -> 0 of the closed form
        const double f = s.feed;
        const double A = 1.0 - f * t;
        const double m0 = exp_moment0(X, t);
        const double m1 = exp_moment1(X, t);
        const double m2 = exp_moment2(X, t);
        value = std::exp(-2.0 * X * t) +
                X * std::exp(-X * t) * (A * A * m0 + 2.0 * A * f * m1 + f * f * m2);
    } else {
        // near-singular: the closed form cancels badly, the limit form is not
        // yet exact; integrate |psi|^2 with the stable field instead
        const double body = integrate_gl(
            [&](double r) { return std::norm(psi_interacting(r, t, s, delta)); }, 0.0,
            t, 12);
        value = std::exp(-(X + delta) * t) + body;
    }
    return std::clamp(value, 0.0, 1.0);
}

} // namespace detail

/// Excited-state population rho_ee(t) of the initially inverted atom in the
/// semi-infinite guide stimulated by the exponential single-photon pulse.
inline double rho_ee(double t, const PhysParams& p) {
    p.validate();
    return detail::rho_ee_general(t, {p.gamma, p.gamma, p.detuning}, p.delta);
}

/// Population at the best stimulation point delta = 3 gamma on resonance:
/// rho_ee = -2 e^{-4 gamma t} + 3 e^{-3 gamma t}.
inline double rho_ee_optimal(double t, double gamma) {
    return -2.0 * std::exp(-4.0 * gamma * t) + 3.0 * std::exp(-3.0 * gamma * t);
}

/// Population of the two-level atom in a transmitting guide: the even sector
/// carries the stimulated dynamics at gamma' = 2 gamma, the odd photon path
/// leaves the atom to bare spontaneous decay.
inline double rho_ee_full(double t, const PhysParams& p) {
    p.validate();
    const double gp = p.gamma_prime();
    return 0.5 * detail::rho_ee_general(t, {gp, gp, p.detuning}, p.delta) +
           0.5 * std::exp(-gp * t);
}

/// Adimensional effective lifetime gamma * int_0^inf rho_ee dt on resonance:
///   tau_eff = 1 - 4 gamma/(gamma+delta) + 8 gamma^2/(gamma+delta)^2.
/// Minimum 1/2 at delta = 3 gamma; 1 at delta = gamma and for delta -> inf.
inline double tau_eff(double gamma, double delta) {
    if (!(gamma > 0.0)) throw invalid_parameter_error("tau_eff: gamma must be positive");
    if (!(delta >= 0.0)) throw invalid_parameter_error("tau_eff: delta must be nonnegative");
    const double g = gamma / (gamma + delta);
    return 1.0 - 4.0 * g + 8.0 * g * g;
}

/// d tau_eff / d delta (used to refine the minimum to machine precision).
inline double tau_eff_ddelta(double gamma, double delta) {
    const double s = gamma + delta;
    return 4.0 * gamma / (s * s) - 16.0 * gamma * gamma / (s * s * s);
}

/// Total decay coefficient of the Einstein rate-equation picture,
///   gamma (1 - beta)(1 + n_l) + gamma beta (1 + n_k).
/// With beta = 1 a single stimulating photon doubles the decay rate.
inline double einstein_rate(double beta, int n_k, int n_l, double gamma) {
    if (!(beta >= 0.0 && beta <= 1.0))
        throw invalid_parameter_error("einstein_rate: beta must lie in [0, 1]");
    if (n_k < 0 || n_l < 0)
        throw invalid_parameter_error("einstein_rate: photon numbers must be nonnegative");
    return gamma * ((1.0 - beta) * (1.0 + n_l) + beta * (1.0 + n_k));
}

/// Residual d rho/dt + 2 gamma rho for the delta = 3 gamma solution:
///   4 gamma e^{-4 gamma t} - 3 gamma e^{-3 gamma t}.
/// Nonzero for generic t: the exact dynamics obey no rate equation.
inline double rate_equation_residual(double t, double gamma) {
    return 4.0 * gamma * std::exp(-4.0 * gamma * t) -
           3.0 * gamma * std::exp(-3.0 * gamma * t);
}

/// Closed-form rotating-frame single-photon amplitude (the solution of the
/// delayed advection equation for the exponential pulse). Oracle for the
/// grid solver.
inline cplx psi_closed_form(double r, double t, const PhysParams& p) {
    p.validate();
    return detail::psi_closed_form(r, t, {p.gamma, p.gamma, p.detuning}, p.delta);
}

} // namespace stimwave
