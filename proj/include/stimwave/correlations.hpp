#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "stimwave/analytic.hpp"
#include "stimwave/optimize.hpp"
#include "stimwave/params.hpp"
#include "stimwave/quadrature.hpp"
#include "stimwave/special.hpp"

namespace stimwave {

namespace detail {

/// Two-path interference kernel of the second-order correlation function,
///   W(tau) = (1+q) e^{-damp tau/2} + (1-q) e^{-(delta/2 + i detuning) tau},
/// written through phi1 so it stays finite at the q pole. The e^{-damp tau/2}
/// component is the "first click from the field, then spontaneous emission"
/// path, the other one is the stimulated path.
inline cplx correlation_kernel(double tau, const SectorRates& s, double delta) {
    const cplx eps(0.5 * (s.damp - delta), -s.detuning);
    const cplx sp = std::exp(cplx(-0.5 * s.damp * tau, 0.0));
    const cplx st = std::exp(-cplx(0.5 * delta, s.detuning) * tau);
    return sp + st - s.feed * tau * sp * phi1(eps * tau);
}

inline double g2_general(double t, double tau, const SectorRates& s, double delta) {
    if (t < 0.0 || tau < 0.0) throw invalid_parameter_error("g2: t and tau must be >= 0");
    const cplx w = correlation_kernel(tau, s, delta);
    return delta * s.damp * std::exp(-(s.damp + delta) * t) * std::norm(w);
}

/// int_0^tau_final |W|^2 dtau by adaptive quadrature; the t integral of the
/// prefactor is exact (1/(damp+delta)).
inline double p2_general(double tau_final, const SectorRates& s, double delta) {
    if (tau_final < 0.0)
        throw invalid_parameter_error("p2_integrated: tau_final must be >= 0");
    if (tau_final == 0.0) return 0.0;
    const double pref = delta * s.damp / (s.damp + delta);
    const double w2 = integrate(
        [&](double tau) { return std::norm(correlation_kernel(tau, s, delta)); }, 0.0,
        tau_final, 1e-12, 1e-11);
    return pref * w2;
}

} // namespace detail

/// Density of probability for one detector click at t and one at t + tau,
///   G2(t, t+tau) = delta gamma e^{-(gamma+delta) t} |W(tau)|^2.
/// At delta = 3 gamma on resonance the spontaneous component cancels and the
/// decay in tau is a pure exponential at rate 3 gamma.
inline double g2(double t, double tau, const PhysParams& p) {
    p.validate();
    return detail::g2_general(t, tau, {p.gamma, p.gamma, p.detuning}, p.delta);
}

/// Same-mode correlation G2_aa of the two-continuum systems, with gamma' and
/// the halved coupling factor Q_f. Spontaneous-path extinction at
/// delta = 2 gamma' on resonance.
inline double g2_aa(double t, double tau, const PhysParams& p) {
    p.validate();
    const double gp = p.gamma_prime();
    return detail::g2_general(t, tau, {gp, 0.5 * gp, p.detuning}, p.delta);
}

/// Probability of detecting both photons within a window tau_final:
///   int_0^tau_final dtau int_0^inf dt G2(t, t+tau).
/// Converges to 1 (both photons are always eventually detected); fastest at
/// delta = 3 gamma on resonance.
inline double p2_integrated(double tau_final, const PhysParams& p) {
    p.validate();
    return detail::p2_general(tau_final, {p.gamma, p.gamma, p.detuning}, p.delta);
}

/// Infinite-detuning baseline of p2_integrated: the interference term washes
/// out and the two photons are detected independently,
///   p2 = (delta gamma/(gamma+delta)) [(1-e^{-gamma tau})/gamma + (1-e^{-delta tau})/delta].
inline double p2_integrated_baseline(double tau_final, const PhysParams& p) {
    p.validate();
    if (tau_final < 0.0)
        throw invalid_parameter_error("p2_integrated_baseline: tau_final must be >= 0");
    const double g = p.gamma, d = p.delta;
    return (d * g / (g + d)) *
           (-std::expm1(-g * tau_final) / g - std::expm1(-d * tau_final) / d);
}

/// Time needed to collect a fraction `level` of the asymptotic two-photon
/// detection probability (bisection on the quadrature).
inline double p2_convergence_time(const PhysParams& p, double level = 0.95,
                                  bool baseline = false) {
    p.validate();
    if (!(level > 0.0 && level < 1.0))
        throw invalid_parameter_error("p2_convergence_time: level must be in (0, 1)");
    const auto p2 = [&](double tf) {
        return baseline ? p2_integrated_baseline(tf, p) : p2_integrated(tf, p);
    };
    const double horizon = 60.0 / std::min(p.gamma, p.delta);
    const double target = level * p2(horizon);
    return bisect_root([&](double tf) { return p2(tf) - target; }, 0.0, horizon, 1e-9);
}

/// Detector-frame single-photon wavepackets (retarded time u >= 0, rotating
/// at the atomic frequency). The freely propagating pulse and the photon a
/// bare atom emits at total rate gamma_total.
inline cplx pulse_wavepacket(double u, double delta, double detuning) {
    if (u < 0.0) return 0.0;
    return std::sqrt(delta) * std::exp(-cplx(0.5 * delta, detuning) * u);
}

inline cplx spontaneous_wavepacket(double u, double gamma_total) {
    if (u < 0.0) return 0.0;
    return std::sqrt(gamma_total) * std::exp(-0.5 * gamma_total * u);
}

/// Asymptotic (freely propagating) two-photon amplitude in the detector
/// frame for a single-continuum problem with damp == feed == gamma_total.
/// Normalized so the total pair probability is 1:
///   phi(u1, u2) = (1/2) sqrt(delta gamma) e^{-i dL u<} e^{-(gamma+delta) u< / 2} W(|u2-u1|).
inline cplx two_photon_out(double u1, double u2, double gamma_total, double delta,
                           double detuning) {
    if (u1 < 0.0 || u2 < 0.0) return 0.0;
    const double lead = std::min(u1, u2);
    const double tau = std::abs(u2 - u1);
    const cplx w =
        detail::correlation_kernel(tau, {gamma_total, gamma_total, detuning}, delta);
    return 0.5 * std::sqrt(delta * gamma_total) *
           std::exp(cplx(-0.5 * (gamma_total + delta) * lead, -detuning * lead)) * w;
}

} // namespace stimwave
