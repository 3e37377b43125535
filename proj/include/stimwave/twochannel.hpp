#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "stimwave/correlations.hpp"
#include "stimwave/errors.hpp"
#include "stimwave/optimize.hpp"
#include "stimwave/params.hpp"
#include "stimwave/pulse.hpp"
#include "stimwave/two_photon.hpp"

namespace stimwave {

enum class TwoChannelSystem { transmitting, lambda };

/// Final-state weights of the channel-resolved photon pair.
struct ChannelProbabilities {
    double p_aa = 0.0;
    double p_ab = 0.0;
    double p_bb = 0.0;
    TwoChannelSystem system = TwoChannelSystem::transmitting;

    double sum() const { return p_aa + p_ab + p_bb; }
};

/// Cloning fidelity F = p_aa + p_ab/2 (5/6 is the universal optimum).
inline double cloning_fidelity(const ChannelProbabilities& p) {
    return p.p_aa + 0.5 * p.p_ab;
}

/// Even/odd decomposition of a channel-a photon in a transmitting guide:
/// |1_a> = (|1_o> + |1_e>)/sqrt(2). Only the even combination couples to the
/// atom (with sqrt(2) enhanced coupling, hence gamma' = 2 gamma); the odd
/// component propagates freely.
struct EvenOddSplit {
    Pulse even;
    Pulse odd;
};

inline EvenOddSplit even_odd_split(const Pulse& pulse) {
    EvenOddSplit s{pulse, pulse};
    const double w = 1.0 / std::sqrt(2.0);
    for (cplx& a : s.even.amplitude) a *= w;
    for (cplx& a : s.odd.amplitude) a *= w;
    return s;
}

inline Pulse recombine(const EvenOddSplit& s) {
    Pulse p = s.even;
    const double w = 1.0 / std::sqrt(2.0);
    for (std::size_t j = 0; j < p.amplitude.size(); ++j)
        p.amplitude[j] = w * (s.even.amplitude[j] + s.odd.amplitude[j]);
    p.norm_scale = s.even.norm_scale;  // same profile up to the 1/sqrt(2) pair
    return p;
}

namespace detail {

/// Overlap |<s|p>|^2 of the spontaneous wavepacket (rate gp) and the free
/// pulse: kappa = delta gp / (((gp+delta)/2)^2 + dL^2).
inline double wavepacket_overlap(double gp, double delta, double dl) {
    const double re = 0.5 * (gp + delta);
    return delta * gp / (re * re + dl * dl);
}

/// Branch-interference overlap of the transmitting system,
///   X = (1/2) Re < F | p (x) s >,
/// between the even-sector pair amplitude and the odd-branch product state.
/// Written in a form with the Q' pole removed (finite at delta = gp, dL = 0).
inline double branch_overlap(double gp, double delta, double dl) {
    const double a2 = 0.25 * (gp + delta) * (gp + delta) + dl * dl;  // |a|^2
    const double eps = delta - gp;
    const double s0 = 1.0 / gp + 1.0 / delta + (gp + delta) / a2;
    const double sq = -2.0 * gp * (0.25 * eps * eps + gp * delta) / (gp * delta * a2);
    return (delta * gp / (4.0 * (gp + delta))) * (s0 + sq);
}

/// Branch weights of the lambda final state. The raw expressions carry the
/// Q_f pole at delta = gamma', zero detuning; here the |eps'|^2 factor
/// (eps' = (gp - delta)/2 - i dL, x = Re eps', y = -Im eps') has been
/// cancelled algebraically, so every term below is finite and smooth through
/// the pole. c2 is the squared completeness constant of the raw assembly.
struct LambdaNorms {
    double nn_aa;  // weight of the two-photons-in-a branch (per unit c2)
    double nn_ab;  // weight of the one-a-one-b branch (per unit c2)
    double c2;

    double p_aa() const { return nn_aa / (nn_aa + nn_ab); }
};

inline LambdaNorms lambda_norms(double gp, double delta, double dl) {
    const double g = gp, f = 0.5 * gp;
    const double x = 0.5 * (g - delta), y = dl;
    const double m2 = x * x + y * y;
    const double gmx = g - x;                    // = (g + delta)/2
    const double a2 = gmx * gmx + y * y;         // |a|^2
    const double s = g + delta;

    // int |W_lambda|^2 dtau / |eps'|^2, with the removable singularity taken
    // out: the direction-dependent but bounded ratio tends to 1/g^2
    const double ratio =
        m2 > 0.0 ? (x * x / (g * delta) + y * y / a2) / m2 : 1.0 / (g * g);
    const double j_true = 2.0 * f * f * gmx / (g * delta * a2) + 1.0 / g +
                          1.0 / delta + 2.0 * gmx / a2 - 4.0 * f * ratio;
    const double nn_aa = 4.0 * (delta / s) * j_true;

    const double r1_true = 1.0 / s;
    const double r2_true = delta / (g * s) + f * f / (g * a2) +
                           2.0 * f * x * delta / (s * g * a2) -
                           2.0 * f * delta / (s * a2);
    const double nn_ab = 4.0 * (r1_true + r2_true);

    return {nn_aa, nn_ab, 1.0 / (nn_aa + nn_ab)};
}

} // namespace detail

/// Exact channel probabilities of the transmitting two-level atom: coherent
/// superposition of the odd free-photon branch and the even stimulated
/// branch, transformed back to the a/b channels.
inline ChannelProbabilities channel_probabilities_transmitting(const PhysParams& p) {
    p.validate();
    const double gp = p.gamma_prime();
    const double k = detail::wavepacket_overlap(gp, p.delta, p.detuning);
    const double x = detail::branch_overlap(gp, p.delta, p.detuning);
    ChannelProbabilities out;
    out.system = TwoChannelSystem::transmitting;
    out.p_aa = 0.125 + 0.125 * (1.0 + k) + x;
    out.p_bb = 0.125 + 0.125 * (1.0 + k) - x;
    out.p_ab = 0.25 + 0.25 * (1.0 - k);
    return out;
}

/// Exact channel probabilities of the lambda atom. Two photons in b would
/// require the atom to keep scattering after relaxing to |g_b>, where it is
/// transparent: p_bb = 0 structurally.
inline ChannelProbabilities channel_probabilities_lambda(const PhysParams& p) {
    p.validate();
    const auto n = detail::lambda_norms(p.gamma_prime(), p.delta, p.detuning);
    ChannelProbabilities out;
    out.system = TwoChannelSystem::lambda;
    out.p_aa = n.p_aa();
    out.p_ab = 1.0 - out.p_aa;
    out.p_bb = 0.0;
    return out;
}

/// Transmission fidelity of the transmitting guide, F^T = p_aa + p_ab/2.
inline double transmission_fidelity(const PhysParams& p) {
    return 0.5 + detail::branch_overlap(p.gamma_prime(), p.delta, p.detuning);
}

/// Channel-resolved final two-photon fields on the detector-frame lattice,
/// plus the exact probabilities of each channel pair.
struct ChannelFields {
    TwoPhotonField aa;
    TwoPhotonField ab;
    TwoPhotonField bb;  // empty for the lambda system (structurally zero)
    TwoChannelSystem system = TwoChannelSystem::transmitting;
    ChannelProbabilities exact;
};

struct FieldGridOptions {
    int n = 768;          // nodes per axis
    double extent = 0.0;  // detector-frame window; 0 = auto
};

namespace detail {

inline double auto_extent(double gp, double delta) {
    return 30.0 / std::min(gp, delta);
}

template <class F>
inline TwoPhotonField sample_field(int n, double dx, bool symmetric, double weight,
                                   const F& f) {
    TwoPhotonField out;
    out.n = n;
    out.x_lo = 0.0;
    out.dx = dx;
    out.symmetric = symmetric;
    out.norm_weight = weight;
    out.phi.assign(std::size_t(n) * n, cplx(0.0, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.phi[std::size_t(i) * n + j] = f(i * dx, j * dx);
    return out;
}

} // namespace detail

/// Transmitting guide: (1/sqrt(2)) [ |odd pulse> (x) |even spontaneous photon>
/// + |even-sector pair> ], rewritten in the a/b channels. The two branches
/// share the phase convention of the common initial state (real positive
/// pulse amplitude), and their interference is what makes p_bb nonzero.
inline ChannelFields final_fields_transmitting(const PhysParams& p,
                                               const FieldGridOptions& opt = {}) {
    p.validate();
    const double gp = p.gamma_prime();
    const double extent =
        opt.extent > 0.0 ? opt.extent : detail::auto_extent(gp, p.delta);
    const double dx = extent / (opt.n - 1);

    const auto pw = [&](double u) { return pulse_wavepacket(u, p.delta, p.detuning); };
    const auto sw = [&](double u) { return spontaneous_wavepacket(u, gp); };
    const auto F = [&](double u1, double u2) {
        return two_photon_out(u1, u2, gp, p.delta, p.detuning);
    };
    const double rt2 = 1.0 / std::sqrt(2.0);

    ChannelFields out;
    out.system = TwoChannelSystem::transmitting;
    out.aa = detail::sample_field(opt.n, dx, true, 2.0, [&](double u1, double u2) {
        return rt2 * (0.5 * F(u1, u2) +
                      0.25 * (pw(u1) * sw(u2) + sw(u1) * pw(u2)));
    });
    out.bb = detail::sample_field(opt.n, dx, true, 2.0, [&](double u1, double u2) {
        return rt2 * (0.5 * F(u1, u2) -
                      0.25 * (pw(u1) * sw(u2) + sw(u1) * pw(u2)));
    });
    out.ab = detail::sample_field(opt.n, dx, false, 1.0, [&](double ua, double ub) {
        return rt2 * (F(ua, ub) + 0.5 * (pw(ua) * sw(ub) - sw(ua) * pw(ub)));
    });
    out.exact = channel_probabilities_transmitting(p);
    return out;
}

/// Lambda atom: orthogonal branches labeled by the final atomic state. The
/// stimulated branch holds both photons in a; the spontaneous branch pairs a
/// b photon with the a pulse filtered by the atom while it was still excited.
inline ChannelFields final_fields_lambda(const PhysParams& p,
                                         const FieldGridOptions& opt = {}) {
    p.validate();
    const double gp = p.gamma_prime();
    const double feed = 0.5 * gp;
    const double extent =
        opt.extent > 0.0 ? opt.extent : detail::auto_extent(gp, p.delta);
    const double dx = extent / (opt.n - 1);

    const auto norms = detail::lambda_norms(gp, p.delta, p.detuning);
    const double c = std::sqrt(norms.c2);
    const cplx epsp(0.5 * (gp - p.delta), -p.detuning);
    const double sq_delta = std::sqrt(p.delta);

    // symmetric aa pair: c sqrt(delta) e^{-i dL u<} e^{-(gp+delta) u< /2} W(tau)
    const auto aa = [&](double u1, double u2) {
        const double lead = std::min(u1, u2);
        const double tau = std::abs(u2 - u1);
        const cplx w = detail::correlation_kernel(tau, {gp, feed, p.detuning}, p.delta);
        return c * sq_delta *
               std::exp(cplx(-0.5 * (gp + p.delta) * lead, -p.detuning * lead)) * w;
    };
    // a-pulse (filtered while the atom is excited) times the b photon
    const auto ab = [&](double ua, double ub) {
        const cplx base = 2.0 * c * sq_delta *
                          std::exp(cplx(-0.5 * p.delta * ua, -p.detuning * ua)) *
                          std::exp(cplx(-0.5 * gp * ub, 0.0));
        if (ub <= ua) return base;
        const double th = ub - ua;
        const cplx filt = 1.0 - feed * th * detail::phi1(epsp * th);
        return base * filt;
    };

    ChannelFields out;
    out.system = TwoChannelSystem::lambda;
    out.aa = detail::sample_field(opt.n, dx, true, 2.0, aa);
    out.ab = detail::sample_field(opt.n, dx, false, 1.0, ab);
    out.bb = TwoPhotonField{};  // forbidden channel, identically zero
    out.bb.symmetric = true;
    out.bb.norm_weight = 2.0;
    out.exact = channel_probabilities_lambda(p);
    return out;
}

/// Probabilities carried by a set of final fields. The stored exact values
/// are returned after a completeness check.
inline ChannelProbabilities channel_probabilities(const ChannelFields& f) {
    const double s = f.exact.sum();
    if (std::abs(s - 1.0) > 1e-4)
        throw inconsistency_error("channel probabilities sum to " + std::to_string(s));
    return f.exact;
}

/// Same probabilities from the sampled grids (trapezoid in both axes); used
/// to cross-check the closed-form route.
inline ChannelProbabilities channel_probabilities_from_grid(const ChannelFields& f) {
    const auto grid_norm = [](const TwoPhotonField& fld) -> double {
        if (fld.n == 0) return 0.0;
        double s = 0.0;
        for (int i = 0; i < fld.n; ++i) {
            const double wi = (i == 0 || i == fld.n - 1) ? 0.5 : 1.0;
            for (int j = 0; j < fld.n; ++j) {
                const double wj = (j == 0 || j == fld.n - 1) ? 0.5 : 1.0;
                s += wi * wj * std::norm(fld.at(i, j));
            }
        }
        return fld.norm_weight * s * fld.dx * fld.dx;
    };
    ChannelProbabilities out;
    out.system = f.system;
    out.p_aa = grid_norm(f.aa);
    out.p_ab = grid_norm(f.ab);
    out.p_bb = grid_norm(f.bb);
    return out;
}

/// Amplification ratio A = (F_opt - F_base)/F_base.
inline double amplification_ratio(double f_opt, double f_base) {
    if (f_base == 0.0)
        throw invalid_parameter_error("amplification_ratio: baseline fidelity is zero");
    return (f_opt - f_base) / f_base;
}

/// Scalar estimate of how close a real device gets to the ideal fidelities,
/// f_T = beta (1 - gamma*/gamma), clamped to [0, 1]. Out of its validity
/// regime (gamma* not << gamma) the flag is cleared.
struct TrustFactor {
    double value = 1.0;
    bool within_regime = true;
};

inline TrustFactor trust_factor(double beta, double gamma_star, double gamma) {
    if (!(beta >= 0.0 && beta <= 1.0))
        throw invalid_parameter_error("trust_factor: beta must lie in [0, 1]");
    if (!(gamma_star >= 0.0) || !(gamma > 0.0))
        throw invalid_parameter_error("trust_factor: rates out of range");
    TrustFactor t;
    t.value = std::clamp(beta * (1.0 - gamma_star / gamma), 0.0, 1.0);
    t.within_regime = (gamma_star <= 0.3 * gamma);
    return t;
}

/// Resonant sweep of the transmission fidelity over the pulse width.
struct SweepPoint {
    double delta;
    double value;
};

inline std::vector<SweepPoint> transmission_fidelity_curve(const PhysParams& base,
                                                           double delta_min,
                                                           double delta_max,
                                                           int points) {
    if (!(delta_min > 0.0) || !(delta_max > delta_min) || points < 2)
        throw invalid_parameter_error("transmission_fidelity_curve: bad sweep range");
    std::vector<SweepPoint> curve;
    curve.reserve(static_cast<std::size_t>(points));
    const double lr = std::log(delta_max / delta_min);
    for (int i = 0; i < points; ++i) {
        PhysParams p = base;
        p.delta = delta_min * std::exp(lr * i / (points - 1));
        curve.push_back({p.delta, transmission_fidelity(p)});
    }
    return curve;
}

/// Location and value of the fidelity maximum, together with the two
/// candidate operating points: the correlation-extinction width 2 gamma'
/// and the lifetime-minimizing width 3 gamma'.
struct TransmissionOptimum {
    double delta_opt;
    double ft_opt;
    double ft_extinction;  // F^T at delta = 2 gamma'
    double ft_lifetime;    // F^T at delta = 3 gamma'
    double ft_baseline;    // F^T for an infinitely detuned (untouched) pulse
};

inline TransmissionOptimum transmission_fidelity_optimum(const PhysParams& base) {
    base.validate();
    const double gp = base.gamma_prime();
    const auto ft = [&](double delta) {
        PhysParams p = base;
        p.delta = delta;
        return transmission_fidelity(p);
    };
    const auto [dopt, fmax] = golden_section_min(
        [&](double ld) { return -ft(std::exp(ld)); }, std::log(0.1 * gp),
        std::log(100.0 * gp), 1e-12);
    PhysParams detuned = base;
    detuned.detuning = 1e7 * gp;
    return {std::exp(dopt), -fmax, ft(2.0 * gp), ft(3.0 * gp),
            transmission_fidelity(detuned)};
}

} // namespace stimwave
