#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "stimwave/errors.hpp"
#include "stimwave/solver.hpp"
#include "stimwave/special.hpp"

namespace stimwave {

/// Two-argument complex amplitude on a square lattice window. For a
/// same-channel pair the amplitude is symmetric and the physical pair
/// probability is 2 * sum |phi|^2 dx^2 (the quantum norm of the symmetric
/// state); for a cross-channel pair it is sum |phi|^2 dx^2.
struct TwoPhotonField {
    std::vector<cplx> phi;  // row-major, phi[i*n + j] at (x_lo + i dx, x_lo + j dx)
    int n = 0;
    double x_lo = 0.0;
    double dx = 0.0;
    bool symmetric = true;
    double norm_weight = 2.0;
    int front = -1;  // index of the wavefront line r = ct, if inside the window

    cplx at(int i, int j) const { return phi[std::size_t(i) * n + j]; }
    double x(int i) const { return x_lo + i * dx; }

    /// Lattice norm. Wavefront lines store the average across the support
    /// jump, so they carry twice the weight (|behind|^2/2 = 2 |stored|^2).
    double total_norm() const {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double wi = (i == front) ? 2.0 : 1.0;
            for (int j = 0; j < n; ++j) {
                const double wj = (j == front) ? 2.0 : 1.0;
                s += wi * wj * std::norm(at(i, j));
            }
        }
        return norm_weight * s * dx * dx;
    }

    double max_asymmetry() const {
        double m = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                m = std::max(m, std::abs(at(i, j) - at(j, i)));
        return m;
    }
};

namespace detail {

/// Node weight of Theta(r) Theta(t - r): 1 inside (0, t), 1/2 on either
/// edge, 0 outside.
inline double theta_weight(double r, double t, double dr) {
    const double h = 0.5 * dr;
    if (r < -h || r > t + h) return 0.0;
    double w = 1.0;
    if (std::abs(r) <= h) w *= 0.5;
    if (std::abs(t - r) <= h) w *= 0.5;
    return w;
}

/// One retarded term of the pair amplitude in the original frame:
///   Theta(r2) Theta(t - r2) psi(r1 - r2, t - r2) e^{-i dL (t - r1)}.
inline cplx pair_term(const FieldHistory& h, double r1, double r2, double t) {
    const double w = theta_weight(r2, t, h.grid().dr);
    if (w == 0.0) return 0.0;
    const cplx psi = h.value_rt(r1 - r2, t - r2);
    const double ph = -h.rates().detuning * (t - r1);
    return w * psi * cplx(std::cos(ph), std::sin(ph));
}

/// Quantum norm of the raw (constant = 1) symmetrized assembly at time t,
///   2 * int int |A(r1,r2) + A(r2,r1)|^2 = 4 [T_same + Re T_cross].
inline double raw_pair_norm(const FieldHistory& h, double t) {
    const Grid1D& g = h.grid();
    const double dr = g.dr;
    const int nt = static_cast<int>(std::lround(t / dr));
    if (nt <= 0) return 0.0;

    // the squared Theta edges carry the average of the squared limits (1/2),
    // not the squared average (1/4)
    double t_same = 0.0;
    for (int k2 = 0; k2 <= nt; ++k2) {
        const double w2 = (k2 == 0 || k2 == nt) ? 0.5 : 1.0;
        t_same += w2 * h.row_norm(nt - k2);
    }
    t_same *= dr;

    // On the lines r = ct the Theta edge coincides with the light front of
    // the looked-up row, whose stored node already averages that jump; the
    // edge weight there is 1, not 1/2.
    double t_cross = 0.0;
    for (int k1 = 0; k1 <= nt; ++k1) {
        const double w1 = (k1 == 0) ? 0.5 : 1.0;
        const int row1 = nt - k1;
        double acc_re = 0.0;
        for (int k2 = 0; k2 <= nt; ++k2) {
            const double w2 = (k2 == 0) ? 0.5 : 1.0;
            const cplx a = h.at(nt - k2, g.n_left + (k1 - k2));
            if (a == cplx(0.0, 0.0)) continue;
            const cplx b = h.at(row1, g.n_left + (k2 - k1));
            const double ph = h.rates().detuning * (k1 - k2) * dr;
            acc_re += w2 * (a * std::conj(b) * cplx(std::cos(ph), std::sin(ph))).real();
        }
        t_cross += w1 * acc_re;
    }
    t_cross *= dr * dr;

    return 4.0 * (t_same + t_cross);
}

} // namespace detail

/// Completeness-fixed assembly constant: the continuum prefactor of the pair
/// amplitude is replaced by the constant that makes
///   norm(psi)(t_ref)/norm(psi)(0) + norm(phi)(t_ref) = 1
/// at the last stored step. Zero-coupling histories give zero.
inline double completeness_constant(const FieldHistory& h) {
    const double raw = detail::raw_pair_norm(h, h.t_max());
    if (raw < 1e-300) return 0.0;
    const double missing = 1.0 - h.row_norm(h.n_steps()) / h.row_norm(0);
    return std::sqrt(std::max(missing, 0.0) / raw);
}

/// Symmetrized two-photon amplitude phi(r1, r2, t) on the grid window
/// [r_min, min(c t, r_max)]^2. Exactly zero at t = 0 (no emission yet).
inline TwoPhotonField assemble_two_photon(const FieldHistory& h, double t,
                                          double constant = -1.0) {
    if (t < 0.0 || (t > h.t_max() + 1e-12 && !h.asymptotic_valid()))
        throw std::domain_error("assemble_two_photon: t outside the history");
    const Grid1D& g = h.grid();
    const double dr = g.dr;
    if (constant < 0.0) constant = completeness_constant(h);

    TwoPhotonField f;
    f.dx = dr;
    f.x_lo = g.r_min();
    f.symmetric = true;
    f.norm_weight = 2.0;
    const double hi = std::min(t, g.r_max());
    f.n = std::max(0, static_cast<int>(std::lround((hi - f.x_lo) / dr))) + 1;
    f.phi.assign(std::size_t(f.n) * f.n, cplx(0.0, 0.0));
    const int i_front = static_cast<int>(std::lround((t - f.x_lo) / dr));
    if (i_front < f.n) f.front = i_front;
    if (t <= 0.0) return f;

    for (int i = 0; i < f.n; ++i) {
        const double r1 = f.x(i);
        for (int j = i; j < f.n; ++j) {
            const double r2 = f.x(j);
            const cplx v = constant * (detail::pair_term(h, r1, r2, t) +
                                       detail::pair_term(h, r2, r1, t));
            f.phi[std::size_t(i) * f.n + j] = v;
            f.phi[std::size_t(j) * f.n + i] = v;
        }
    }
    return f;
}

/// Second-order correlation read out of the asymptotic field,
///   G2(t, t+tau) = 4 |phi(c(t_inf - t), c(t_inf - t - tau))|^2
/// in the detector frame. Sample on the lattice (t, tau multiples of dr).
class G2Numeric {
  public:
    G2Numeric(const FieldHistory& h, double t_inf, double constant)
        : h_(&h), t_inf_(t_inf), c_(constant) {}

    double operator()(double t, double tau) const {
        if (t < 0.0 || tau < 0.0)
            throw invalid_parameter_error("g2 numeric: t and tau must be >= 0");
        const double r1 = t_inf_ - t;
        const double r2 = t_inf_ - t - tau;
        const cplx v = c_ * (detail::pair_term(*h_, r1, r2, t_inf_) +
                             detail::pair_term(*h_, r2, r1, t_inf_));
        return 4.0 * std::norm(v);
    }

    double t_inf() const { return t_inf_; }
    double constant() const { return c_; }

  private:
    const FieldHistory* h_;
    double t_inf_;
    double c_;
};

/// The readout time must leave the excitation entirely in the field.
inline G2Numeric make_g2_numeric(const FieldHistory& h, double t_inf) {
    if (t_inf > h.t_max() + 1e-12 && !h.asymptotic_valid())
        throw premature_readout_error("g2 numeric: history too short for t_inf");
    const double residual = h.norm_at(t_inf) / h.row_norm(0);
    if (residual > 1e-6)
        throw premature_readout_error(
            "g2 numeric: excited-state residue " + std::to_string(residual) +
            " at t_inf (> 1e-6); increase t_inf");
    return G2Numeric(h, t_inf, completeness_constant(h));
}

/// Unitarity audit: with the assembly constant frozen at the last step, the
/// one- plus two-photon probability must stay 1 at every sampled time.
struct NormAudit {
    std::vector<double> times;
    std::vector<double> deviation;
    double max_deviation = 0.0;
};

inline NormAudit norm_audit(const FieldHistory& h, int n_samples = 16) {
    NormAudit audit;
    const double c = completeness_constant(h);
    const double norm0 = h.row_norm(0);
    n_samples = std::max(2, n_samples);
    for (int s = 0; s < n_samples; ++s) {
        const int n = static_cast<int>(std::lround(double(s) * h.n_steps() / (n_samples - 1)));
        const double t = n * h.grid().dt;
        const double one = h.row_norm(n) / norm0;
        const double two = c * c * detail::raw_pair_norm(h, t);
        const double dev = std::abs(one + two - 1.0);
        audit.times.push_back(t);
        audit.deviation.push_back(dev);
        audit.max_deviation = std::max(audit.max_deviation, dev);
    }
    return audit;
}

} // namespace stimwave
