#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "stimwave/analytic.hpp"
#include "stimwave/errors.hpp"
#include "stimwave/grid.hpp"
#include "stimwave/params.hpp"
#include "stimwave/pulse.hpp"
#include "stimwave/special.hpp"

namespace stimwave {

using SectorRates = detail::SectorRates;

inline SectorRates semi_infinite_rates(const PhysParams& p) {
    return {p.gamma, p.gamma, p.detuning};
}
/// Even sector of the transmitting guide: full feedback at gamma'.
inline SectorRates transmitting_even_rates(const PhysParams& p) {
    return {p.gamma_prime(), p.gamma_prime(), p.detuning};
}
/// Lambda atom: decay through both polarizations, feedback only from the
/// stimulated one.
inline SectorRates lambda_rates(const PhysParams& p) {
    return {p.gamma_prime(), 0.5 * p.gamma_prime(), p.detuning};
}

struct EvolveOptions {
    std::size_t max_history_bytes = std::size_t(2) << 30;  // 2 GiB
};

/// Full space-time record of the single-excitation amplitude psi(r, t) in
/// the rotating frame. Rows live on the characteristics-aligned lattice; the
/// accessor extends the stored window past t_max by exact transport + decay
/// once the pulse has cleared the atom (the delayed source is then inactive),
/// which is what the asymptotic two-photon readout uses.
class FieldHistory {
  public:
    FieldHistory(Pulse pulse, SectorRates rates, Grid1D grid, int n_steps)
        : pulse_(std::move(pulse)), rates_(rates), grid_(grid), n_steps_(n_steps) {
        rows_.assign(std::size_t(n_steps_ + 1) * std::size_t(grid_.n_cells()),
                     cplx(0.0, 0.0));
    }

    const Grid1D& grid() const { return grid_; }
    const SectorRates& rates() const { return rates_; }
    const Pulse& pulse() const { return pulse_; }
    int n_steps() const { return n_steps_; }
    double t_max() const { return n_steps_ * grid_.dt; }
    double pulse_width() const { return pulse_.width; }

    cplx* row(int n) { return rows_.data() + std::size_t(n) * grid_.n_cells(); }
    const cplx* row(int n) const {
        return rows_.data() + std::size_t(n) * grid_.n_cells();
    }

    /// Stored value at step n, node j; zero outside the grid.
    cplx at(int n, int j) const {
        if (n < 0 || n > n_steps_ || j < 0 || j >= grid_.n_cells()) return 0.0;
        return rows_[std::size_t(n) * grid_.n_cells() + j];
    }

    /// Amplitude at lattice point (r, t), t possibly beyond the stored
    /// window. Past t_max the field is transported freely and damped at
    /// damp/2; the region left of the grid is the analytic pulse tail.
    cplx value_rt(double r, double t) const {
        const double dr = grid_.dr;
        if (t < -0.5 * dr) return 0.0;
        int n = static_cast<int>(std::lround(t / dr));
        int j = static_cast<int>(std::lround(r / dr)) + grid_.n_left;
        if (n <= n_steps_) {
            if (j < 0) return tail_value(r, t);
            return at(n, j);
        }
        if (!asymptotic_valid_)
            throw premature_readout_error(
                "history ends while the delayed source is still active; "
                "extend t_max");
        const int m = n - n_steps_;
        const double decay = std::exp(-0.5 * rates_.damp * m * grid_.dt);
        const int jj = j - m;
        if (jj >= grid_.n_cells()) return 0.0;
        if (jj >= 0) return at(n_steps_, jj) * decay;
        return tail_value(r, t);
    }

    /// Discrete norm of row n: sum |psi|^2 dr. The light-front node stores
    /// the average of the one-sided limits across the wavefront jump (ahead
    /// of it the field is exactly zero), so for a trapezoid-consistent norm
    /// that node carries twice the weight: |behind|^2/2 = 2 |stored|^2.
    double row_norm(int n) const {
        if (n < 0 || n > n_steps_) throw std::domain_error("row_norm: step out of range");
        const cplx* r = row(n);
        double s = 0.0;
        for (int j = 0; j < grid_.n_cells(); ++j) s += std::norm(r[j]);
        const int j_front = grid_.n_left + n;
        if (j_front < grid_.n_cells()) s += std::norm(r[j_front]);
        return s * grid_.dr;
    }

    /// Norm at time t (continuation-aware).
    double norm_at(double t) const {
        const int n = static_cast<int>(std::lround(t / grid_.dt));
        if (n <= n_steps_) return row_norm(std::max(n, 0));
        if (!asymptotic_valid_)
            throw premature_readout_error("norm requested beyond an active history");
        return row_norm(n_steps_) * std::exp(-rates_.damp * (n - n_steps_) * grid_.dt);
    }

    bool asymptotic_valid() const { return asymptotic_valid_; }
    void set_asymptotic_valid(bool v) { asymptotic_valid_ = v; }
    std::vector<cplx>& pulse_samples() { return pulse_.amplitude; }

  private:
    cplx tail_value(double r, double t) const {
        // pure transport + damping of the truncated pulse tail, r < r_min
        const cplx a = pulse_.initial_amplitude(r - t);
        return a * std::exp(-0.5 * rates_.damp * t);
    }

    Pulse pulse_;
    SectorRates rates_;
    Grid1D grid_;
    int n_steps_;
    std::vector<cplx> rows_;
    bool asymptotic_valid_ = false;
};

namespace detail {

/// One characteristic segment update. The transport is an exact one-cell
/// shift; damping enters through the integrating factor; the delayed source
/// is integrated with its oscillation e^{-i detuning r} treated exactly and
/// the looked-up amplitude modeled linearly across the step (second order,
/// uniformly in detuning*dt).
struct StepCoeffs {
    double damp_half;        // e^{-damp dt/2}
    cplx e0_over_dt;         // phi1(w dt), w = damp/2 - i detuning
    cplx e1_over_dt;         // zeta01(w dt)
    double dt;
};

inline StepCoeffs make_step_coeffs(const SectorRates& s, double dt) {
    const cplx w(0.5 * s.damp, -s.detuning);
    return {std::exp(-0.5 * s.damp * dt), phi1(w * dt), zeta01(w * dt), dt};
}

} // namespace detail

/// Integrate the delayed advection equation on the aligned grid.
/// The initial two-photon amplitude is zero; the source term reads the field
/// at (-r, t - r/c), which lands exactly on stored nodes. Theta(0) = 1/2 at
/// both step-function edges (results are then bit-reproducible and the
/// composite quadrature keeps second order across the kinks).
inline FieldHistory evolve(const Pulse& pulse, const SectorRates& rates,
                           const Grid1D& grid, double t_max,
                           const EvolveOptions& opt = {}) {
    if (std::abs(grid.dt - grid.dr) > 1e-12 * grid.dr)
        throw cfl_error("evolve requires c*dt == dr");
    if (static_cast<int>(pulse.amplitude.size()) != grid.n_cells())
        throw invalid_parameter_error("pulse is not sampled on this grid");
    if (t_max < 0.0) throw invalid_parameter_error("t_max must be nonnegative");
    const int n_steps = static_cast<int>(std::lround(t_max / grid.dt));
    if (n_steps > grid.n_steps)
        throw domain_too_small_error("grid.n_steps too small for requested t_max");
    if (grid.r_max() + 1e-12 < t_max)
        throw domain_too_small_error("grid.r_max must cover the light cone (>= c*t_max)");

    const std::size_t need =
        std::size_t(n_steps + 1) * std::size_t(grid.n_cells()) * sizeof(cplx);
    if (need > opt.max_history_bytes) {
        const double factor = std::sqrt(double(need) / double(opt.max_history_bytes));
        throw resource_error(
            "history would need " + std::to_string(need / (1024 * 1024)) +
            " MiB (cap " + std::to_string(opt.max_history_bytes / (1024 * 1024)) +
            " MiB); try dr >= " + std::to_string(grid.dr * factor));
    }

    FieldHistory h(pulse, rates, grid, n_steps);
    std::copy(pulse.amplitude.begin(), pulse.amplitude.end(), h.row(0));

    const auto c = detail::make_step_coeffs(rates, grid.dt);
    const int nl = grid.n_left;
    const int nc = grid.n_cells();
    const double dt = grid.dt;

    // per-node phase of the source, e^{-i detuning r_j}
    std::vector<cplx> phase(static_cast<std::size_t>(nc));
    for (int j = 0; j < nc; ++j)
        phase[std::size_t(j)] = std::exp(cplx(0.0, -rates.detuning * grid.r(j)));

    // lookup with Theta(r) folded in: theta_r * psi(-r_k, row) where r_k = k dr.
    // At k = 0, n_row > 0 the product Theta(r) psi(-r, .) jumps at an
    // interior composite node: use half the (continuous) stored value. The
    // corner lookup (k = 0, row 0) is the one-sided limit at the start of
    // the front characteristic: the full pulse amplitude behind the edge,
    // i.e. twice the stored edge average.
    const auto delayed = [&](const FieldHistory& hh, int k, int n_row) -> cplx {
        if (k < 0) return 0.0;
        const int idx = nl - k;
        if (idx < 0) {
            // pulse tail beyond the grid, transported analytically
            const double t_row = n_row * dt;
            return pulse.initial_amplitude(-k * grid.dr - t_row) *
                   std::exp(-0.5 * rates.damp * t_row);
        }
        const cplx v = hh.at(n_row, idx);
        if (k != 0) return v;
        return (n_row == 0) ? 2.0 * v : 0.5 * v;
    };

    for (int n = 0; n < n_steps; ++n) {
        const cplx* old_row = h.row(n);
        cplx* new_row = h.row(n + 1);

        // left edge: transported pulse tail from beyond the grid
        new_row[0] = pulse.initial_amplitude(grid.r(0) - (n + 1) * dt) *
                     std::exp(-0.5 * rates.damp * (n + 1) * dt);

        for (int j = 1; j < nc; ++j) {
            const int k = j - nl;           // r_j = k dr
            cplx v = c.damp_half * old_row[j - 1];
            if (k >= 0 && n + 1 - k >= 0) {
                const int n_row = n + 1 - k;        // delayed time index
                double theta_t = (n_row == 0) ? 0.5 : 1.0;  // light-front edge
                cplx h0, h1;
                if (k == 0) {
                    // segment ends exactly at the atom; the endpoint reads the
                    // new row itself (theta_r(0) = 1/2) -> solve the linear cell
                    h0 = 0.0;
                    const cplx coef = c.damp_half * (-rates.feed) * theta_t *
                                      phase[std::size_t(j - 1)] * dt * c.e1_over_dt * 0.5;
                    new_row[j] = (c.damp_half * old_row[j - 1]) / (1.0 - coef);
                    continue;
                }
                h0 = delayed(h, k - 1, n_row);
                h1 = delayed(h, k, n_row);
                const cplx src = (-rates.feed) * theta_t * phase[std::size_t(j - 1)] * dt *
                                 (h0 * c.e0_over_dt + (h1 - h0) * c.e1_over_dt);
                v += c.damp_half * src;
            }
            new_row[j] = v;
        }
    }

    // the continuation past t_max is valid once the pulse has cleared the
    // atom: the delayed source scales with the pulse tail e^{-delta t/2}
    const bool pulse_cleared =
        rates.feed == 0.0 || pulse.width * n_steps * dt > 32.0;
    h.set_asymptotic_valid(pulse_cleared);
    return h;
}

inline FieldHistory evolve(const Pulse& pulse, const PhysParams& p, const Grid1D& grid,
                           double t_max, const EvolveOptions& opt = {}) {
    p.validate();
    return evolve(pulse, semi_infinite_rates(p), grid, t_max, opt);
}

/// Excited-state population from the stored field, normalized to 1 at t = 0.
inline double rho_ee_numeric(const FieldHistory& h, double t) {
    if (t < 0.0 || (t > h.t_max() + 1e-12 && !h.asymptotic_valid()))
        throw std::domain_error("rho_ee_numeric: t outside the stored history");
    return h.norm_at(t) / h.row_norm(0);
}

} // namespace stimwave
