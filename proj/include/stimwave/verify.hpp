#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "stimwave/analytic.hpp"
#include "stimwave/correlations.hpp"
#include "stimwave/grid.hpp"
#include "stimwave/optimize.hpp"
#include "stimwave/pulse.hpp"
#include "stimwave/quadrature.hpp"
#include "stimwave/solver.hpp"
#include "stimwave/two_photon.hpp"
#include "stimwave/twochannel.hpp"

namespace stimwave {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace verify_detail {

inline std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

/// Effective lifetime from the grid solver: gamma * trapezoid of rho(t).
inline double tau_eff_numeric(double delta, double dr, double t_max) {
    PhysParams p{1.0, delta, 0.0};
    Grid1D g = default_grid(p, t_max, dr);
    FieldHistory h = evolve(make_exponential_pulse(p, g), p, g, t_max);
    const double n0 = h.row_norm(0);
    double acc = 0.5 * (h.row_norm(0) + h.row_norm(h.n_steps()));
    for (int n = 1; n < h.n_steps(); ++n) acc += h.row_norm(n);
    return acc * g.dt / n0;
}

/// Sup-norm error of the solver population against the closed form.
inline double rho_sup_error(const PhysParams& p, double dr, double t_max) {
    Grid1D g = default_grid(p, t_max, dr);
    FieldHistory h = evolve(make_exponential_pulse(p, g), p, g, t_max);
    const double n0 = h.row_norm(0);
    double sup = 0.0;
    for (int n = 0; n <= h.n_steps(); ++n) {
        const double t = n * g.dt;
        sup = std::max(sup, std::abs(h.row_norm(n) / n0 - rho_ee(t, p)));
    }
    return sup;
}

/// Fitted decay rate in tau of G2(0, tau) over tau in [lo, hi].
template <class G>
inline double g2_tau_rate(const G& g2of, double lo, double hi, int samples = 40) {
    std::vector<double> xs, ys;
    for (int i = 0; i < samples; ++i) {
        const double tau = lo + (hi - lo) * i / (samples - 1);
        xs.push_back(tau);
        ys.push_back(g2of(tau));
    }
    return -fit_log_slope(xs, ys);
}

} // namespace verify_detail

struct VerifyOptions {
    double reference_dr = 0.01;
    bool quick = false;  // coarser grids, same checks
};

/// Run the full analytic-vs-numeric and probability verification suite.
inline std::vector<CheckResult> run_verification(const VerifyOptions& opt = {}) {
    namespace vd = verify_detail;
    std::vector<CheckResult> out;
    const auto add = [&](const std::string& name, bool ok, const std::string& detail) {
        out.push_back({name, ok, detail});
    };
    const auto guarded = [&](const std::string& name,
                             const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            add(name, false, std::string("exception: ") + e.what());
        }
    };
    const double dr = opt.quick ? 0.02 : opt.reference_dr;

    // 1. effective lifetime at the optimum, exact and from the solver
    guarded("tau_eff optimum", [&] {
        const double exact = tau_eff(1.0, 3.0);
        const double numeric = vd::tau_eff_numeric(3.0, dr, 30.0);
        const bool ok = exact == 0.5 && std::abs(numeric - 0.5) <= 1e-3;
        add("tau_eff optimum", ok,
            "analytic " + vd::num(exact) + ", numeric " + vd::num(numeric));
    });

    // 2. unit lifetime at delta = gamma and in the broadband limit
    guarded("tau_eff unit points", [&] {
        const double at_gamma = tau_eff(1.0, 1.0);
        const double broad = tau_eff(1.0, 1e8);
        const bool ok = at_gamma == 1.0 && std::abs(broad - 1.0) <= 1e-6;
        add("tau_eff unit points", ok,
            "delta=gamma " + vd::num(at_gamma) + ", delta->inf " + vd::num(broad));
    });

    // 3. optimal-point population: closed form and solver
    guarded("rho_ee optimum", [&] {
        PhysParams p{1.0, 3.0, 0.0};
        double worst_analytic = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double t = 10.0 * i / 400;
            worst_analytic =
                std::max(worst_analytic, std::abs(rho_ee(t, p) - rho_ee_optimal(t, 1.0)));
        }
        const double sup = vd::rho_sup_error(p, dr, 10.0);
        const bool ok = worst_analytic <= 1e-12 && sup <= 1e-3;
        add("rho_ee optimum", ok,
            "analytic dev " + vd::num(worst_analytic) + ", numeric sup " + vd::num(sup));
    });

    // 4. exact cancellation of the spontaneous path
    guarded("coupling-factor cancellation", [&] {
        const cplx q = q_factor({1.0, 3.0, 0.0}).value;
        const cplx qf = q_factor_two_channel({1.0, 4.0, 0.0}).value;
        const bool ok = (1.0 + q) == cplx(0.0, 0.0) && (1.0 + qf) == cplx(0.0, 0.0);
        add("coupling-factor cancellation", ok,
            "1+Q = " + vd::num(std::abs(1.0 + q)) + ", 1+Q_f = " + vd::num(std::abs(1.0 + qf)));
    });

    // 5. pure 3-gamma decay of G2(0, tau) at the optimum, both pipelines
    guarded("g2 extinction rate", [&] {
        PhysParams p{1.0, 3.0, 0.0};
        const double analytic_rate =
            vd::g2_tau_rate([&](double tau) { return g2(0.0, tau, p); }, 0.1, 2.0);
        Grid1D g = default_grid(p, 30.0, dr);
        FieldHistory h = evolve(make_exponential_pulse(p, g), p, g, 30.0);
        G2Numeric g2n = make_g2_numeric(h, 30.0);
        const double numeric_rate =
            vd::g2_tau_rate([&](double tau) { return g2n(0.0, tau); }, 0.1, 2.0);
        const bool ok = std::abs(analytic_rate - 3.0) <= 0.06 &&
                        std::abs(numeric_rate - 3.0) <= 0.06;
        add("g2 extinction rate", ok,
            "analytic " + vd::num(analytic_rate) + ", numeric " + vd::num(numeric_rate));
    });

    // 6. bunching-convergence orderings over width and detuning
    guarded("p2 convergence ordering", [&] {
        const auto t95 = [&](double delta, double det, bool base = false) {
            return p2_convergence_time({1.0, delta, det}, 0.95, base);
        };
        const double w01 = t95(0.1, 0.0), w1 = t95(1.0, 0.0), w3 = t95(3.0, 0.0),
                     w100 = t95(100.0, 0.0);
        const double d0 = w3, d5 = t95(3.0, 5.0), dinf = t95(3.0, 0.0, true);
        const bool ok = w3 < w01 && w3 < w1 && w3 < w100 && d0 < d5 && d5 < dinf;
        add("p2 convergence ordering", ok,
            "width t95 {0.1,1,3,100} = {" + vd::num(w01) + ", " + vd::num(w1) + ", " +
                vd::num(w3) + ", " + vd::num(w100) + "}; detuning {0,5,inf} = {" +
                vd::num(d0) + ", " + vd::num(d5) + ", " + vd::num(dinf) + "}");
    });

    // 7. unitarity on the reference grid and its refinement order
    guarded("norm conservation", [&] {
        PhysParams p{1.0, 3.0, 0.0};
        std::vector<double> drs = opt.quick ? std::vector<double>{0.08, 0.04, 0.02}
                                            : std::vector<double>{0.04, 0.02, 0.01};
        std::vector<double> devs;
        for (double d : drs) {
            Grid1D g = default_grid(p, 30.0, d);
            FieldHistory h = evolve(make_exponential_pulse(p, g), p, g, 30.0);
            devs.push_back(norm_audit(h, 12).max_deviation);
        }
        const double slope = std::log2(devs[0] / devs[2]) / 2.0;
        const bool ok = devs.back() <= 1e-3 && std::abs(slope - 2.0) <= 0.3;
        add("norm conservation", ok,
            "max dev " + vd::num(devs.back()) + " at dr=" + vd::num(drs.back()) +
                ", refinement order " + vd::num(slope));
    });

    // 8. two-channel figures of merit
    guarded("two-channel figures", [&] {
        PhysParams lopt{1.0, 4.0, 0.0};  // delta = 2 gamma'
        const auto pl = channel_probabilities_lambda(lopt);
        const double fid = cloning_fidelity(pl);
        const auto topt = transmission_fidelity_optimum({1.0, 1.0, 0.0});
        const double amp = amplification_ratio(topt.ft_opt, topt.ft_baseline);
        const double amp_max = amplification_ratio(5.0 / 6.0, 0.75);
        const bool ok = std::abs(pl.p_aa - 2.0 / 3.0) <= 0.01 &&
                        std::abs(fid - 5.0 / 6.0) <= 0.005 && pl.p_bb == 0.0 &&
                        std::abs(topt.ft_baseline - 0.75) <= 0.005 &&
                        std::abs(topt.ft_opt - 0.8125) <= 0.005 &&
                        std::abs(amp - 1.0 / 12.0) <= 0.005 &&
                        std::abs(amp_max - 1.0 / 9.0) <= 1e-15;
        add("two-channel figures", ok,
            "p_aa " + vd::num(pl.p_aa) + ", F " + vd::num(fid) + ", F^T max " +
                vd::num(topt.ft_opt) + " at delta " + vd::num(topt.delta_opt) +
                ", baseline " + vd::num(topt.ft_baseline) + ", A " + vd::num(amp));
    });

    // 9. rate-equation comparator
    guarded("rate-equation comparator", [&] {
        const double twice = einstein_rate(1.0, 1, 0, 1.0);
        double max_res = 0.0;
        for (int i = 0; i <= 300; ++i)
            max_res = std::max(max_res,
                               std::abs(rate_equation_residual(3.0 * i / 300, 1.0)));
        const bool ok = twice == 2.0 && max_res >= 0.1;
        add("rate-equation comparator", ok,
            "einstein rate " + vd::num(twice) + ", max residual " + vd::num(max_res));
    });

    // 10. structural properties: normalization, causality, symmetry,
    // completeness, cloning bound
    guarded("property suite", [&] {
        bool ok = true;
        std::string why;

        for (auto [d, h] : {std::pair{3.0, 0.01}, {1.0, 0.02}, {10.0, 0.005}}) {
            PhysParams p{1.0, d, 0.0};
            Grid1D g = default_grid(p, 1.0, h);
            if (std::abs(make_exponential_pulse(p, g).discrete_norm() - 1.0) > 1e-12) {
                ok = false;
                why += "pulse norm; ";
            }
        }

        PhysParams p{1.0, 3.0, 0.0};
        Grid1D g = default_grid(p, 6.0, 0.02);
        FieldHistory h = evolve(make_exponential_pulse(p, g), p, g, 6.0);
        for (int n = 0; n <= h.n_steps() && ok; ++n)
            for (int j = 0; j < g.n_cells(); ++j)
                if (g.r(j) > n * g.dt && h.at(n, j) != cplx(0.0, 0.0)) {
                    ok = false;
                    why += "causality; ";
                    break;
                }
        if (assemble_two_photon(h, 4.0).max_asymmetry() != 0.0) {
            ok = false;
            why += "bosonic symmetry; ";
        }

        for (double d : {0.6, 1.0, 2.0, 3.0, 10.0}) {
            for (double det : {0.0, 1.0, 5.0}) {
                PhysParams q{1.0, 2.0 * d, 2.0 * det};  // in units of gamma' = 2
                const auto pt = channel_probabilities_transmitting(q);
                const auto plam = channel_probabilities_lambda(q);
                if (std::abs(pt.sum() - 1.0) > 1e-6 || std::abs(plam.sum() - 1.0) > 1e-6) {
                    ok = false;
                    why += "completeness; ";
                }
                if (cloning_fidelity(pt) > 5.0 / 6.0 + 1e-6 ||
                    cloning_fidelity(plam) > 5.0 / 6.0 + 1e-6) {
                    ok = false;
                    why += "cloning bound; ";
                }
            }
        }
        add("property suite", ok, ok ? "all structural properties hold" : why);
    });

    return out;
}

} // namespace stimwave
