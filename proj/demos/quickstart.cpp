// Minimal tour: closed-form lifetime curve, a solver run checked against the
// closed form, and the two-channel figures of merit.

#include <cstdio>

#include "stimwave/stimwave.hpp"

int main() {
    using namespace stimwave;

    std::printf("effective lifetime vs pulse width (resonant):\n");
    for (double delta : {0.5, 1.0, 2.0, 3.0, 5.0, 10.0})
        std::printf("  delta = %5.2f gamma   tau_eff = %.6f\n", delta,
                    tau_eff(1.0, delta));

    PhysParams p{1.0, 3.0, 0.0};
    Grid1D grid = default_grid(p, 10.0, 0.02);
    FieldHistory history = evolve(make_exponential_pulse(p, grid), p, grid, 10.0);
    std::printf("\nsolver vs closed form at the optimum (delta = 3 gamma):\n");
    for (double t : {0.5, 1.0, 2.0, 4.0})
        std::printf("  t = %.1f   numeric %.6f   analytic %.6f\n", t,
                    rho_ee_numeric(history, t), rho_ee(t, p));

    const auto lambda_probs = channel_probabilities_lambda({1.0, 4.0, 0.0});
    const auto opt = transmission_fidelity_optimum({1.0, 1.0, 0.0});
    std::printf("\nlambda atom at delta = 2 gamma': p_aa = %.4f, F = %.4f\n",
                lambda_probs.p_aa, cloning_fidelity(lambda_probs));
    std::printf("transmitting guide: max F^T = %.4f at delta = %.3f gamma, A = %.4f\n",
                opt.ft_opt, opt.delta_opt, amplification_ratio(opt.ft_opt, opt.ft_baseline));
    return 0;
}
