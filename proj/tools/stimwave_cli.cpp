// Command-line front end: curve generation (CSV), solver runs, and the
// verification suite. All rates are in units of gamma (gamma = 1, c = 1);
// times are in 1/gamma and positions in c/gamma.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "stimwave/stimwave.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_verification = 2;
constexpr int exit_resource = 3;

struct Output {
    std::ofstream file;
    std::ostream& stream() { return file.is_open() ? file : std::cout; }
};

Output open_output(const std::string& path) {
    Output o;
    if (!path.empty()) {
        o.file.open(path);
        if (!o.file) throw stimwave::error("cannot open output file '" + path + "'");
    }
    return o;
}

void base_comments(stimwave::CsvWriter& csv, const stimwave::PhysParams& p,
                   const std::string& command) {
    csv.comment("command", command);
    csv.comment("gamma", 1.0);
    csv.comment("delta", p.delta);
    csv.comment("detuning", p.detuning);
}

int cmd_rho_ee(const stimwave::PhysParams& p, const std::string& system, double t_max,
               int points, bool with_numeric, double dr, const std::string& out_path) {
    using namespace stimwave;
    Output out = open_output(out_path);
    CsvWriter csv(out.stream());
    base_comments(csv, p, "rho-ee");
    csv.comment("system", system);
    csv.comment("curve", "excited-state population vs time");

    std::unique_ptr<FieldHistory> hist;
    if (with_numeric) {
        Grid1D g = default_grid(p, t_max, dr);
        hist = std::make_unique<FieldHistory>(
            evolve(make_exponential_pulse(p, g), p, g, t_max));
        csv.comment("dr", dr);
    }

    if (with_numeric)
        csv.header({"t", "rho_ee", "rho_ee_numeric"});
    else
        csv.header({"t", "rho_ee"});
    for (int i = 0; i < points; ++i) {
        const double t = t_max * i / (points - 1);
        const double rho =
            system == "transmitting" ? rho_ee_full(t, p) : rho_ee(t, p);
        if (with_numeric) {
            const double tn = hist->grid().dt *
                              std::lround(t / hist->grid().dt);
            csv.row({t, rho, rho_ee_numeric(*hist, tn)});
        } else {
            csv.row({t, rho});
        }
    }
    return exit_ok;
}

int cmd_tau_eff(double delta_min, double delta_max, int points,
                const std::string& out_path) {
    using namespace stimwave;
    Output out = open_output(out_path);
    CsvWriter csv(out.stream());
    csv.comment("command", "tau-eff");
    csv.comment("gamma", 1.0);
    csv.comment("curve", "effective lifetime vs pulse width, resonant");

    std::vector<double> deltas;
    const double lr = std::log(delta_max / delta_min);
    for (int i = 0; i < points; ++i)
        deltas.push_back(delta_min * std::exp(lr * i / (points - 1)));
    // refine and include the interior minimum (root of d tau/d delta)
    const double d_opt = newton_root([](double d) { return tau_eff_ddelta(1.0, d); },
                                     [](double d) {
                                         const double s = 1.0 + d;
                                         return -8.0 / (s * s * s) + 48.0 / (s * s * s * s);
                                     },
                                     2.5);
    if (d_opt > delta_min && d_opt < delta_max) deltas.push_back(d_opt);
    std::sort(deltas.begin(), deltas.end());

    csv.header({"delta", "tau_eff"});
    for (double d : deltas) csv.row({d, tau_eff(1.0, d)});
    return exit_ok;
}

int cmd_g2(const stimwave::PhysParams& p, const std::string& system, double t0,
           double tau_max, int points, const std::string& out_path) {
    using namespace stimwave;
    Output out = open_output(out_path);
    CsvWriter csv(out.stream());
    base_comments(csv, p, "g2");
    csv.comment("system", system);
    csv.comment("t", t0);
    csv.comment("curve", "two-click probability density vs delay");
    csv.header({"tau", "g2"});
    for (int i = 0; i < points; ++i) {
        const double tau = tau_max * i / (points - 1);
        const double v = system == "semi" ? g2(t0, tau, p) : g2_aa(t0, tau, p);
        csv.row({tau, v});
    }
    return exit_ok;
}

int cmd_p2(const stimwave::PhysParams& p, double tau_final_max, int points,
           bool baseline, const std::string& out_path) {
    using namespace stimwave;
    Output out = open_output(out_path);
    CsvWriter csv(out.stream());
    base_comments(csv, p, "p2");
    csv.comment("baseline", baseline ? "detuning -> inf" : "off");
    csv.comment("curve", "two-photon detection probability vs collection window");
    csv.header({"tau_final", "p2"});
    std::vector<double> values(static_cast<std::size_t>(points));
    parallel_for(points, [&](int i) {
        const double tf = tau_final_max * i / (points - 1);
        values[std::size_t(i)] =
            baseline ? p2_integrated_baseline(tf, p) : p2_integrated(tf, p);
    });
    for (int i = 0; i < points; ++i)
        csv.row({tau_final_max * i / (points - 1), values[std::size_t(i)]});
    return exit_ok;
}

int cmd_simulate(const stimwave::PhysParams& p, const std::string& system, double t_max,
                 double dr, const std::string& dump_path, int audit_samples,
                 const std::string& out_path) {
    using namespace stimwave;
    Grid1D g = default_grid(p, t_max, dr);
    const SectorRates rates = system == "semi"        ? semi_infinite_rates(p)
                              : system == "transmitting" ? transmitting_even_rates(p)
                                                         : lambda_rates(p);
    FieldHistory h = evolve(make_exponential_pulse(p, g), rates, g, t_max);

    Output out = open_output(out_path);
    CsvWriter csv(out.stream());
    base_comments(csv, p, "simulate");
    csv.comment("system", system);
    csv.comment("dr", dr);
    csv.comment("t_max", t_max);
    csv.comment("curve", "solver population vs closed form");

    csv.header({"t", "rho_numeric", "rho_analytic", "abs_error"});
    const double n0 = h.row_norm(0);
    for (int n = 0; n <= h.n_steps(); ++n) {
        const double t = n * g.dt;
        const double rn = h.row_norm(n) / n0;
        const double ra = system == "transmitting"
                              ? detail::rho_ee_general(t, rates, p.delta)
                              : (system == "lambda"
                                     ? detail::rho_ee_general(t, rates, p.delta)
                                     : rho_ee(t, p));
        csv.row({t, rn, ra, std::abs(rn - ra)});
    }
    if (audit_samples > 0) {
        const NormAudit audit = norm_audit(h, audit_samples);
        csv.comment("norm_audit_max_deviation", audit.max_deviation);
    }
    if (!dump_path.empty()) write_history(h, dump_path);
    return exit_ok;
}

int cmd_two_channel(const stimwave::PhysParams& p, const std::string& system,
                    const std::string& out_path) {
    using namespace stimwave;
    Output out = open_output(out_path);
    CsvWriter csv(out.stream());
    base_comments(csv, p, "two-channel");
    csv.comment("system", system);
    csv.comment("gamma_prime", p.gamma_prime());

    if (system == "lambda") {
        const auto probs = channel_probabilities_lambda(p);
        csv.header({"p_aa", "p_ab", "p_bb", "fidelity"});
        csv.row({probs.p_aa, probs.p_ab, probs.p_bb, cloning_fidelity(probs)});
    } else {
        const auto probs = channel_probabilities_transmitting(p);
        const auto opt = transmission_fidelity_optimum(p);
        csv.comment("ft_max", opt.ft_opt);
        csv.comment("ft_max_delta", opt.delta_opt);
        csv.comment("ft_at_2gp", opt.ft_extinction);
        csv.comment("ft_at_3gp", opt.ft_lifetime);
        csv.comment("ft_baseline", opt.ft_baseline);
        csv.comment("amplification", amplification_ratio(opt.ft_opt, opt.ft_baseline));
        csv.header({"p_aa", "p_ab", "p_bb", "fidelity", "transmission_fidelity"});
        csv.row({probs.p_aa, probs.p_ab, probs.p_bb, cloning_fidelity(probs),
                 transmission_fidelity(p)});
    }
    return exit_ok;
}

int cmd_sweep(const stimwave::PhysParams& base, const std::string& what,
              double delta_min, double delta_max, int points,
              const std::string& out_path) {
    using namespace stimwave;
    Output out = open_output(out_path);
    CsvWriter csv(out.stream());
    base_comments(csv, base, "sweep");
    csv.comment("what", what);

    if (what == "ft") {
        csv.comment("curve", "transmission fidelity vs pulse width, resonant");
        const auto curve = transmission_fidelity_curve(base, delta_min, delta_max, points);
        csv.header({"delta", "transmission_fidelity"});
        for (const auto& pt : curve) csv.row({pt.delta, pt.value});
    } else if (what == "paa") {
        csv.comment("curve", "lambda stimulated-pair probability vs pulse width");
        csv.header({"delta", "p_aa"});
        std::vector<double> vals(static_cast<std::size_t>(points));
        const double lr = std::log(delta_max / delta_min);
        parallel_for(points, [&](int i) {
            PhysParams p = base;
            p.delta = delta_min * std::exp(lr * i / (points - 1));
            vals[std::size_t(i)] = channel_probabilities_lambda(p).p_aa;
        });
        for (int i = 0; i < points; ++i)
            csv.row({delta_min * std::exp(lr * i / (points - 1)), vals[std::size_t(i)]});
    } else {
        throw CLI::ValidationError("sweep", "--what must be ft or paa");
    }
    return exit_ok;
}

int cmd_verify(bool quick) {
    using namespace stimwave;
    const auto results = run_verification({0.01, quick});
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  ("
                  << r.detail << ")\n";
        all = all && r.passed;
    }
    std::cout << (all ? "verification passed" : "verification FAILED") << "\n";
    return all ? exit_ok : exit_verification;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D-waveguide single-photon stimulated emission toolkit"};
    app.require_subcommand(1);

    stimwave::PhysParams params;
    std::string out_path;
    std::string system = "semi";

    auto add_common = [&](CLI::App* sub, bool with_system = false) {
        sub->add_option("--delta", params.delta, "pulse linewidth (units of gamma)");
        sub->add_option("--detuning", params.detuning, "carrier detuning (units of gamma)");
        sub->add_option("--out", out_path, "output CSV path (stdout if omitted)");
        if (with_system)
            sub->add_option("--system", system, "semi | transmitting | lambda")
                ->check(CLI::IsMember({"semi", "transmitting", "lambda"}));
    };

    // rho-ee
    double t_max = 6.0, dr = 0.01;
    int points = 200;
    bool with_numeric = false;
    auto* rho = app.add_subcommand("rho-ee", "excited-state population curve");
    add_common(rho, true);
    rho->add_option("--tmax", t_max, "end time (1/gamma)");
    rho->add_option("--points", points, "samples");
    rho->add_flag("--numeric", with_numeric, "add the grid-solver column");
    rho->add_option("--dr", dr, "grid spacing for --numeric");

    // tau-eff
    double delta_min = 0.1, delta_max = 100.0;
    auto* tau = app.add_subcommand("tau-eff", "effective lifetime vs pulse width");
    tau->add_option("--delta-min", delta_min, "sweep start");
    tau->add_option("--delta-max", delta_max, "sweep end");
    tau->add_option("--points", points, "samples (log-spaced)");
    tau->add_option("--out", out_path, "output CSV path");

    // g2
    double t0 = 0.0, tau_max = 6.0;
    auto* g2c = app.add_subcommand("g2", "two-click correlation vs delay");
    add_common(g2c, true);
    g2c->add_option("--t", t0, "first-click time");
    g2c->add_option("--tau-max", tau_max, "delay range");
    g2c->add_option("--points", points, "samples");

    // p2
    double tau_final_max = 10.0;
    bool baseline = false;
    auto* p2c = app.add_subcommand("p2", "two-photon detection probability vs window");
    add_common(p2c);
    p2c->add_option("--tau-final-max", tau_final_max, "window range");
    p2c->add_option("--points", points, "samples");
    p2c->add_flag("--baseline", baseline, "infinite-detuning reference curve");

    // simulate
    std::string dump_path;
    int audit_samples = 0;
    auto* sim = app.add_subcommand("simulate", "grid-solver run vs closed form");
    add_common(sim, true);
    sim->add_option("--tmax", t_max, "end time (1/gamma)");
    sim->add_option("--dr", dr, "grid spacing (c/gamma)");
    sim->add_option("--dump", dump_path, "binary field-history dump path");
    sim->add_option("--audit", audit_samples, "norm-audit sample count");

    // two-channel
    auto* two = app.add_subcommand("two-channel", "channel probabilities and fidelities");
    add_common(two, true);

    // sweep
    std::string what = "ft";
    auto* swp = app.add_subcommand("sweep", "parameter sweeps (transmission fidelity, p_aa)");
    add_common(swp, true);
    swp->add_option("--what", what, "ft | paa");
    swp->add_option("--delta-min", delta_min, "sweep start");
    swp->add_option("--delta-max", delta_max, "sweep end");
    swp->add_option("--points", points, "samples (log-spaced)");

    // verify
    bool quick = false;
    auto* ver = app.add_subcommand("verify", "run the verification suite");
    ver->add_flag("--quick", quick, "coarser grids (same checks)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        params.validate();
        if (rho->parsed())
            return cmd_rho_ee(params, system, t_max, points, with_numeric, dr, out_path);
        if (tau->parsed()) return cmd_tau_eff(delta_min, delta_max, points, out_path);
        if (g2c->parsed()) return cmd_g2(params, system, t0, tau_max, points, out_path);
        if (p2c->parsed()) return cmd_p2(params, tau_final_max, points, baseline, out_path);
        if (sim->parsed())
            return cmd_simulate(params, system, t_max, dr, dump_path, audit_samples, out_path);
        if (two->parsed()) return cmd_two_channel(params, system, out_path);
        if (swp->parsed())
            return cmd_sweep(params, what, delta_min, delta_max, points, out_path);
        if (ver->parsed()) return cmd_verify(quick);
    } catch (const stimwave::resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return exit_resource;
    } catch (const stimwave::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
