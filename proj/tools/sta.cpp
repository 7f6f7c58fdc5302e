// sta: design trap-expansion protocols and report their energies.

#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "sta/cli.hpp"

int main(int argc, char** argv) {
    using namespace sta::cli;
    RunConfig cfg;
    sta::VerifyOptions vopt;
    std::string out_path;

    CLI::App app{"Shortcut-to-adiabaticity expansion of a harmonic trap"};
    app.set_config("--config", "", "flat key=value file mirroring the flags; flags override it");
    app.fallthrough();
    app.require_subcommand(1);

    app.add_option("--omega0-hz", cfg.omega0_hz, "initial trap frequency in Hz (times 2 pi)");
    app.add_option("--omegaf-hz", cfg.omegaf_hz, "final trap frequency in Hz (times 2 pi)");
    app.add_option("--gamma", cfg.gamma, "sqrt(omega0/omega_f), dimensionless mode");
    app.add_option("--n", cfg.n, "mode index")->check(CLI::NonNegativeNumber);
    app.add_option("--tf", cfg.tf_seconds, "duration in seconds (SI trap)");
    app.add_option("--tf-dimensionless", cfg.tf_dimensionless, "duration in units of 1/omega0");
    app.add_option("--family", cfg.family,
                   "quintic, septic, quasi-optimal, dirac, hybrid, linear, bang-bang, bang-bang-na, constant-power");
    app.add_option("--c3", cfg.c3, "septic coefficient c3");
    app.add_option("--c4", cfg.c4, "septic coefficient c4");
    app.add_option("--beta", cfg.beta, "NA bang-bang omega2/omega0");
    app.add_option("--omega1", cfg.omega1, "bang-bang omega1 in units of omega0");
    app.add_option("--omega2", cfg.omega2, "bang-bang omega2 in units of omega0");
    app.add_option("--tau-l", cfg.tau_l, "hybrid launching cap, units of 1/omega0 (optimized if omitted)");
    app.add_option("--tau-s", cfg.tau_s, "hybrid stopping cap, units of 1/omega0");
    app.add_option("--grid", cfg.grid, "nodes per smooth segment")->check(CLI::Range(3, 10000001));
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--preset", cfg.preset, "fig1, fig3 or fig4")->check(CLI::IsMember({"fig1", "fig3", "fig4"}));
    app.add_option("--sweep-min", cfg.sweep_min, "smallest swept t_f, units of 1/omega0");
    app.add_option("--sweep-max", cfg.sweep_max, "largest swept t_f, units of 1/omega0");
    app.add_option("--per-decade", cfg.per_decade, "log-spaced sweep points per decade");
    app.add_option("--quantity", cfg.quantity, "sweep quantity: energy or na")->check(CLI::IsMember({"energy", "na"}));

    auto* protocol = app.add_subcommand("protocol", "b(t) and omega^2(t) of one protocol");
    auto* energy = app.add_subcommand("energy", "energy trace and summary of one protocol");
    auto* sweep = app.add_subcommand("sweep", "averaged energy versus t_f for several families");
    auto* power = app.add_subcommand("power", "relative power of the quintic and optimized septic");
    auto* verify = app.add_subcommand("verify", "run the invariant suite");
    verify->add_flag("--inject-e2-sign-error", vopt.inject_e2_sign_error, "mutation test: corrupt the kinetic route");

    CLI11_PARSE(app, argc, argv);
    vopt.nodes = cfg.grid;

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot open " << out_path << "\n";
            return 2;
        }
    }
    std::ostream& os = out_path.empty() ? std::cout : file;

    try {
        if (*protocol) return cmd_protocol(cfg, os);
        if (*energy) return cmd_energy(cfg, os);
        if (*sweep) return cmd_sweep(cfg, os);
        if (*power) return cmd_power(cfg, os);
        if (*verify) return cmd_verify(vopt, os);
    } catch (const sta::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
