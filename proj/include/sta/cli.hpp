#pragma once

// Command implementations behind the `sta` tool. Each writes CSV (with `#` metadata lines) to a
// stream so that tests can drive them without a process boundary.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "sta/energies.hpp"
#include "sta/optimize.hpp"
#include "sta/protocols.hpp"
#include "sta/trap.hpp"
#include "sta/verify.hpp"

namespace sta::cli {

struct RunConfig {
    std::optional<double> omega0_hz;
    std::optional<double> omegaf_hz;
    std::optional<double> gamma;
    int n = 0;
    std::optional<double> tf_seconds;
    std::optional<double> tf_dimensionless;
    std::string family = "quintic";
    double c3 = 0.0;
    double c4 = 0.0;
    std::optional<double> beta;
    std::optional<double> omega1;  // units of omega0
    std::optional<double> omega2;  // units of omega0
    std::optional<double> tau_l;   // units of 1/omega0
    std::optional<double> tau_s;
    std::size_t grid = kDefaultNodes;
    std::string preset;
    // sweep
    std::optional<double> sweep_min;  // dimensionless t_f
    std::optional<double> sweep_max;
    int per_decade = 60;
    std::string quantity;  // "energy" or "na"
};

/// Fills unset fields from a named preset (fig1, fig3, fig4).
inline void apply_preset(RunConfig& cfg) {
    if (cfg.preset.empty()) return;
    require(cfg.preset == "fig1" || cfg.preset == "fig3" || cfg.preset == "fig4", Errc::invalid_argument,
            "unknown preset '" + cfg.preset + "' (expected fig1, fig3 or fig4)");
    if (!cfg.gamma && !cfg.omega0_hz && !cfg.omegaf_hz) {
        cfg.omega0_hz = 2500.0;
        cfg.omegaf_hz = 25.0;
    }
    if (cfg.preset == "fig1" && cfg.quantity.empty()) cfg.quantity = "energy";
    if (cfg.preset == "fig3" && cfg.quantity.empty()) cfg.quantity = "na";
    if (cfg.preset == "fig4" && !cfg.tf_seconds && !cfg.tf_dimensionless) cfg.tf_seconds = 8e-3;
}

/// Exactly one of {SI pair, gamma}; SI needs both frequencies.
inline TrapSpec resolve_spec(const RunConfig& cfg) {
    const bool si = cfg.omega0_hz || cfg.omegaf_hz;
    require(!(si && cfg.gamma), Errc::invalid_argument, "give either --omega0-hz/--omegaf-hz or --gamma, not both");
    if (si) {
        require(cfg.omega0_hz && cfg.omegaf_hz, Errc::invalid_argument, "SI trap needs both --omega0-hz and --omegaf-hz");
        return TrapSpec::from_hz(*cfg.omega0_hz, *cfg.omegaf_hz, cfg.n);
    }
    require(cfg.gamma.has_value(), Errc::invalid_argument, "trap unspecified: give --gamma or --omega0-hz/--omegaf-hz");
    return TrapSpec::dimensionless(*cfg.gamma, cfg.n);
}

inline bool is_si(const TrapSpec& spec) { return spec.hbar != 1.0; }

/// Dimensionless spec with the same gamma and n; library math runs on it.
inline TrapSpec reduced(const TrapSpec& spec) { return TrapSpec::dimensionless(spec.gamma(), spec.n); }

inline std::optional<double> resolve_tf(const RunConfig& cfg, const TrapSpec& spec) {
    require(!(cfg.tf_seconds && cfg.tf_dimensionless), Errc::invalid_argument, "give either --tf or --tf-dimensionless");
    if (cfg.tf_dimensionless) return *cfg.tf_dimensionless;
    if (cfg.tf_seconds) {
        require(is_si(spec), Errc::invalid_argument, "--tf in seconds needs an SI trap; use --tf-dimensionless with --gamma");
        return to_dimensionless(spec, *cfg.tf_seconds);
    }
    return std::nullopt;
}

/// Protocol family from the config. Hybrid without explicit caps runs the cap optimizer.
inline Family resolve_family(const RunConfig& cfg, const TrapSpec& spec, std::optional<double> t_f) {
    const std::string& f = cfg.family;
    auto need_tf = [&] { require(t_f.has_value(), Errc::invalid_argument, "family '" + f + "' needs --tf or --tf-dimensionless"); };
    if (f == "quintic") return need_tf(), Family{family::Quintic{}};
    if (f == "septic") return need_tf(), Family{family::Septic{cfg.c3, cfg.c4}};
    if (f == "quasi-optimal") return need_tf(), Family{family::QuasiOptimal{}};
    if (f == "dirac") return need_tf(), Family{family::DiracImpulse{}};
    if (f == "linear") return need_tf(), Family{family::LinearBottom{}};
    if (f == "constant-power") return need_tf(), Family{family::ConstantPowerShoot{}};
    if (f == "hybrid") {
        need_tf();
        if (cfg.tau_l || cfg.tau_s) {
            require(cfg.tau_l && cfg.tau_s, Errc::invalid_argument, "hybrid needs both --tau-l and --tau-s (or neither)");
            return family::HybridCaps{*cfg.tau_l, *cfg.tau_s};
        }
        const auto r = optimize_caps(spec, *t_f);
        return family::HybridCaps{r.params[0], r.params[1]};
    }
    if (f == "bang-bang") {
        if (cfg.omega1 || cfg.omega2) {
            require(cfg.omega1 && cfg.omega2, Errc::invalid_argument, "bang-bang needs both --omega1 and --omega2 (or --tf)");
            return family::BangBang{*cfg.omega1, *cfg.omega2};
        }
        need_tf();
        return family::BangBangEqual{};
    }
    if (f == "bang-bang-na") {
        if (cfg.beta) return family::BangBangNA{*cfg.beta};
        need_tf();
        return family::BangBangNA{0.0};  // resolved from t_f in build_protocol
    }
    throw Error(Errc::invalid_argument, "unknown family '" + f +
                                            "' (quintic, septic, quasi-optimal, dirac, hybrid, linear, bang-bang, "
                                            "bang-bang-na, constant-power)");
}

inline Protocol build_protocol(const Family& fam, const TrapSpec& spec, std::optional<double> t_f, std::size_t nodes) {
    if (const auto* na = std::get_if<family::BangBangNA>(&fam); na && na->beta == 0.0) {
        return bang_bang_na_for_duration(spec, *t_f, nodes).protocol;
    }
    return make_protocol({fam, t_f.value_or(1.0), spec}, nodes);
}

// ---------------------------------------------------------------------------------------------
// Output helpers

inline std::string num(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline void header(std::ostream& os, const std::string& command, const TrapSpec& spec, const RunConfig& cfg) {
    os << "# sta " << command << "\n";
    os << "# gamma=" << num(spec.gamma()) << " n=" << spec.n;
    if (is_si(spec)) os << " omega0_rad_s=" << num(spec.omega0) << " omegaf_rad_s=" << num(spec.omega_f);
    os << " nodes_per_segment=" << cfg.grid << "\n";
    os << "# units: time in 1/omega0, omega^2 in omega0^2, energy and power in hbar*omega0 (per omega0 for power)\n";
}

/// Deterministic parallel map: results land at their input index.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, F&& f) {
    std::vector<T> out(count);
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) out[i] = f(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// protocol

inline int cmd_protocol(RunConfig cfg, std::ostream& os) {
    apply_preset(cfg);
    const TrapSpec si = resolve_spec(cfg);
    const TrapSpec spec = reduced(si);
    const auto t_f = resolve_tf(cfg, si);
    const Family fam = resolve_family(cfg, spec, t_f);
    const Protocol p = build_protocol(fam, spec, t_f, cfg.grid);

    header(os, "protocol", si, cfg);
    os << "# family=" << family_name(fam) << " t_f=" << num(p.curve.duration());
    if (is_si(si)) os << " t_f_s=" << num(from_dimensionless(si, p.curve.duration()));
    if (const auto* h = std::get_if<family::HybridCaps>(&fam)) os << " tau_l=" << num(h->tau_l) << " tau_s=" << num(h->tau_s);
    os << "\n";
    for (const auto& imp : p.profile.impulses) os << "# impulse t=" << num(imp.time) << " strength=" << num(imp.strength) << "\n";
    os << "t,b,bdot,bddot,omega2,imaginary\n";
    for (std::size_t i = 0; i < p.curve.size(); ++i) {
        const double w2 = p.profile.omega2[i];
        os << num(p.curve.grid[i]) << ',' << num(p.curve.b[i]) << ',' << num(p.curve.bdot[i]) << ','
           << num(p.curve.bddot[i]) << ',' << num(w2) << ',' << (w2 < -kOmega2Tolerance ? 1 : 0) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------------------------
// energy

inline int cmd_energy(RunConfig cfg, std::ostream& os) {
    apply_preset(cfg);
    const TrapSpec si = resolve_spec(cfg);
    const TrapSpec spec = reduced(si);
    const auto t_f = resolve_tf(cfg, si);
    const Family fam = resolve_family(cfg, spec, t_f);
    const Protocol p = build_protocol(fam, spec, t_f, cfg.grid);
    const EnergyTrace e = analyze(p, spec);
    const double tf = p.curve.duration();
    const BoundReport br = bounds(spec, tf);
    const bool bc = meets_boundary_conditions(fam);

    header(os, "energy", si, cfg);
    os << "# family=" << family_name(fam) << " t_f=" << num(tf) << "\n";
    auto line = [&](const char* key, double v) { os << "# " << key << "=" << num(v) << "\n"; };
    line("avg_E", e.avg_E);
    line("avg_E2", e.avg_E2);
    line("avg_K", e.avg_K);
    line("avg_V", e.avg_V);
    const double virial = std::abs(e.avg_K / e.avg_V - 1.0);
    line("virial_ratio", virial);
    line("delta_delta", e.delta_delta);
    line("avg_Ena", e.avg_Ena);
    line("E_nL", br.E_nL.quadrature);
    line("E_nL_closed_form", br.E_nL.closed_form);
    line("Ena_L", br.Ena_L);
    line("E_initial", e.E_initial);
    line("E_final", e.E_final);

    auto verdict = [&](const char* name, bool applicable, bool ok, const std::string& detail) {
        os << "# check " << name << ": " << (!applicable ? "SKIPPED" : ok ? "PASS" : "FAIL") << " " << detail << "\n";
    };
    verdict("virial", bc, virial < 1e-6, "|K/V-1|=" + num(virial) + " tol=1e-6");
    verdict("bound E_nL", bc, e.avg_E >= br.E_nL.quadrature * (1.0 - 1e-6),
            "avg_E/E_nL=" + num(e.avg_E / br.E_nL.quadrature));
    verdict("bound Ena_L", bc && e.has_na(), e.avg_Ena >= br.Ena_L * (1.0 - 1e-6),
            e.has_na() ? "avg_Ena/Ena_L=" + num(e.avg_Ena / br.Ena_L) : "undefined (omega^2 < 0 or impulses)");
    if (std::holds_alternative<family::DiracImpulse>(fam)) {
        const double d = std::abs(e.avg_E - br.E_nL.quadrature) / br.E_nL.quadrature;
        verdict("equality chain", true, d <= 1e-6, "|avg_E-E_nL|/E_nL=" + num(d) + " tol=1e-6");
    }

    os << "t,E,K,V,Ena,P\n";
    for (std::size_t i = 0; i < p.curve.size(); ++i) {
        os << num(e.grid[i]) << ',' << num(e.E[i]) << ',' << num(e.K[i]) << ',' << num(e.V[i]) << ','
           << (e.has_na() ? num(e.Ena[i]) : "") << ',' << (e.P.empty() ? "" : num(e.P[i])) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------------------------
// sweep

struct SweepRow {
    std::string family;
    double t_f = 0.0;
    double value = std::nan("");
    double bound = std::nan("");
    std::string reason;
};

inline std::vector<double> sweep_points(double lo, double hi, int per_decade) {
    require(lo > 0.0 && hi > lo, Errc::invalid_argument, "sweep range must satisfy 0 < min < max");
    require(per_decade > 0, Errc::invalid_argument, "--per-decade must be positive");
    const auto count = static_cast<std::size_t>(std::ceil(std::log10(hi / lo) * per_decade)) + 1;
    return detail::log_space(lo, hi, count);
}

inline int cmd_sweep(RunConfig cfg, std::ostream& os) {
    if (cfg.preset.empty() && cfg.quantity.empty()) cfg.preset = "fig1";
    apply_preset(cfg);
    const TrapSpec si = resolve_spec(cfg);
    const TrapSpec spec = reduced(si);
    const std::string q = cfg.quantity.empty() ? "energy" : cfg.quantity;
    require(q == "energy" || q == "na", Errc::invalid_argument, "--quantity must be 'energy' or 'na'");
    const bool na = q == "na";
    const double lo = cfg.sweep_min.value_or(na ? 1.0 : 0.1);
    const double hi = cfg.sweep_max.value_or(na ? 1e4 : 1e3);
    const std::vector<double> ts = sweep_points(lo, hi, cfg.per_decade);
    const std::size_t N = cfg.grid;

    auto bound_at = [&](double tf) { return na ? na_lower_bound(spec, tf) : lower_bound_avg_energy(spec, tf).quadrature; };
    auto value_of = [&](const Protocol& p) { return na ? analyze(p, spec).avg_Ena : analyze(p, spec).avg_E; };
    auto guarded = [&](const std::string& fam, double tf, const std::function<Protocol()>& make) {
        SweepRow r{fam, tf, std::nan(""), bound_at(tf), ""};
        try {
            const Protocol p = make();
            r.t_f = p.curve.duration();
            r.value = value_of(p);
            if (std::isnan(r.value)) r.reason = "omega^2 < 0 somewhere";
        } catch (const Error& e) {
            r.reason = to_string(e.code());
        }
        return r;
    };

    std::vector<std::string> families = na ? std::vector<std::string>{"hybrid", "quintic", "bang-bang-na"}
                                           : std::vector<std::string>{"quintic", "bang-bang"};
    std::vector<SweepRow> rows;
    for (const auto& fam : families) {
        std::vector<SweepRow> part = parallel_map<SweepRow>(ts.size(), [&](std::size_t i) {
            const double tf = ts[i];
            if (fam == "quintic") return guarded(fam, tf, [&] { return make_protocol({family::Quintic{}, tf, spec}, N); });
            if (fam == "bang-bang") {
                if (tf > bang_bang_max_duration(spec)) return SweepRow{fam, tf, std::nan(""), bound_at(tf), "t_f > t_f^max"};
                return guarded(fam, tf, [&] { return bang_bang_for_duration(spec, tf, N).protocol; });
            }
            if (fam == "bang-bang-na") return guarded(fam, tf, [&] { return bang_bang_na_for_duration(spec, tf, N).protocol; });
            return guarded(fam, tf, [&] {
                const auto r = optimize_caps(spec, tf);
                return make_protocol({family::HybridCaps{r.params[0], r.params[1]}, tf, spec}, N);
            });
        });
        rows.insert(rows.end(), part.begin(), part.end());
        // terminal points at the longest reachable duration
        if (fam == "bang-bang" || fam == "bang-bang-na") {
            const double tmax = bang_bang_max_duration(spec);
            if (tmax >= lo && tmax <= hi) {
                rows.push_back(guarded(fam, tmax, [&] {
                    return fam == "bang-bang" ? bang_bang_for_duration(spec, tmax, N).protocol
                                              : bang_bang_na_for_duration(spec, tmax, N).protocol;
                }));
            }
        }
    }

    header(os, "sweep", si, cfg);
    os << "# quantity=" << (na ? "avg_Ena" : "avg_E") << " bound=" << (na ? "Ena_L" : "E_nL")
       << " points_per_decade=" << cfg.per_decade << "\n";
    os << "family,t_f," << (is_si(si) ? "t_f_s," : "") << "value,bound,reason\n";
    for (const auto& r : rows) {
        os << r.family << ',' << num(r.t_f) << ',';
        if (is_si(si)) os << num(from_dimensionless(si, r.t_f)) << ',';
        os << num(r.value) << ',' << num(r.bound) << ',' << r.reason << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------------------------
// power

inline int cmd_power(RunConfig cfg, std::ostream& os) {
    if (cfg.preset.empty() && !cfg.gamma && !cfg.omega0_hz) cfg.preset = "fig4";
    apply_preset(cfg);
    const TrapSpec si = resolve_spec(cfg);
    const TrapSpec spec = reduced(si);
    const auto t_f = resolve_tf(cfg, si);
    require(t_f.has_value(), Errc::invalid_argument, "power needs --tf or --tf-dimensionless");
    const std::size_t N = std::max<std::size_t>(cfg.grid, kPowerNodes);

    const OptimizationResult opt = optimize_septic_power(spec, *t_f, N);
    const ScalingCurve qc = quintic(spec, *t_f, N);
    const ScalingCurve sc = septic(spec, *t_f, opt.params[0], opt.params[1], N);
    const PowerTrace qp = power(qc, inverse_engineer(qc), spec);
    const PowerTrace sp = power(sc, inverse_engineer(sc), spec);

    header(os, "power", si, cfg);
    os << "# t_f=" << num(*t_f);
    if (is_si(si)) os << " t_f_s=" << num(from_dimensionless(si, *t_f));
    os << "\n# septic c3=" << num(opt.params[0]) << " c4=" << num(opt.params[1]) << "\n";
    os << "# peak_quintic=" << num(qp.peak_rel) << " peak_septic=" << num(sp.peak_rel) << "\n";
    os << "# integral_quintic=" << num(qp.integral_rel) << " integral_septic=" << num(sp.integral_rel) << "\n";
    os << "# check septic<=quintic: " << (sp.peak_rel <= qp.peak_rel ? "PASS" : "FAIL") << "\n";
    os << "s,P_rel_quintic,P_rel_septic\n";
    for (std::size_t i = 0; i < qc.size(); ++i) {
        os << num(qc.grid[i] / *t_f) << ',' << num(qp.P_rel[i]) << ',' << num(sp.P_rel[i]) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------------------------
// verify

/// Runs the acceptance criteria and the supporting invariants; returns 1 if any check fails.
inline int cmd_verify(const VerifyOptions& opt, std::ostream& os) {
    std::vector<Check> checks = acceptance_checks(opt);
    const std::vector<Check> extra = supporting_checks(opt);
    checks.insert(checks.end(), extra.begin(), extra.end());
    const int failures = print_checks(checks, os);
    os << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed") << "\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace sta::cli
