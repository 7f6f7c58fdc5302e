#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "sta/cli.hpp"

using Catch::Approx;
using namespace sta;
using namespace sta::cli;

namespace {

struct Csv {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t col(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == name) return i;
        }
        FAIL("no column " << name);
        return 0;
    }
    double num(std::size_t r, const std::string& name) const { return std::stod(rows[r][col(name)]); }
    bool has_comment(const std::string& needle) const {
        for (const auto& c : comments) {
            if (c.find(needle) != std::string::npos) return true;
        }
        return false;
    }
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

Csv parse(const std::string& text) {
    Csv csv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        REQUIRE(line.find('\r') == std::string::npos);
        if (line.rfind('#', 0) == 0) {
            csv.comments.push_back(line);
        } else if (csv.columns.empty()) {
            csv.columns = split(line);
        } else {
            csv.rows.push_back(split(line));
        }
    }
    return csv;
}

template <class F>
std::string run(F&& cmd, const RunConfig& cfg) {
    std::ostringstream os;
    cmd(cfg, os);
    return os.str();
}

RunConfig dimensionless(const std::string& fam, double gamma, double tf) {
    RunConfig cfg;
    cfg.family = fam;
    cfg.gamma = gamma;
    cfg.tf_dimensionless = tf;
    return cfg;
}

}  // namespace

TEST_CASE("protocol: quintic end points") {
    const Csv csv = parse(run(cmd_protocol, dimensionless("quintic", 10.0, 2.0)));
    REQUIRE(csv.columns == std::vector<std::string>{"t", "b", "bdot", "bddot", "omega2", "imaginary"});
    CHECK(csv.rows.size() == kDefaultNodes);
    CHECK(csv.num(0, "b") == 1.0);
    CHECK(csv.num(csv.rows.size() - 1, "b") == 10.0);
}

TEST_CASE("protocol: dirac impulses as header lines") {
    const std::string out = run(cmd_protocol, dimensionless("dirac", 10.0, 1.0));
    const Csv csv = parse(out);
    std::vector<std::string> impulses;
    for (const auto& c : csv.comments) {
        if (c.rfind("# impulse t=", 0) == 0) impulses.push_back(c);
    }
    REQUIRE(impulses.size() == 2);
    CHECK(impulses[0].find("strength=-9.04987562112") != std::string::npos);
}

TEST_CASE("protocol: no expansion") {
    const Csv csv = parse(run(cmd_protocol, dimensionless("quintic", 1.0, 3.0)));
    for (std::size_t r = 0; r < csv.rows.size(); ++r) CHECK(csv.num(r, "b") == 1.0);
}

TEST_CASE("protocol: imaginary flag") {
    const Csv csv = parse(run(cmd_protocol, dimensionless("bang-bang", 10.0, 1.0)));
    CHECK(csv.rows.front()[csv.col("imaginary")] == "1");
    CHECK(csv.rows.back()[csv.col("imaginary")] == "0");
}

TEST_CASE("protocol: SI trap and durations") {
    RunConfig cfg;
    cfg.preset = "fig1";
    cfg.tf_seconds = 1e-3;
    cfg.family = "quintic";
    const Csv csv = parse(run(cmd_protocol, cfg));
    const TrapSpec si = TrapSpec::from_hz(2500.0, 25.0);
    const double tf = csv.num(csv.rows.size() - 1, "t");
    CHECK(tf == Approx(to_dimensionless(si, 1e-3)).epsilon(1e-11));  // printed with 12 digits
    CHECK(csv.has_comment("t_f_s=0.001"));
}

TEST_CASE("protocol: invalid parameters name the precondition") {
    RunConfig cfg = dimensionless("hybrid", 10.0, 10.0);
    cfg.tau_l = 6.0;
    cfg.tau_s = 5.0;
    try {
        run(cmd_protocol, cfg);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("tau_l + tau_s < t_f") != std::string::npos);
    }
    RunConfig both = dimensionless("quintic", 10.0, 1.0);
    both.omega0_hz = 2500.0;
    both.omegaf_hz = 25.0;
    CHECK_THROWS_AS(run(cmd_protocol, both), Error);
    RunConfig half;
    half.omega0_hz = 2500.0;
    half.tf_seconds = 1e-3;
    CHECK_THROWS_AS(run(cmd_protocol, half), Error);
    CHECK_THROWS_AS(run(cmd_protocol, dimensionless("nonsense", 10.0, 1.0)), Error);
    RunConfig secs = dimensionless("quintic", 10.0, 1.0);
    secs.tf_dimensionless.reset();
    secs.tf_seconds = 1e-3;
    CHECK_THROWS_AS(run(cmd_protocol, secs), Error);
}

TEST_CASE("energy: virial check on the quintic") {
    const Csv csv = parse(run(cmd_energy, dimensionless("quintic", 10.0, 5.0)));
    CHECK(csv.has_comment("# check virial: PASS"));
    CHECK(csv.has_comment("# check bound E_nL: PASS"));
    REQUIRE(csv.columns == std::vector<std::string>{"t", "E", "K", "V", "Ena", "P"});
}

TEST_CASE("energy: dirac equality chain") {
    const Csv csv = parse(run(cmd_energy, dimensionless("dirac", 10.0, 1.0)));
    CHECK(csv.has_comment("# check equality chain: PASS"));
    CHECK(csv.rows.front()[csv.col("P")].empty());
}

TEST_CASE("energy: linear protocol skips the virial check") {
    const Csv csv = parse(run(cmd_energy, dimensionless("linear", 10.0, 5.0)));
    CHECK(csv.has_comment("# check virial: SKIPPED"));
}

TEST_CASE("energy: hybrid with optimized caps") {
    const Csv csv = parse(run(cmd_energy, dimensionless("hybrid", 10.0, 100.0)));
    CHECK(csv.has_comment("# check bound Ena_L: PASS"));
    CHECK_FALSE(csv.rows.front()[csv.col("Ena")].empty());
}

TEST_CASE("sweep: figure 1 data") {
    RunConfig cfg;
    cfg.preset = "fig1";
    cfg.per_decade = 4;
    cfg.sweep_min = 0.1;
    cfg.sweep_max = 100.0;
    const Csv csv = parse(run(cmd_sweep, cfg));
    CHECK(csv.has_comment("quantity=avg_E"));
    double prev_quintic = std::numeric_limits<double>::infinity();
    bool saw_terminal = false;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        if (row[csv.col("value")].empty()) {
            CHECK_FALSE(row[csv.col("reason")].empty());
            continue;
        }
        const double v = csv.num(r, "value"), b = csv.num(r, "bound");
        CHECK(v > b);
        if (row[0] == "quintic") {
            CHECK(v < prev_quintic);
            prev_quintic = v;
        }
        if (row[0] == "bang-bang" && std::abs(csv.num(r, "t_f") - 5.0 * std::numbers::pi) < 1e-9) {
            saw_terminal = true;
            CHECK(v == Approx(0.2525).epsilon(1e-10));
            CHECK(csv.num(r, "t_f_s") == Approx(1e-3).epsilon(1e-9));
        }
    }
    CHECK(saw_terminal);
}

TEST_CASE("sweep: figure 3 data") {
    RunConfig cfg;
    cfg.preset = "fig3";
    cfg.per_decade = 3;
    cfg.sweep_min = 10.0;
    cfg.sweep_max = 1000.0;
    cfg.grid = 801;
    const Csv csv = parse(run(cmd_sweep, cfg));
    CHECK(csv.has_comment("quantity=avg_Ena"));
    std::size_t hybrid_ok = 0, bb_ok = 0;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        if (csv.rows[r][csv.col("value")].empty()) continue;
        CHECK(csv.num(r, "value") >= csv.num(r, "bound") * (1.0 - 1e-6));
        if (csv.rows[r][0] == "hybrid") ++hybrid_ok;
        if (csv.rows[r][0] == "bang-bang-na") ++bb_ok;
    }
    CHECK(hybrid_ok >= 5);
    CHECK(bb_ok >= 1);
}

TEST_CASE("sweep output is byte-stable") {
    RunConfig cfg;
    cfg.preset = "fig1";
    cfg.per_decade = 2;
    cfg.grid = 201;
    CHECK(run(cmd_sweep, cfg) == run(cmd_sweep, cfg));
}

TEST_CASE("parallel map keeps input order") {
    const auto v = parallel_map<int>(100, [](std::size_t i) { return static_cast<int>(i * i); });
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == static_cast<int>(i * i));
}

TEST_CASE("power: figure 4 data") {
    RunConfig cfg;
    const Csv csv = parse(run(cmd_power, cfg));
    CHECK(csv.has_comment("# check septic<=quintic: PASS"));
    const double tf = to_dimensionless(TrapSpec::from_hz(2500.0, 25.0), 8e-3);
    const double edge = 540.0 / (tf * tf * 1.98);
    CHECK(csv.num(0, "P_rel_quintic") == Approx(edge).epsilon(1e-10));
    CHECK(csv.num(csv.rows.size() - 1, "P_rel_quintic") == Approx(10.0 * edge).epsilon(1e-10));
    CHECK(csv.has_comment("integral_quintic=1"));
    std::string integrals;
    for (const auto& c : csv.comments) {
        if (c.find("integral_septic=") != std::string::npos) integrals = c;
    }
    const double septic_integral = std::stod(integrals.substr(integrals.find("integral_septic=") + 16));
    CHECK(septic_integral == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("verify: mutation makes the virial check fail") {
    VerifyOptions opt;
    opt.inject_e2_sign_error = true;
    std::ostringstream os;
    CHECK(cmd_verify(opt, os) == 1);
    CHECK(os.str().find("FAIL [1] virial") != std::string::npos);
    CHECK(os.str().find("FAIL [2]") != std::string::npos);
}

TEST_CASE("verify: coarse grid keeps fourth-order convergence") {
    VerifyOptions opt;
    opt.nodes = 51;
    const auto checks = supporting_checks(opt);
    CHECK(checks.front().id == "S1");
    CHECK(checks.front().pass);
}

TEST_CASE("verify: exit code reflects failures") {
    std::ostringstream os;
    const int code = cmd_verify({}, os);
    const bool any_fail = os.str().find("FAIL") != std::string::npos;
    CHECK(code == (any_fail ? 1 : 0));
    CHECK(os.str().find("PASS [S2]") != std::string::npos);
}
