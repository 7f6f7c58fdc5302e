#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "sta/sta.hpp"

using Catch::Approx;
using namespace sta;

namespace {

const TrapSpec g10 = TrapSpec::dimensionless(10.0);

void check_boundaries(const ScalingCurve& c, double gamma, double tol) {
    CHECK(c.b.front() == Approx(1.0).margin(tol));
    CHECK(c.b.back() == Approx(gamma).margin(tol));
    CHECK(c.bdot.front() == Approx(0.0).margin(tol));
    CHECK(c.bdot.back() == Approx(0.0).margin(tol));
}

}  // namespace

TEST_CASE("quintic boundaries and midpoint") {
    const ScalingCurve c = quintic(g10, 2.0, 2001);
    check_boundaries(c, 10.0, 1e-12);
    CHECK(c.bddot.front() == Approx(0.0).margin(1e-12));
    CHECK(c.bddot.back() == Approx(0.0).margin(1e-11));
    CHECK(c.b[1000] == Approx(5.5).epsilon(1e-14));
    CHECK(c.analytic->evaluate(1.0).b == Approx(5.5).epsilon(1e-14));
}

TEST_CASE("no expansion gives b = 1") {
    const TrapSpec g1 = TrapSpec::dimensionless(1.0);
    for (double b : quintic(g1, 3.0).b) CHECK(b == 1.0);
    const auto shot = constant_power_shoot(g1, 3.0);
    for (double b : shot.protocol.curve.b) CHECK(b == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("septic meets all six end conditions") {
    for (auto [c3, c4] : {std::pair{0.0, 0.0}, std::pair{78.5088, -459.7638}, std::pair{-3.0, 17.0}}) {
        const ScalingCurve c = septic(g10, 4.0, c3, c4);
        check_boundaries(c, 10.0, 1e-10);
        CHECK(c.bddot.front() == Approx(0.0).margin(1e-12));
        CHECK(c.bddot.back() == Approx(0.0).margin(1e-9));
    }
}

TEST_CASE("septic contains the quintic") {
    const auto q = quintic_septic_point(g10);
    const ScalingCurve a = septic(g10, 3.0, q[0], q[1]);
    const ScalingCurve b = quintic(g10, 3.0);
    for (std::size_t i = 0; i < a.size(); i += 50) CHECK(a.b[i] == Approx(b.b[i]).epsilon(1e-12));
    const auto co = septic_coefficients(10.0, q[0], q[1]);
    CHECK(co[5] == Approx(6.0 * 9.0).margin(1e-12));
    CHECK(co[6] == Approx(0.0).margin(1e-12));
    CHECK(co[7] == Approx(0.0).margin(1e-12));
}

TEST_CASE("septic collapse is reported") {
    try {
        septic(g10, 1.0, -500.0, 0.0);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::collapse);
    }
}

TEST_CASE("quasi-optimal curve") {
    CHECK(quasi_optimal_B(g10, 1.0) == Approx(9.04987562112089).epsilon(1e-14));
    const ScalingCurve c = quasi_optimal(g10, 1.0);
    CHECK(c.b.front() == 1.0);
    CHECK(c.b.back() == Approx(10.0).epsilon(1e-14));
    CHECK(c.bdot.front() == Approx(9.04987562112089).epsilon(1e-13));
    // derivatives against central differences
    const auto& g = c.grid;
    for (std::size_t i = 200; i < 1900; i += 300) {
        CHECK(c.bdot[i] == Approx((c.b[i + 1] - c.b[i - 1]) / (g[i + 1] - g[i - 1])).epsilon(1e-6));
        CHECK(c.bddot[i] == Approx((c.bdot[i + 1] - c.bdot[i - 1]) / (g[i + 1] - g[i - 1])).epsilon(1e-4));
        CHECK(c.bdddot[i] == Approx((c.bddot[i + 1] - c.bddot[i - 1]) / (g[i + 1] - g[i - 1])).epsilon(1e-3));
    }
}

TEST_CASE("dirac impulse strengths") {
    const Protocol p = dirac_impulse_protocol(g10, 1.0);
    REQUIRE(p.profile.impulses.size() == 2);
    CHECK(p.profile.impulses[0].time == 0.0);
    CHECK(p.profile.impulses[0].strength == Approx(-9.04987562112089).epsilon(1e-13));
    CHECK(p.profile.impulses[1].time == 1.0);
    CHECK(p.profile.impulses[1].strength == Approx(0.8995012437887911).epsilon(1e-12));
    CHECK(p.curve.bdot_initial == Approx(0.0).margin(1e-12));
    CHECK(p.curve.bdot_final == Approx(0.0).margin(1e-12));
    for (double tf : {1e-3, 0.1, 10.0, 1e3}) CHECK(dirac_impulse_protocol(g10, tf).profile.impulses[0].strength < 0.0);
}

TEST_CASE("hybrid caps are C1 with the right ends") {
    const double tf = 10.0, L = 1.5, S = 3.0;
    const ScalingCurve c = hybrid_caps(g10, tf, L, S);
    check_boundaries(c, 10.0, 1e-12);
    const auto pieces = c.analytic->pieces();
    REQUIRE(pieces.size() == 3);
    for (std::size_t k = 0; k + 1 < pieces.size(); ++k) {
        const double t = pieces[k].t_end;
        const CurvePoint l = pieces[k].eval(t), r = pieces[k + 1].eval(t);
        CHECK(l.b == Approx(r.b).margin(1e-12));
        CHECK(l.bdot == Approx(r.bdot).margin(1e-12));
    }
    const CapCoefficients co = hybrid_cap_coefficients(g10, tf, L, S);
    for (double t : {0.3, 1.2}) {
        const double s = t / tf;
        const double f = co.launch[0] + s * (co.launch[1] + s * (co.launch[2] + s * co.launch[3]));
        CHECK(f == Approx(pieces[0].eval(t).b).epsilon(1e-13));
    }
    for (double t : {7.5, 9.9}) {
        const double s = t / tf;
        const double g = co.stop[0] + s * (co.stop[1] + s * (co.stop[2] + s * co.stop[3]));
        CHECK(g == Approx(pieces[2].eval(t).b).epsilon(1e-13));
    }
}

TEST_CASE("short caps approach the linear protocol") {
    const double tf = 10.0;
    const ScalingCurve h = hybrid_caps(g10, tf, 1e-3 * tf, 1e-3 * tf);
    const Protocol lin = linear_bottom(g10, tf);
    for (double t : {0.5, 2.0, 5.0, 9.0}) {
        CHECK(h.analytic->evaluate(t).b == Approx(lin.curve.analytic->evaluate(t).b).epsilon(1e-12));
    }
}

TEST_CASE("hybrid parameter errors") {
    CHECK_THROWS_AS(hybrid_caps(g10, 10.0, 0.0, 1.0), Error);
    CHECK_THROWS_AS(hybrid_caps(g10, 10.0, 6.0, 4.0), Error);
    CHECK_THROWS_AS(hybrid_caps(g10, -1.0, 1.0, 1.0), Error);
}

TEST_CASE("linear bottom protocol") {
    const Protocol p = linear_bottom(g10, 5.0);
    CHECK(p.curve.b.front() == 1.0);
    CHECK(p.curve.b.back() == Approx(10.0));
    CHECK(std::sqrt(p.profile.omega2.back()) == Approx(0.01).epsilon(1e-12));
    CHECK(ermakov_residual(p.curve, p.profile) < 1e-12);
    CHECK_FALSE(meets_boundary_conditions(family::LinearBottom{}));
}

TEST_CASE("bang-bang at the longest duration") {
    const BangBang bb = bang_bang(g10, 0.0, 0.1);
    CHECK(bb.t1 < 1e-12);
    CHECK(bb.duration() == Approx(5.0 * std::numbers::pi).epsilon(1e-15));
    CHECK(bang_bang_max_duration(g10) == Approx(5.0 * std::numbers::pi).epsilon(1e-15));
    const TrapSpec si = TrapSpec::from_hz(2500.0, 25.0);
    CHECK(from_dimensionless(si, bang_bang_max_duration(si)) == Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("bang-bang segments match at t1") {
    const BangBang bb = bang_bang(g10, 1.0, 1.0);
    const auto pieces = bb.protocol.curve.analytic->pieces();
    REQUIRE(pieces.size() == 2);
    const CurvePoint l = pieces[0].eval(bb.t1), r = pieces[1].eval(bb.t1);
    CHECK(std::abs(l.b - r.b) < 1e-10);
    CHECK(std::abs(l.bdot - r.bdot) < 1e-10);
    check_boundaries(bb.protocol.curve, 10.0, 1e-10);
    CHECK(ermakov_residual(bb.protocol.curve, bb.protocol.profile) < 1e-9);
}

TEST_CASE("bang-bang for a requested duration") {
    for (double tf : {0.05, 1.0, 7.0, 15.0}) {
        const BangBang bb = bang_bang_for_duration(g10, tf);
        CHECK(bb.duration() == Approx(tf).epsilon(1e-12));
        CHECK(bb.omega1 == bb.omega2);
        check_boundaries(bb.protocol.curve, 10.0, 1e-8);
    }
    CHECK_THROWS_AS(bang_bang_for_duration(g10, 16.0), Error);
}

TEST_CASE("bang-bang precondition errors") {
    try {
        bang_bang(g10, 1.0, 0.05);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::domain);
        CHECK(std::string(e.what()).find("omega2") != std::string::npos);
    }
    CHECK_THROWS_AS(bang_bang(g10, -1.0, 1.0), Error);
    CHECK_THROWS_AS(bang_bang(TrapSpec::dimensionless(1.0), 1.0, 1.0), Error);
}

TEST_CASE("NA bang-bang matching times") {
    const BangBang bb = bang_bang_na(g10, 1.0);
    CHECK(bb.t1 == Approx(9.9).margin(1e-12));
    CHECK(bb.t2 == Approx(0.09966865249116202).margin(1e-12));
    CHECK(bb.protocol.curve.b_final() == Approx(10.0).margin(1e-8));
    CHECK(bb.protocol.curve.bdot_final == Approx(0.0).margin(1e-8));
    CHECK(bb.protocol.profile.min_omega2() >= 0.0);
    const BangBang fast = bang_bang_na(TrapSpec::dimensionless(100.0), 1e3);
    CHECK(fast.duration() / 100.0 == Approx(1.0).margin(1e-3));
    CHECK_THROWS_AS(bang_bang_na(g10, 0.001), Error);
    CHECK_THROWS_AS(bang_bang_na(g10, 0.0), Error);
}

TEST_CASE("NA bang-bang for a requested duration") {
    for (double tf : {10.0, 12.0, 15.7}) CHECK(bang_bang_na_for_duration(g10, tf).duration() == Approx(tf).epsilon(1e-12));
    CHECK_THROWS_AS(bang_bang_na_for_duration(g10, 9.0), Error);
    CHECK_THROWS_AS(bang_bang_na_for_duration(g10, 16.0), Error);
}

TEST_CASE("constant-power shooting keeps the power constant") {
    for (double tf : {5.0, 20.0}) {
        const ConstantPowerShot shot = constant_power_shoot(g10, tf);
        const PowerTrace pw = power(shot.protocol.curve, shot.protocol.profile, g10);
        double worst = 0.0;
        for (std::size_t i = 2; i + 2 < pw.P_rel.size(); ++i) worst = std::max(worst, std::abs(pw.P_rel[i] - 1.0));
        CHECK(worst < 1e-6);
        CHECK(std::abs(shot.bdot_final) > 1e-3);  // end conditions missed
    }
}

TEST_CASE("make_protocol dispatches every family") {
    const std::vector<Family> fams{family::Quintic{}, family::Septic{1.0, 2.0}, family::QuasiOptimal{}, family::DiracImpulse{},
                                   family::HybridCaps{1.0, 1.0}, family::LinearBottom{}, family::BangBangEqual{},
                                   family::BangBang{1.0, 1.0}, family::BangBangNA{1.0}, family::ConstantPowerShoot{}};
    for (const auto& f : fams) {
        const Protocol p = make_protocol({f, 5.0, g10}, 101);
        CHECK(p.curve.size() == p.profile.omega2.size());
        CHECK_FALSE(family_name(f).empty());
    }
}

TEST_CASE("mean-value bounds hold for random boundary-respecting curves") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> tfd(0.2, 60.0), frac(0.02, 0.45), gam(1.5, 50.0);
    for (int trial = 0; trial < 40; ++trial) {
        const TrapSpec s = TrapSpec::dimensionless(gam(rng));
        const double tf = tfd(rng);
        const ScalingCurve c = trial % 2 ? quintic(s, tf) : hybrid_caps(s, tf, frac(rng) * tf, frac(rng) * tf);
        double vmax = 0.0, amax = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            vmax = std::max(vmax, c.bdot[i]);
            amax = std::max(amax, std::abs(c.bddot[i]));
        }
        const double d = s.gamma() - 1.0;
        CHECK(vmax >= d / tf * (1.0 - 1e-12));
        CHECK(amax >= 2.0 * d / (tf * tf) * (1.0 - 1e-12));
    }
}
