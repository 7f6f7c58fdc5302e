#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sta/sta.hpp"

using Catch::Approx;
using namespace sta;

namespace {
const TrapSpec g10 = TrapSpec::dimensionless(10.0);
}

TEST_CASE("inverse engineering satisfies the Ermakov equation") {
    for (double tf : {0.5, 5.0, 50.0}) {
        const ScalingCurve c = quintic(g10, tf);
        const FrequencyProfile p = inverse_engineer(c);
        CHECK(ermakov_residual(c, p) < 1e-9);
        CHECK(p.omega2.front() == Approx(1.0).epsilon(1e-12));
        CHECK(p.omega2.back() == Approx(1e-4).epsilon(1e-12));
        CHECK(p.has_rate());
    }
}

TEST_CASE("analytic omega^2 rate matches finite differences") {
    const ScalingCurve c = septic(g10, 3.0, 20.0, -100.0);
    const FrequencyProfile p = inverse_engineer(c);
    const auto& g = c.grid;
    for (std::size_t i = 100; i + 100 < c.size(); i += 250) {
        const double fd = (p.omega2[i + 1] - p.omega2[i - 1]) / (g[i + 1] - g[i - 1]);
        CHECK(p.omega2_rate[i] == Approx(fd).epsilon(1e-4));
    }
}

TEST_CASE("forward solve reproduces inverse-engineered curves") {
    for (double tf : {1.0, 10.0, 25.0}) {
        const ScalingCurve c = quintic(g10, tf);
        const ScalingCurve back = forward_solve(inverse_engineer(c), 1.0, 0.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) worst = std::max(worst, std::abs(back.b[i] - c.b[i]));
        CHECK(worst < 1e-6);
        CHECK(back.bdot_final == Approx(0.0).margin(1e-6));
    }
}

TEST_CASE("forward solve across piecewise constant bang-bang frequencies") {
    const BangBang bb = bang_bang(g10, 1.0, 1.0);
    const ScalingCurve back = forward_solve(bb.protocol.profile, 1.0, 0.0);
    CHECK(back.b_final() == Approx(10.0).epsilon(1e-8));
    CHECK(back.bdot_final == Approx(0.0).margin(1e-7));
}

TEST_CASE("forward solve applies Dirac kicks") {
    const Protocol d = dirac_impulse_protocol(g10, 1.0);
    const ScalingCurve back = forward_solve(d.profile, 1.0, 0.0);
    CHECK(back.b0_plus_dot == Approx(d.curve.b0_plus_dot).epsilon(1e-12));
    CHECK(back.b_final() == Approx(10.0).epsilon(1e-7));
    CHECK(back.bdot_final == Approx(0.0).margin(1e-6));
}

TEST_CASE("forward solve of a constant trap stays at rest") {
    const FrequencyProfile p = inverse_engineer(quintic(TrapSpec::dimensionless(1.0), 5.0));
    const ScalingCurve c = forward_solve(p, 1.0, 0.0);
    for (double b : c.b) CHECK(b == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("forward solve detects collapse") {
    FrequencyProfile p = detail::constant_profile(TimeGrid::uniform(10.0, 201), {100.0});
    try {
        forward_solve(p, 1.0, -50.0);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK((e.code() == Errc::collapse || e.code() == Errc::blow_up));
    }
    CHECK_THROWS_AS(forward_solve(p, -1.0, 0.0), Error);
}

TEST_CASE("inverse engineering rejects non-positive b") {
    ScalingCurve c = quintic(g10, 1.0, 11);
    c.b[3] = -0.1;
    try {
        inverse_engineer(c);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::collapse);
    }
}

TEST_CASE("residual requires matching grids") {
    const ScalingCurve a = quintic(g10, 1.0, 11);
    const FrequencyProfile p = inverse_engineer(quintic(g10, 1.0, 21));
    CHECK_THROWS_AS(ermakov_residual(a, p), Error);
}

TEST_CASE("classical analogue: excitation is twice the non-adiabatic energy") {
    const ScalingCurve c = hybrid_caps(g10, 100.0, 3.0, 80.0);
    const FrequencyProfile p = inverse_engineer(c);
    REQUIRE(p.min_omega2() >= 0.0);
    const ExcitationTrace ex = excitation_energy(c, p);
    const NonAdiabatic na = nonadiabatic_energy(c, p, g10);
    for (std::size_t i = 0; i < c.size(); i += 97) {
        CHECK(ex.scaled_na[i] == Approx(na.trace[i]).margin(1e-14));
        CHECK(ex.states[i].E_ex >= -1e-12);
        CHECK(ex.states[i].H_cl - ex.states[i].E_ex == Approx(std::sqrt(std::max(0.0, p.omega2[i]))).epsilon(1e-12));
    }
    CHECK(bottom_position(0.01) == Approx(10.0));
}

TEST_CASE("classical analogue rejects imaginary frequencies") {
    const BangBang bb = bang_bang(g10, 1.0, 1.0);
    try {
        excitation_energy(bb.protocol.curve, bb.protocol.profile);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::non_real_frequency);
    }
    CHECK_THROWS_AS(classical_state(1.0, 0.0, -0.5), Error);
    CHECK(classical_state(1.0, 0.0, -1e-13).E_ex == Approx(0.5 * (-1e-13 + 1.0)));
}

TEST_CASE("random septic round trips") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> c3(0.0, 60.0), c4(-120.0, 0.0), tf(2.0, 30.0);
    for (int trial = 0; trial < 8; ++trial) {
        ScalingCurve c;
        try {
            c = septic(g10, tf(rng), c3(rng), c4(rng));
        } catch (const Error&) {
            continue;  // b crossed zero
        }
        const FrequencyProfile p = inverse_engineer(c);
        CHECK(ermakov_residual(c, p) < 1e-8);
        const ScalingCurve back = forward_solve(p, 1.0, 0.0);
        CHECK(back.b_final() == Approx(10.0).epsilon(1e-5));
    }
}
