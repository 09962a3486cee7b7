#include <catch2/catch_amalgamated.hpp>

#include "gaitlab/integrate.hpp"

using namespace gaitlab;

namespace {

// Shared cycles so the expensive integrations run once per binary.
const LimitCycle& cycle_delta02_fine() {
    static LimitCycle lc = [] {
        CycleOptions opt;  // dt = 0.001
        return find_limit_cycle(delta_control_preset().with_xi(0.02),
                                reference_initial_state(), opt);
    }();
    return lc;
}

LimitCycle cycle(const ParamPreset& pr, double xi, double dt = 0.005) {
    CycleOptions opt;
    opt.dt = dt;
    opt.warn_gating = false;
    return find_limit_cycle(pr.with_xi(xi), reference_initial_state(), opt);
}

}  // namespace

TEST_CASE("zero field gives a constant trajectory") {
    auto f = [](const Vec4&) { return Vec4{0, 0, 0, 0}; };
    auto tr = rk4_integrate(f, {1.0, -2.0, 3.0, 0.5}, 10.0, 0.1);
    REQUIRE(tr.samples.size() == 101);
    for (const auto& x : tr.samples) {
        CHECK(x[0] == 1.0);
        CHECK(x[3] == 0.5);
    }
}

TEST_CASE("harmonic oscillator returns after one turn, with 4th-order error") {
    auto f = [](const Vec4& x) { return Vec4{x[1], -x[0], 0, 0}; };
    auto err_at = [&](double dt) {
        Vec4 x{1, 0, 0, 0};
        long n = static_cast<long>(2 * M_PI / dt);
        for (long i = 0; i < n; ++i) rk4_step<4>(f, x, dt);
        // finish the remaining fraction of the turn
        double rem = 2 * M_PI - n * dt;
        rk4_step<4>(f, x, rem);
        return std::sqrt((x[0] - 1) * (x[0] - 1) + x[1] * x[1]);
    };
    double e1 = err_at(2 * M_PI / 1000), e2 = err_at(2 * M_PI / 2000);
    CHECK(e1 < 1e-9);
    double factor = e1 / e2;
    CHECK(factor > 12.0);
    CHECK(factor < 20.0);
}

TEST_CASE("divergence raises NonFinite") {
    auto f = [](const Vec4& x) { return Vec4{x[0] * x[0], 0, 0, 0}; };
    CHECK_THROWS_AS(rk4_integrate(f, {1.0, 0, 0, 0}, 10.0, 0.01), NonFiniteError);
}

TEST_CASE("delta row at 0.02 bursts with the published period") {
    const LimitCycle& lc = cycle_delta02_fine();
    CHECK(lc.period_ms == Catch::Approx(202.0).margin(4.0));
    CHECK(lc.closure_error < 1e-3 * norm2<4>(lc.samples[0]));
    CHECK(lc.samples.size() == 4096);
    auto m = burst_metrics(lc);
    CHECK(m.swing_ms + m.stance_ms == Catch::Approx(lc.period_ms).margin(1e-9));
    CHECK(m.duty_cycle > 0.0);
    CHECK(m.duty_cycle < 1.0);
    CHECK(m.spikes >= 5);
}

TEST_CASE("coarser sweep step shifts the period by less than 0.1%") {
    const LimitCycle& fine = cycle_delta02_fine();
    LimitCycle coarse = cycle(delta_control_preset(), 0.02, 0.005);
    CHECK(std::fabs(coarse.period_ms - fine.period_ms) / fine.period_ms < 1e-3);
}

TEST_CASE("iext row at 36.5 matches the published period and frequency") {
    LimitCycle lc = cycle(iext_control_preset(), 36.5);
    CHECK(lc.period_ms == Catch::Approx(88.6).margin(2.0));
    CHECK(lc.frequency_hz() == Catch::Approx(11.29).epsilon(0.03));
}

TEST_CASE("slow end of the delta sweep sits near 2.66 Hz") {
    LimitCycle lc = cycle(delta_control_preset(), 0.0097);
    CHECK(lc.frequency_hz() == Catch::Approx(2.66).epsilon(0.05));
}

TEST_CASE("period does not depend on the starting point") {
    auto pr = delta_control_preset();
    LimitCycle a = cycle(pr, 0.02);
    CycleOptions opt;
    opt.dt = 0.005;
    LimitCycle b = find_limit_cycle(pr.with_xi(0.02), steady_state_at(-45.0, pr.params), opt);
    CHECK(std::fabs(a.period_ms - b.period_ms) / a.period_ms < 1e-3);
}

TEST_CASE("degenerate detections raise the documented errors") {
    auto pr = delta_control_preset();
    CycleOptions opt;
    opt.dt = 0.005;
    opt.settle_ms = 0;
    opt.max_capture_ms = 30.0;  // far too short to see four bursts
    CHECK_THROWS_AS(find_limit_cycle(pr.params, reference_initial_state(), opt), NoCycleError);

    LimitCycle lc = cycle(pr, 0.02);
    CHECK_THROWS_AS(burst_metrics(lc, 100.0), NoBurstError);
}

TEST_CASE("a two-point sweep returns exactly the endpoints") {
    auto pr = delta_control_preset();
    SweepOptions opt;
    auto rows = speed_sweep(pr, 2, opt);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].xi == pr.sweep_lo);
    CHECK(rows[1].xi == pr.sweep_hi);
    SECTION("stance decreases with speed") {
        CHECK(rows[1].stance_ms < rows[0].stance_ms);
    }
}

TEST_CASE("stance decreases with speed on the iext row too") {
    auto pr = iext_control_preset();
    auto rows = speed_sweep(pr, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].stance_ms < rows[0].stance_ms);
}
