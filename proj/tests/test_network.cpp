#include <catch2/catch_amalgamated.hpp>

#include "gaitlab/network.hpp"
#include "gaitlab/presets.hpp"

#include <random>

using namespace gaitlab;

namespace {

GaitRaster synthetic_raster(const std::array<double, 6>& phases, double T, int cycles,
                            double swing = 30.0) {
    GaitRaster r;
    r.window_start = 0;
    r.window_end = cycles * T + T;
    for (int i = 0; i < 6; ++i)
        for (int k = 0; k < cycles; ++k) {
            double td = (k + 1) * T + phases[i] * T;  // touchdown
            r.legs[i].push_back({td - swing, td});
        }
    return r;
}

}  // namespace

TEST_CASE("balance predicate and alpha") {
    auto fig5 = coupling_preset("fig5").c;
    CHECK(fig5.is_balanced(1e-12));
    CHECK(fig5.alpha() == Catch::Approx(1.0 / 3.0));
    auto sec34 = coupling_preset("sec34").c;
    CHECK(sec34.is_balanced(1e-12));
    auto t2 = coupling_preset("table2-fast").c;
    CHECK_FALSE(t2.is_balanced(0.05));
    auto t3 = coupling_preset("table3-fast").c;
    CHECK(t3.is_balanced(0.01));  // approximately balanced
    CHECK(t3.alpha() == Catch::Approx(0.5269).margin(5e-4));
}

TEST_CASE("network field is equivariant under the left-right swap") {
    auto p = delta_control_preset().with_xi(0.015);
    NetworkField f{p, coupling_preset("fig5").c};
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uv(-60, 10), ug(0, 1);
    NetworkState x{};
    for (int i = 0; i < 6; ++i) {
        x[4 * i] = uv(rng);
        for (int k = 1; k < 4; ++k) x[4 * i + k] = ug(rng);
    }
    NetworkState xs{};
    auto swap_cells = [](const NetworkState& src) {
        NetworkState out{};
        static const int perm[6] = {3, 4, 5, 0, 1, 2};
        for (int i = 0; i < 6; ++i)
            for (int k = 0; k < 4; ++k) out[4 * perm[i] + k] = src[4 * i + k];
        return out;
    };
    xs = swap_cells(x);
    NetworkState dx = f(x), dxs = f(xs);
    NetworkState expect = swap_cells(dx);
    for (int i = 0; i < 24; ++i) CHECK(dxs[i] == expect[i]);
}

TEST_CASE("zero coupling with identical initial conditions keeps all legs in sync") {
    auto p = delta_control_preset().with_xi(0.02);
    CouplingStrengths zero{};
    std::array<double, 6> v{};
    v.fill(-35.0);
    GaitSimOptions opt;
    opt.span_ms = 1200.0;
    opt.dt = 0.005;
    GaitRaster r = simulate_gait(p, zero, network_ics_from_voltages(p, v), opt);
    // All legs share identical dynamics, so swing intervals coincide.
    for (int i = 1; i < 6; ++i) {
        REQUIRE(r.legs[i].size() == r.legs[0].size());
        for (std::size_t k = 0; k < r.legs[i].size(); ++k) {
            CHECK(r.legs[i][k].t_on == Catch::Approx(r.legs[0][k].t_on).margin(1e-6));
            CHECK(r.legs[i][k].t_off == Catch::Approx(r.legs[0][k].t_off).margin(1e-6));
        }
    }
}

TEST_CASE("classifier recognizes the ideal patterns") {
    double T = 150.0;
    CHECK(classify_gait(synthetic_raster(gait_pattern(GaitFamily::FR, 1.0 / 6.0), T, 5)).cls ==
          GaitClass::Tripod);
    CHECK(classify_gait(synthetic_raster(gait_pattern(GaitFamily::FR, 0.0), T, 5)).cls ==
          GaitClass::TetrapodForwardRight);
    CHECK(classify_gait(synthetic_raster(gait_pattern(GaitFamily::FL, 0.0), T, 5)).cls ==
          GaitClass::TetrapodForwardLeft);
    CHECK(classify_gait(synthetic_raster(gait_pattern(GaitFamily::BR, 0.0), T, 5)).cls ==
          GaitClass::TetrapodBackwardRight);
    CHECK(classify_gait(synthetic_raster(gait_pattern(GaitFamily::BL, 0.0), T, 5)).cls ==
          GaitClass::TetrapodBackwardLeft);
}

TEST_CASE("classifier recovers the transition offset") {
    double T = 180.0, eta = 0.07;
    auto lab = classify_gait(synthetic_raster(gait_pattern(GaitFamily::FR, eta), T, 6));
    CHECK(lab.cls == GaitClass::TransitionForward);
    CHECK(lab.eta_frac == Catch::Approx(eta).margin(2e-3));
    auto lab2 = classify_gait(synthetic_raster(gait_pattern(GaitFamily::BL, 0.05), T, 6));
    CHECK(lab2.cls == GaitClass::TransitionBackward);
}

TEST_CASE("classification is invariant under a uniform time shift") {
    double T = 150.0;
    auto base = synthetic_raster(gait_pattern(GaitFamily::FR, 0.04), T, 5);
    GaitRaster shifted = base;
    for (auto& leg : shifted.legs)
        for (auto& iv : leg) {
            iv.t_on += 37.25;
            iv.t_off += 37.25;
        }
    auto a = classify_gait(base);
    auto b = classify_gait(shifted);
    CHECK(a.cls == b.cls);
    CHECK(a.eta_frac == Catch::Approx(b.eta_frac).margin(1e-6));
}

TEST_CASE("garbage phases come back unclassified, not as an error") {
    double T = 150.0;
    auto lab = classify_gait(synthetic_raster({0.11, 0.0, 0.47, 0.83, 0.29, 0.61}, T, 5));
    CHECK(lab.cls == GaitClass::Unclassified);
    GaitRaster empty;
    CHECK(classify_gait(empty).cls == GaitClass::Unclassified);
}

TEST_CASE("fig5 couplings at high speed settle into a tripod") {
    auto p = delta_control_preset().with_xi(0.03);
    auto c = coupling_preset("fig5").c;
    auto v = network_ics_preset("fig5-delta");
    GaitSimOptions opt;
    opt.span_ms = 4000.0;
    GaitRaster r = simulate_gait(p, c, network_ics_from_voltages(p, v), opt);
    auto lab = classify_gait(r);
    CHECK(lab.cls == GaitClass::Tripod);

    SECTION("contralateral phase differences lock") {
        auto est = estimate_phases(r);
        double d1 = circ_diff(est.phases[3], est.phases[0]);
        double d2 = circ_diff(est.phases[4], est.phases[1]);
        double d3 = circ_diff(est.phases[5], est.phases[2]);
        CHECK(circ_dist(d1, d2) < 0.05);
        CHECK(circ_dist(d2, d3) < 0.05);
        CHECK(circ_dist(d1, d3) < 0.05);
    }
    SECTION("inhibition slows the coupled rhythm") {
        auto est = estimate_phases(r);
        CycleOptions copt;
        copt.dt = 0.005;
        copt.warn_gating = false;
        LimitCycle lc = find_limit_cycle(p, reference_initial_state(), copt);
        CHECK(est.period_ms > lc.period_ms);
    }
}
