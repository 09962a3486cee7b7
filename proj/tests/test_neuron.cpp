#include <catch2/catch_amalgamated.hpp>

#include "gaitlab/neuron.hpp"
#include "gaitlab/presets.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <random>

using namespace gaitlab;

TEST_CASE("gating sigmoids hit 1/2 at their midpoints") {
    auto p = delta_control_preset().params;
    CHECK(gating_steady_states(p.v_K, p).m_inf == Catch::Approx(0.5));
    CHECK(gating_steady_states(p.v_KS, p).w_inf == Catch::Approx(0.5));
    CHECK(gating_steady_states(p.v_Ca, p).n_inf == Catch::Approx(0.5));
}

TEST_CASE("gating steady states at v=-70 match hand evaluation") {
    // Golden values from an independent scalar evaluation of the sigmoids.
    auto p = delta_control_preset().params;
    auto g = gating_steady_states(-70.0, p);
    CHECK(g.m_inf == Catch::Approx(5.5739005858560903e-07).epsilon(1e-12));
    CHECK(g.w_inf == Catch::Approx(1.3198957943678873e-30).epsilon(1e-12));
    CHECK(g.n_inf == Catch::Approx(0.00047846713822059388).epsilon(1e-12));
    CHECK(g.s_inf == Catch::Approx(7.3373221311399222e-06).epsilon(1e-12));
}

TEST_CASE("ionic currents vanish at their reversal potentials") {
    auto p = delta_control_preset().params;
    NeuronState x{p.E_Ca, 0.3, 0.3, 0.0};
    CHECK(ionic_currents(x, p).I_Ca == Catch::Approx(0.0).margin(1e-12));
    x[0] = p.E_L;
    CHECK(ionic_currents(x, p).I_L == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("ionic currents at a mid-burst state match hand evaluation") {
    auto p = delta_control_preset().params;
    NeuronState x{-31.93, 0.3, 0.3, 0.0};
    auto I = ionic_currents(x, p);
    CHECK(I.I_Ca == Catch::Approx(-21.289516296702125).epsilon(1e-12));
    CHECK(I.I_K == Catch::Approx(129.78899999999999).epsilon(1e-12));
    CHECK(I.I_KS == Catch::Approx(2.7399899999999997).epsilon(1e-12));
    CHECK(I.I_L == Catch::Approx(56.140000000000001).epsilon(1e-12));
}

TEST_CASE("gates at steady state have zero derivative") {
    auto p = delta_control_preset().params;
    for (double v : {-60.0, -35.0, -10.0, 5.0}) {
        auto g = gating_steady_states(v, p);
        NeuronState x{v, g.m_inf, g.w_inf, 0.5};
        auto d = vector_field(x, p);
        CHECK(d[1] == Catch::Approx(0.0).margin(1e-12));
        CHECK(d[2] == Catch::Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("vector field at the reference initial state matches hand evaluation") {
    auto p = delta_control_preset().params;
    auto d = vector_field(reference_initial_state(), p);
    CHECK(d[0] == Catch::Approx(802.99999877296034).epsilon(1e-12));
    CHECK(d[1] == Catch::Approx(897.32622508613849).epsilon(1e-12));
    CHECK(d[2] == Catch::Approx(0.32017446853524634).epsilon(1e-12));
    CHECK(d[3] == Catch::Approx(-0.35971354987808118).epsilon(1e-12));
}

TEST_CASE("the s-interval [0,1] is flow invariant") {
    for (auto preset : {delta_control_preset(), iext_control_preset()}) {
        auto p = preset.params;
        for (double v = -100.0; v <= 100.0; v += 2.5) {
            NeuronState lo{v, 0.5, 0.5, 0.0}, hi{v, 0.5, 0.5, 1.0};
            CHECK(vector_field(lo, p)[3] >= 0.0);
            CHECK(vector_field(hi, p)[3] < 0.0);
        }
    }
}

TEST_CASE("time-scale division stays finite out to |v| = 200") {
    for (auto preset : {delta_control_preset(), iext_control_preset()}) {
        auto p = preset.params;
        for (double v : {-200.0, -120.0, 150.0, 200.0}) {
            NeuronState x{v, 0.2, 0.2, 0.5};
            CHECK(all_finite(vector_field(x, p)));
        }
    }
}

TEST_CASE("vector field is deterministic") {
    auto p = iext_control_preset().params;
    NeuronState x{-41.7, 0.123, 0.456, 0.789};
    auto a = vector_field(x, p);
    auto b = vector_field(x, p);
    for (int i = 0; i < 4; ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("analytic Jacobian agrees with finite differences") {
    auto p = delta_control_preset().params;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uv(-60, 20), ug(0, 1);
    for (int trial = 0; trial < 12; ++trial) {
        NeuronState x{uv(rng), ug(rng), ug(rng), ug(rng)};
        auto J = neuron_jacobian(x, p);
        double h = 1e-6;
        for (int col = 0; col < 4; ++col) {
            NeuronState lo = x, hi = x;
            lo[col] -= h;
            hi[col] += h;
            auto flo = vector_field(lo, p), fhi = vector_field(hi, p);
            for (int row = 0; row < 4; ++row) {
                double fd = (fhi[row] - flo[row]) / (2 * h);
                double scale = std::max(1.0, std::fabs(J[4 * row + col]));
                CHECK(std::fabs(J[4 * row + col] - fd) < 2e-5 * scale);
            }
        }
    }
}

TEST_CASE("the two parameter rows differ exactly where published") {
    auto d = delta_control_preset();
    auto i = iext_control_preset();
    CHECK(d.params.a == 55.56);
    CHECK(i.params.a == 444.48);
    CHECK(d.params.g_KS == 0.19);
    CHECK(i.params.g_KS == 0.5);
    CHECK(d.params.v_KS == -27.0);
    CHECK(i.params.v_KS == -26.0);
    CHECK(d.params.epsilon == 4.9);
    CHECK(i.params.epsilon == 5.0);
    CHECK(d.sweep_param == "delta");
    CHECK(i.sweep_param == "I_ext");
    CHECK(d.sweep_lo == 0.0097);
    CHECK(d.sweep_hi == 0.04);
    CHECK(i.sweep_lo == 35.65);
    CHECK(i.sweep_hi == 37.7);
    CHECK_THROWS_AS(neuron_preset("nope"), UnknownPresetError);
}

TEST_CASE("parameter files load exactly and reject missing fields") {
    auto p = iext_control_preset().params;
    std::string path = "test_params.cfg";
    {
        std::ofstream out(path);
        out << "# full parameter set\n";
        out << "C = " << p.C << "\ndelta = " << p.delta << "\nepsilon = " << p.epsilon
            << "\nI_ext = " << p.I_ext << "\ng_Ca = " << p.g_Ca << "\ng_K = " << p.g_K
            << "\ng_KS = " << p.g_KS << "\ng_L = " << p.g_L << "\ng_syn = " << p.g_syn
            << "\nE_Ca = " << p.E_Ca << "\nE_K = " << p.E_K << "\nE_KS = " << p.E_KS
            << "\nE_L = " << p.E_L << "\nE_s_post = " << p.E_s_post
            << "\nE_s_pre = " << p.E_s_pre << "\nk_Ca = " << std::setprecision(17) << p.k_Ca
            << "\nk_K = " << p.k_K << "\nk_KS = " << p.k_KS << "\nk_s = " << p.k_s
            << "\nv_Ca = " << p.v_Ca << "\nv_K = " << p.v_K << "\nv_KS = " << p.v_KS
            << "\na = " << p.a << "\ntau_s = " << p.tau_s << "\n";
    }
    NeuronParams q = load_neuron_params(path);
    CHECK(q.a == p.a);
    CHECK(q.v_KS == p.v_KS);
    CHECK(q.k_Ca == Catch::Approx(p.k_Ca).epsilon(1e-15));

    {
        std::ofstream out(path);
        out << "C = 1.2\n";  // everything else missing
    }
    CHECK_THROWS_AS(load_neuron_params(path), Error);

    {
        std::ofstream out(path);
        out << "C = 1.2\nwhat even is this line\n";
    }
    try {
        load_neuron_params(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    std::remove(path.c_str());
}
