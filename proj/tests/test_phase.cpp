#include <catch2/catch_amalgamated.hpp>

#include "gaitlab/happ.hpp"
#include "gaitlab/phase.hpp"
#include "gaitlab/pipeline.hpp"

using namespace gaitlab;

namespace {

const BnPipeline& pipeline_delta02() {
    static BnPipeline p = [] {
        PipelineOptions opt;
        opt.dt = 0.002;
        return compute_hbn(delta_control_preset(), 0.02, opt);
    }();
    return p;
}

CouplingFunction sampled(std::size_t n, double (*fn)(double)) {
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = fn(static_cast<double>(i) / n);
    return make_coupling_function(std::move(ys));
}

}  // namespace

TEST_CASE("periodic spline reproduces smooth periodic data") {
    auto H = sampled(512, +[](double u) { return std::sin(2 * M_PI * u) + 0.3 * std::cos(4 * M_PI * u); });
    for (double u : {0.0, 0.123, 0.5, 0.875, 0.999}) {
        double want = std::sin(2 * M_PI * u) + 0.3 * std::cos(4 * M_PI * u);
        double dwant = 2 * M_PI * std::cos(2 * M_PI * u) - 1.2 * M_PI * std::sin(4 * M_PI * u);
        CHECK(H.value(u) == Catch::Approx(want).margin(1e-9));
        CHECK(H.deriv(u) == Catch::Approx(dwant).margin(1e-5));
    }
    SECTION("evaluation wraps exactly") {
        CHECK(H.value(0.25 + 3.0) == H.value(0.25));
        CHECK(H.value(-0.75) == H.value(0.25));
    }
}

TEST_CASE("fourier fit is exact on its own basis") {
    auto Hc = sampled(64, +[](double) { return 0.37; });
    auto fc = fit_fourier(Hc);
    CHECK(fc.a0 == Catch::Approx(0.37).margin(1e-12));
    CHECK(std::fabs(fc.a1) + std::fabs(fc.b1) + std::fabs(fc.a2) + std::fabs(fc.b2) < 1e-12);

    auto Hs = sampled(64, +[](double u) { return std::sin(2 * M_PI * u); });
    fc = fit_fourier(Hs);
    CHECK(fc.b1 == Catch::Approx(1.0).margin(1e-10));
    CHECK(std::fabs(fc.a0) + std::fabs(fc.a1) + std::fabs(fc.a2) + std::fabs(fc.b2) < 1e-10);

    auto Hmix = sampled(128, +[](double u) {
        return 0.2 - 0.7 * std::cos(2 * M_PI * u) + 0.4 * std::sin(4 * M_PI * u);
    });
    fc = fit_fourier(Hmix);
    CHECK(fc.fit_residual < 1e-10);  // order-2 input round-trips through the fit
}

TEST_CASE("eta solver: constant solution, interior root, ambiguity") {
    // Pure sin(2 pi u): G(eta) = H(2/3-eta) - H(1/3+eta) = -2 sin(2pi(1/3+eta)),
    // no interior zero on [0, 1/6) -> the constant solution 1/6.
    auto H1 = sampled(256, +[](double u) { return std::sin(2 * M_PI * u); });
    CHECK(solve_eta(H1) == Catch::Approx(1.0 / 6.0));

    // Happ-shaped function with a known root.
    auto H2 = happ_sampled(0.015);
    double eta = solve_eta(H2);
    CHECK(eta == Catch::Approx(happ_eta_clamped(0.015)).margin(1e-3));

    // sin(6 pi u) gives G with several interior sign changes.
    auto H3 = sampled(256, +[](double u) { return std::sin(6 * M_PI * u); });
    CHECK_THROWS_AS(solve_eta(H3), AmbiguousRootError);
}

TEST_CASE("explicit coupling function: closed forms") {
    CHECK(happ_delta_star() == Catch::Approx(0.0218).margin(5e-4));
    CHECK(happ_eta_clamped(happ_delta_star()) == Catch::Approx(1.0 / 6.0).margin(1e-12));
    CHECK(happ_eta_clamped(0.008) == Catch::Approx(0.0).margin(1e-3));

    SECTION("cosine terms cancel in H(theta) - H(-theta)") {
        for (double d : {0.01, 0.018, 0.023}) {
            auto c = happ_coefficients(d);
            for (double u : {0.05, 0.21, 0.37, 0.49}) {
                double G = happ_eval(d, u) - happ_eval(d, -u);
                double want = 2 * c.b1 * std::sin(2 * M_PI * u) + 2 * c.b2 * std::sin(4 * M_PI * u);
                CHECK(G == Catch::Approx(want).margin(1e-12));
            }
        }
    }
    SECTION("closed-form eta matches the sampled-root solver across the window") {
        for (double d : {0.009, 0.012, 0.016, 0.02, 0.0215}) {
            auto H = happ_sampled(d);
            CHECK(solve_eta(H) == Catch::Approx(happ_eta_clamped(d)).margin(1e-3));
        }
    }
    SECTION("domain guard") {
        CHECK_THROWS_AS(happ_eta(0.0255), DomainError);
    }
}

TEST_CASE("transition conditions hold for the explicit family below delta*") {
    auto xis = linspace(0.0085, happ_delta_star() - 5e-4, 12);
    auto rep = check_h_conditions(xis, [](double d) { return HappView{d}; });
    for (std::size_t k = 1; k < rep.rows.size(); ++k) {
        CHECK(rep.rows[k].dG_dxi_negative);
        CHECK(rep.rows[k].G_concave_down);
    }
    SECTION("a flat G trivially passes (1) and fails (2)-(3)") {
        struct Even {
            double value(double u) const { return std::cos(2 * M_PI * u); }
            double deriv(double u) const { return -2 * M_PI * std::sin(2 * M_PI * u); }
        };
        auto rep2 = check_h_conditions(linspace(0.0, 1.0, 4), [](double) { return Even{}; });
        for (std::size_t k = 0; k < rep2.rows.size(); ++k) {
            CHECK(rep2.rows[k].G_at_third == Catch::Approx(0.0).margin(1e-12));
            if (k > 0) {
                CHECK_FALSE(rep2.rows[k].dG_dxi_negative);
                CHECK_FALSE(rep2.rows[k].G_concave_down);
            }
        }
    }
}

TEST_CASE("adjoint iPRC satisfies its normalization identity") {
    const BnPipeline& p = pipeline_delta02();
    const auto& lc = p.lc;
    const auto& prc = p.prc;
    REQUIRE(prc.Z.size() == lc.samples.size());
    CHECK(prc.norm_residual < 0.01);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < prc.Z.size(); ++i) {
        double q = 0;
        for (int k = 0; k < 4; ++k) q += prc.Z[i][k] * lc.derivs[i][k];
        if (std::fabs(q - prc.omega) > 0.01 * prc.omega) ++bad;
    }
    CHECK(bad == 0);
    SECTION("periodic agreement was reached quickly") {
        CHECK(prc.periods_used <= 20);
    }
    SECTION("convergence guard trips when given no room") {
        AdjointOptions opt;
        opt.max_periods = 1;
        opt.tol = 1e-16;
        CHECK_THROWS_AS(compute_iprc(lc, p.params, opt), NoConvergenceError);
    }
}

TEST_CASE("coupling function scales linearly in the synaptic conductance") {
    const BnPipeline& p = pipeline_delta02();
    NeuronParams doubled = p.params;
    doubled.g_syn *= 2.0;
    auto H2 = coupling_function_hbn(p.lc, p.prc, doubled, 0.02);
    for (std::size_t i = 0; i < p.H.samples.size(); i += 97)
        CHECK(H2.samples[i] == Catch::Approx(2.0 * p.H.samples[i]).margin(1e-15));
}

TEST_CASE("coupling function is inhibitory over the gait band") {
    const BnPipeline& p = pipeline_delta02();
    for (double u = 1.0 / 3.0; u <= 2.0 / 3.0; u += 0.01) CHECK(p.H.value(u) < 0.0);
    double m = p.H.max_abs();
    CHECK(m > 0.01);
    CHECK(m < 1.0);
}

TEST_CASE("two coupled cells drift at the rate the coupling function predicts") {
    // One-way coupling: cell 1 free, cell 2 driven with c = 1. The phase
    // difference theta = phi1 - phi2 then obeys theta' = -H(theta) in
    // cycles/second.
    const BnPipeline& p = pipeline_delta02();
    const auto& lc = p.lc;
    double T = lc.period_ms;

    auto state_at = [&](double frac) {
        std::size_t i = static_cast<std::size_t>(wrap01(frac) * lc.samples.size());
        return lc.samples[i % lc.samples.size()];
    };
    double theta0 = 0.40;
    Vec<8> x{};
    Vec4 a = state_at(theta0), b = state_at(0.0);  // cell1 leads by theta0
    for (int k = 0; k < 4; ++k) {
        x[k] = a[k];
        x[4 + k] = b[k];
    }
    const NeuronParams& prm = p.params;
    auto f = [&prm](const Vec<8>& s) {
        Vec4 x1{s[0], s[1], s[2], s[3]}, x2{s[4], s[5], s[6], s[7]};
        Vec4 d1 = vector_field(x1, prm, 0.0);
        double I_syn = -prm.g_syn * s[3] * (x2[0] - prm.E_s_post);
        Vec4 d2 = vector_field(x2, prm, I_syn);
        Vec<8> d;
        for (int k = 0; k < 4; ++k) {
            d[k] = d1[k];
            d[4 + k] = d2[k];
        }
        return d;
    };

    // Record burst-start crossings for both cells over many cycles.
    std::vector<double> t1, t2;
    Vec<8> xp = x;
    double tp = 0;
    bool first = true;
    integrate_observed<8>(f, x, 0.0, 30.0 * T, 0.002,
                          [&](double t, const Vec<8>& xc, const Vec<8>&) {
                              if (!first) {
                                  for (int cell = 0; cell < 2; ++cell) {
                                      double va = xp[4 * cell], vb = xc[4 * cell];
                                      auto& out = cell ? t2 : t1;
                                      if (va < -20.0 && vb >= -20.0) {
                                          double tc = tp + (t - tp) * (-20.0 - va) / (vb - va);
                                          if (out.empty() || tc - out.back() > 15.0)
                                              out.push_back(tc);
                                      }
                                  }
                              }
                              xp = xc;
                              tp = t;
                              first = false;
                          });
    REQUIRE(t1.size() >= 12);
    REQUIRE(t2.size() >= 12);
    std::size_t n = std::min(t1.size(), t2.size());
    // theta_k = (t2_k - t1_k)/T as a fraction; drift per cycle vs -H(theta)*T.
    int checked = 0;
    for (std::size_t k = 3; k + 2 < n; ++k) {
        double th_a = wrap01((t2[k] - t1[k]) / T);
        double th_b = wrap01((t2[k + 1] - t1[k + 1]) / T);
        double drift = circ_diff(th_b, th_a);                  // fraction per cycle
        double predicted = -p.H.value(th_a) * (T / 1000.0);    // cycles/s * s
        if (std::fabs(predicted) < 1e-4) continue;
        CHECK(drift == Catch::Approx(predicted).epsilon(0.10).margin(2e-4));
        ++checked;
    }
    CHECK(checked >= 5);
}
