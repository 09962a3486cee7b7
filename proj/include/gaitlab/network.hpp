#pragma once

// Six-cell inhibitory nearest-neighbor network (24 ODEs), leg swing rasters,
// and gait classification from touchdown phases.
//
// Cells 0..2 drive right front/middle/hind legs (R1,R2,R3), cells 3..5 the
// left legs (L1,L2,L3). Contralateral rungs carry c1,c2,c3; ipsilateral
// edges carry c4 (front->middle), c5 (middle->front), c6 (middle->hind),
// c7 (hind->middle) on both sides.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "gaitlab/common.hpp"
#include "gaitlab/gait.hpp"
#include "gaitlab/integrate.hpp"
#include "gaitlab/neuron.hpp"

namespace gaitlab {

struct CouplingStrengths {
    std::array<double, 7> c{};  // c[0]=c1 .. c[6]=c7

    double operator[](int i) const { return c[i]; }

    bool valid() const {
        for (double v : c)
            if (v < 0 || !std::isfinite(v)) return false;
        return true;
    }
    // alpha = c4/(c4+c7); defined only when c4+c7 > 0.
    double alpha() const {
        double s = c[3] + c[6];
        if (s <= 0) throw DegenerateDenominatorError("alpha undefined: c4+c7 = 0");
        return c[3] / s;
    }
    // Balance: c1+c5 = c2+c4+c7 = c3+c6 within tol*scale.
    bool is_balanced(double tol = 1e-9) const {
        double s1 = c[0] + c[4], s2 = c[1] + c[3] + c[6], s3 = c[2] + c[5];
        double scale = std::max({s1, s2, s3, 1e-300});
        return std::fabs(s1 - s2) <= tol * scale && std::fabs(s3 - s2) <= tol * scale;
    }
};

using NetworkState = Vec<24>;

struct NetworkField {
    NeuronParams p;
    CouplingStrengths c;

    // In-edges per cell: {source cell, coupling index}.
    struct Edge {
        int src;
        int ci;
    };
    static constexpr std::array<std::array<Edge, 3>, 6> edges() {
        // -1 source marks an unused slot (front/hind cells have 2 inputs).
        return {{
            {{{3, 0}, {1, 4}, {-1, 0}}},  // cell 0 (R1): c1*s(L1), c5*s(R2)
            {{{4, 1}, {0, 3}, {2, 6}}},   // cell 1 (R2): c2*s(L2), c4*s(R1), c7*s(R3)
            {{{5, 2}, {1, 5}, {-1, 0}}},  // cell 2 (R3): c3*s(L3), c6*s(R2)
            {{{0, 0}, {4, 4}, {-1, 0}}},  // cell 3 (L1): c1*s(R1), c5*s(L2)
            {{{1, 1}, {3, 3}, {5, 6}}},   // cell 4 (L2): c2*s(R2), c4*s(L1), c7*s(L3)
            {{{2, 2}, {4, 5}, {-1, 0}}},  // cell 5 (L3): c3*s(R3), c6*s(L2)
        }};
    }

    NetworkState operator()(const NetworkState& x) const {
        NetworkState dx{};
        auto E = edges();
        for (int i = 0; i < 6; ++i) {
            Vec4 xi{x[4 * i], x[4 * i + 1], x[4 * i + 2], x[4 * i + 3]};
            double I_syn = 0;
            for (const auto& e : E[i]) {
                if (e.src < 0) continue;
                double s_j = x[4 * e.src + 3];
                I_syn += -c[e.ci] * p.g_syn * s_j * (xi[0] - p.E_s_post);
            }
            Vec4 d = vector_field(xi, p, I_syn);
            for (int k = 0; k < 4; ++k) dx[4 * i + k] = d[k];
        }
        return dx;
    }
};

// Initial conditions from six voltages; gates and synapses at their
// steady-state values.
inline NetworkState network_ics_from_voltages(const NeuronParams& p,
                                              const std::array<double, 6>& v) {
    NetworkState x{};
    for (int i = 0; i < 6; ++i) {
        Vec4 s = steady_state_at(v[i], p);
        for (int k = 0; k < 4; ++k) x[4 * i + k] = s[k];
    }
    return x;
}

// ---------------------------------------------------------------------------
// Raster extraction

struct SwingInterval {
    double t_on, t_off;
};

struct GaitRaster {
    std::array<std::vector<SwingInterval>, 6> legs;  // R1,R2,R3,L1,L2,L3
    double window_start = 0, window_end = 0;
};

struct GaitSimOptions {
    double dt = 0.001;
    double span_ms = 5000.0;
    double window_ms = 0;  // 0 -> last 25% of span
    double spike_threshold = -10.0;
    double burst_gap_ms = 15.0;
};

inline GaitRaster simulate_gait(const NeuronParams& p, const CouplingStrengths& c,
                                const NetworkState& ics, const GaitSimOptions& opt = {}) {
    if (!c.valid()) throw Error("simulate_gait: invalid couplings");
    NetworkField f{p, c};

    double window = opt.window_ms > 0 ? opt.window_ms : opt.span_ms * 0.25;
    double w0 = opt.span_ms - window;

    std::array<std::vector<double>, 6> ups, downs;
    NetworkState xp = ics;
    double tp = 0;
    bool first = true;
    integrate_observed<24>(f, ics, 0.0, opt.span_ms, opt.dt,
                           [&](double t, const NetworkState& x, const NetworkState&) {
                               if (!first) {
                                   for (int i = 0; i < 6; ++i) {
                                       double a = xp[4 * i], b = x[4 * i];
                                       if (a < opt.spike_threshold && b >= opt.spike_threshold)
                                           ups[i].push_back(
                                               tp + (t - tp) * (opt.spike_threshold - a) / (b - a));
                                       if (a >= opt.spike_threshold && b < opt.spike_threshold)
                                           downs[i].push_back(
                                               tp + (t - tp) * (opt.spike_threshold - a) / (b - a));
                                   }
                               }
                               xp = x;
                               tp = t;
                               first = false;
                           });

    GaitRaster r;
    r.window_start = w0;
    r.window_end = opt.span_ms;
    for (int i = 0; i < 6; ++i) {
        if (ups[i].empty() || downs[i].empty())
            throw NoBurstError("cell " + std::to_string(i) + " never spiked");
        // Group spikes into bursts.
        std::vector<SwingInterval> bursts;
        std::size_t di = 0;
        double bs = -1, be = -1;
        for (double u : ups[i]) {
            while (di < downs[i].size() && downs[i][di] < u) ++di;
            if (di >= downs[i].size()) break;
            double d = downs[i][di];
            if (bs < 0) {
                bs = u;
                be = d;
            } else if (u - be > opt.burst_gap_ms) {
                bursts.push_back({bs, be});
                bs = u;
                be = d;
            } else {
                be = d;
            }
        }
        if (bs >= 0) bursts.push_back({bs, be});
        for (const auto& b : bursts)
            if (b.t_on >= w0 && b.t_off <= opt.span_ms) r.legs[i].push_back(b);
        if (r.legs[i].empty())
            throw NoBurstError("cell " + std::to_string(i) +
                               " has no complete burst in the analysis window");
    }
    return r;
}

// ---------------------------------------------------------------------------
// Classification

// Touchdown time = burst end; lift-off = burst start.
inline std::vector<double> touchdowns(const GaitRaster& r, int leg) {
    std::vector<double> td;
    td.reserve(r.legs[leg].size());
    for (const auto& iv : r.legs[leg]) td.push_back(iv.t_off);
    return td;
}

struct PhaseEstimate {
    std::array<double, 6> phases;  // R2-relative fractions
    double period_ms = 0;
    int min_cycles = 0;
};

inline PhaseEstimate estimate_phases(const GaitRaster& r) {
    PhaseEstimate est;
    // Common period from mean touchdown spacing across legs.
    double gap_sum = 0;
    std::size_t gap_n = 0;
    est.min_cycles = 1 << 30;
    for (int i = 0; i < 6; ++i) {
        auto td = touchdowns(r, i);
        est.min_cycles = std::min<int>(est.min_cycles, static_cast<int>(td.size()));
        for (std::size_t k = 1; k < td.size(); ++k) {
            gap_sum += td[k] - td[k - 1];
            ++gap_n;
        }
    }
    if (gap_n == 0) throw NoBurstError("not enough touchdowns to estimate a period");
    est.period_ms = gap_sum / static_cast<double>(gap_n);

    std::array<double, 6> raw{};
    for (int i = 0; i < 6; ++i) {
        auto td = touchdowns(r, i);
        std::vector<double> ph;
        ph.reserve(td.size());
        for (double t : td) ph.push_back(wrap01(t / est.period_ms));
        raw[i] = circ_mean(ph);
    }
    for (int i = 0; i < 6; ++i) est.phases[i] = wrap01(raw[i] - raw[1]);
    return est;
}

inline GaitLabel classify_gait(const GaitRaster& r, double tol_frac = 0.05) {
    PhaseEstimate est;
    try {
        est = estimate_phases(r);
    } catch (const NoBurstError&) {
        return {GaitClass::Unclassified, 0, 1.0};
    }
    if (est.min_cycles < 3) return {GaitClass::Unclassified, 0, 1.0};
    return classify_phases(est.phases, tol_frac);
}

}  // namespace gaitlab
