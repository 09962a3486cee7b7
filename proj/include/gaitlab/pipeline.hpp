#pragma once

// Convenience chains: limit cycle -> adjoint iPRC -> coupling function, and
// speed-parameter families of coupling functions.

#include <vector>

#include "gaitlab/continuation.hpp"
#include "gaitlab/integrate.hpp"
#include "gaitlab/neuron.hpp"
#include "gaitlab/phase.hpp"

namespace gaitlab {

struct PipelineOptions {
    double dt = 0.001;
    double settle_ms = 3000.0;
    std::size_t n_samples = 4096;
    AdjointOptions adjoint;
};

struct BnPipeline {
    NeuronParams params;
    LimitCycle lc;
    PhaseResponseCurve prc;
    CouplingFunction H;
    double eta = 0;
};

inline BnPipeline compute_hbn(const ParamPreset& preset, double xi,
                              const PipelineOptions& opt = {}) {
    BnPipeline out;
    out.params = preset.with_xi(xi);
    CycleOptions copt;
    copt.dt = opt.dt;
    copt.settle_ms = opt.settle_ms;
    copt.n_samples = opt.n_samples;
    copt.warn_gating = false;
    out.lc = find_limit_cycle(out.params, reference_initial_state(), copt);
    out.prc = compute_iprc(out.lc, out.params, opt.adjoint);
    out.H = coupling_function_hbn(out.lc, out.prc, out.params, xi);
    out.eta = solve_eta(out.H);
    return out;
}

// Coupling-function family over a xi grid (parallel over nodes).
inline SampledHFamily build_bn_family(const ParamPreset& preset,
                                      const std::vector<double>& xis,
                                      const PipelineOptions& opt = {},
                                      unsigned threads = 0) {
    SampledHFamily fam;
    fam.xis = xis;
    fam.nodes.resize(xis.size());
    fam.etas.resize(xis.size());
    parallel_for(
        xis.size(),
        [&](std::size_t i) {
            BnPipeline p = compute_hbn(preset, xis[i], opt);
            fam.nodes[i] = std::move(p.H);
            fam.etas[i] = p.eta;
        },
        threads);
    return fam;
}

}  // namespace gaitlab
