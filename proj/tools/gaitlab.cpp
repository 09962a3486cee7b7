// gaitlab command-line front end: every analysis writes plot-ready CSV/JSON
// plus a manifest that reproduces the run bit-identically.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gaitlab/continuation.hpp"
#include "gaitlab/gait.hpp"
#include "gaitlab/happ.hpp"
#include "gaitlab/integrate.hpp"
#include "gaitlab/io.hpp"
#include "gaitlab/network.hpp"
#include "gaitlab/phase.hpp"
#include "gaitlab/pipeline.hpp"
#include "gaitlab/presets.hpp"
#include "gaitlab/torus.hpp"

namespace fs = std::filesystem;
using namespace gaitlab;

namespace {

struct Common {
    std::string out_dir = "out";
    unsigned threads = 0;
};

std::string outpath(const Common& c, const std::string& name) {
    fs::create_directories(c.out_dir);
    return c.out_dir + "/" + name;
}

void finish(const Common& c, const std::string& sub, const Json& params,
            std::vector<std::string> outputs, double wall_ms) {
    RunManifest m;
    m.subcommand = sub;
    m.params = params;
    m.outputs = std::move(outputs);
    m.wall_ms = wall_ms;
    m.write(c.out_dir);
}

const char* kSweepHeader[] = {"xi", "freq_hz", "duty", "swing_ms", "stance_ms", "period_ms"};

// ---------------------------------------------------------------------- single-cell
struct SingleCellCfg {
    std::string preset = "delta-control";
    double xi = 0.02;
    double dt = 0.001;
    double settle = 3000.0;
    Json to_json() const {
        return {{"preset", preset}, {"xi", xi}, {"dt", dt}, {"settle", settle}};
    }
    static SingleCellCfg from_json(const Json& j) {
        SingleCellCfg c;
        c.preset = j.at("preset");
        c.xi = j.at("xi");
        c.dt = j.at("dt");
        c.settle = j.at("settle");
        return c;
    }
};

std::vector<std::string> run_single_cell(const SingleCellCfg& cfg, const Common& com) {
    ParamPreset pr = neuron_preset(cfg.preset);
    NeuronParams p = pr.with_xi(cfg.xi);
    CycleOptions copt;
    copt.dt = cfg.dt;
    copt.settle_ms = cfg.settle;
    LimitCycle lc = find_limit_cycle(p, reference_initial_state(), copt);
    BurstMetrics m = burst_metrics(lc);

    std::string f1 = outpath(com, "single_cell_metrics.csv");
    {
        CsvWriter w(f1, {kSweepHeader, kSweepHeader + 6});
        w.row(std::vector<double>{cfg.xi, m.frequency_hz, m.duty_cycle, m.swing_ms,
                                  m.stance_ms, m.period_ms});
    }
    std::string f2 = outpath(com, "cycle.csv");
    {
        CsvWriter w(f2, {"t_ms", "v", "m", "w", "s"});
        for (std::size_t i = 0; i < lc.samples.size(); ++i) {
            double t = lc.period_ms * static_cast<double>(i) / lc.samples.size();
            const auto& x = lc.samples[i];
            w.row(std::vector<double>{t, x[0], x[1], x[2], x[3]});
        }
    }
    return {f1, f2};
}

// ---------------------------------------------------------------------- sweep
struct SweepCfg {
    std::string preset = "delta-control";
    int n = 20;
    double dt = 0.005;
    Json to_json() const { return {{"preset", preset}, {"n", n}, {"dt", dt}}; }
    static SweepCfg from_json(const Json& j) {
        SweepCfg c;
        c.preset = j.at("preset");
        c.n = j.at("n");
        c.dt = j.at("dt");
        return c;
    }
};

std::vector<std::string> run_sweep(const SweepCfg& cfg, const Common& com) {
    ParamPreset pr = neuron_preset(cfg.preset);
    SweepOptions opt;
    opt.dt = cfg.dt;
    opt.threads = com.threads;
    auto rows = speed_sweep(pr, static_cast<std::size_t>(cfg.n), opt);
    std::string f = outpath(com, "sweep.csv");
    CsvWriter w(f, {kSweepHeader, kSweepHeader + 6});
    for (const auto& r : rows)
        w.row(std::vector<double>{r.xi, r.frequency_hz, r.duty, r.swing_ms, r.stance_ms,
                                  r.period_ms});
    w.close();
    return {f};
}

// ---------------------------------------------------------------------- network
struct NetworkCfg {
    std::string preset = "delta-control";
    double xi = 0.02;
    std::string couplings = "fig5";
    std::string ics = "fig5-delta";
    double span = 5000.0;
    double window = 0.0;
    double dt = 0.001;
    Json to_json() const {
        return {{"preset", preset}, {"xi", xi},      {"couplings", couplings},
                {"ics", ics},       {"span", span},  {"window", window},
                {"dt", dt}};
    }
    static NetworkCfg from_json(const Json& j) {
        NetworkCfg c;
        c.preset = j.at("preset");
        c.xi = j.at("xi");
        c.couplings = j.at("couplings");
        c.ics = j.at("ics");
        c.span = j.at("span");
        c.window = j.at("window");
        c.dt = j.at("dt");
        return c;
    }
};

std::vector<std::string> run_network(const NetworkCfg& cfg, const Common& com) {
    ParamPreset pr = neuron_preset(cfg.preset);
    NeuronParams p = pr.with_xi(cfg.xi);
    CouplingStrengths c = resolve_couplings(cfg.couplings);
    auto v6 = resolve_network_ics(cfg.ics);
    GaitSimOptions opt;
    opt.dt = cfg.dt;
    opt.span_ms = cfg.span;
    opt.window_ms = cfg.window;
    GaitRaster r = simulate_gait(p, c, network_ics_from_voltages(p, v6), opt);
    GaitLabel label = classify_gait(r);

    static const char* legs[6] = {"R1", "R2", "R3", "L1", "L2", "L3"};
    std::string f1 = outpath(com, "raster.csv");
    {
        CsvWriter w(f1, {"leg", "t_on", "t_off"});
        for (int i = 0; i < 6; ++i)
            for (const auto& iv : r.legs[i])
                w.row(std::vector<std::string>{legs[i], format_double(iv.t_on),
                                               format_double(iv.t_off)});
    }
    std::string f2 = outpath(com, "gait.json");
    {
        PhaseEstimate est = estimate_phases(r);
        Json j{{"gait", to_string(label.cls)},
               {"eta_frac", label.eta_frac},
               {"residual", label.residual},
               {"period_ms", est.period_ms},
               {"phases", est.phases}};
        write_json_atomic(f2, j);
    }
    return {f1, f2};
}

// ---------------------------------------------------------------------- iprc / hfun / eta / fourier
struct PhaseCfg {
    std::string preset = "delta-control";
    double xi = 0.02;
    double dt = 0.001;
    int n = 25;  // eta grid nodes
    Json to_json() const {
        return {{"preset", preset}, {"xi", xi}, {"dt", dt}, {"n", n}};
    }
    static PhaseCfg from_json(const Json& j) {
        PhaseCfg c;
        c.preset = j.at("preset");
        c.xi = j.at("xi");
        c.dt = j.at("dt");
        c.n = j.at("n");
        return c;
    }
};

std::vector<std::string> run_iprc(const PhaseCfg& cfg, const Common& com) {
    ParamPreset pr = neuron_preset(cfg.preset);
    PipelineOptions opt;
    opt.dt = cfg.dt;
    BnPipeline pipe = compute_hbn(pr, cfg.xi, opt);
    std::string f = outpath(com, "iprc.csv");
    CsvWriter w(f, {"t_ms", "Z_v", "Z_m", "Z_w", "Z_s"});
    for (std::size_t i = 0; i < pipe.prc.Z.size(); ++i) {
        double t = pipe.lc.period_ms * static_cast<double>(i) / pipe.prc.Z.size();
        const auto& z = pipe.prc.Z[i];
        w.row(std::vector<double>{t, z[0], z[1], z[2], z[3]});
    }
    w.close();
    return {f};
}

std::vector<std::string> run_hfun(const PhaseCfg& cfg, const Common& com) {
    ParamPreset pr = neuron_preset(cfg.preset);
    PipelineOptions opt;
    opt.dt = cfg.dt;
    BnPipeline pipe = compute_hbn(pr, cfg.xi, opt);
    std::string f = outpath(com, "hfun.csv");
    CsvWriter w(f, {"theta_frac", "H"});
    for (std::size_t i = 0; i < pipe.H.samples.size(); ++i)
        w.row(std::vector<double>{static_cast<double>(i) / pipe.H.samples.size(),
                                  pipe.H.samples[i]});
    w.close();
    return {f};
}

std::vector<std::string> run_eta(const PhaseCfg& cfg, const Common& com) {
    ParamPreset pr = neuron_preset(cfg.preset);
    PipelineOptions opt;
    opt.dt = cfg.dt;
    auto xis = linspace(pr.sweep_lo, pr.sweep_hi, static_cast<std::size_t>(cfg.n));
    SampledHFamily fam = build_bn_family(pr, xis, opt, com.threads);
    std::string f = outpath(com, "eta.csv");
    CsvWriter w(f, {"xi", "eta_frac"});
    for (std::size_t i = 0; i < xis.size(); ++i)
        w.row(std::vector<double>{xis[i], fam.etas[i]});
    w.close();
    return {f};
}

std::vector<std::string> run_fourier(const PhaseCfg& cfg, const Common& com) {
    ParamPreset pr = neuron_preset(cfg.preset);
    PipelineOptions opt;
    opt.dt = cfg.dt;
    BnPipeline pipe = compute_hbn(pr, cfg.xi, opt);
    FourierCoefficients fc = fit_fourier(pipe.H);
    std::string f = outpath(com, "fourier.json");
    write_json_atomic(f, Json{{"xi", cfg.xi},
                              {"a0", fc.a0},
                              {"a1", fc.a1},
                              {"b1", fc.b1},
                              {"a2", fc.a2},
                              {"b2", fc.b2},
                              {"residual", fc.fit_residual}});
    return {f};
}

// ---------------------------------------------------------------------- torus
struct TorusCfg {
    std::string hsource = "bn";  // bn | app | file
    std::string hfile;
    std::string preset = "delta-control";
    double xi = 0.02;
    std::string couplings;  // preset name or file; empty when alpha is used
    double alpha = -1;      // <0 -> use couplings
    double dt = 0.001;
    int grid_n = 256;
    int resolution = 256;
    std::string traj;       // "t1,t2" initial condition; empty -> no trajectory
    double traj_span = 100.0;
    Json to_json() const {
        return {{"hsource", hsource}, {"hfile", hfile},     {"preset", preset},
                {"xi", xi},           {"couplings", couplings}, {"alpha", alpha},
                {"dt", dt},           {"grid_n", grid_n},   {"resolution", resolution},
                {"traj", traj},       {"traj_span", traj_span}};
    }
    static TorusCfg from_json(const Json& j) {
        TorusCfg c;
        c.hsource = j.at("hsource");
        c.hfile = j.at("hfile");
        c.preset = j.at("preset");
        c.xi = j.at("xi");
        c.couplings = j.at("couplings");
        c.alpha = j.at("alpha");
        c.dt = j.at("dt");
        c.grid_n = j.at("grid_n");
        c.resolution = j.at("resolution");
        c.traj = j.at("traj");
        c.traj_span = j.at("traj_span");
        return c;
    }
};

CouplingFunction load_h_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    std::vector<double> ys;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.rfind("theta", 0) == 0) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError("expected theta_frac,H", line_no);
        try {
            ys.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ParseError("bad numeric value", line_no);
        }
    }
    if (ys.size() < 8) throw Error("H file must carry at least 8 samples");
    return make_coupling_function(std::move(ys));
}

std::vector<std::string> run_torus(const TorusCfg& cfg, const Common& com) {
    CouplingFunction H;
    if (cfg.hsource == "bn") {
        PipelineOptions opt;
        opt.dt = cfg.dt;
        H = compute_hbn(neuron_preset(cfg.preset), cfg.xi, opt).H;
    } else if (cfg.hsource == "app") {
        H = happ_sampled(cfg.xi);
    } else if (cfg.hsource == "file") {
        H = load_h_csv(cfg.hfile);
    } else {
        throw Error("hsource must be bn, app, or file");
    }
    double eta = solve_eta(H);
    CouplingStrengths c =
        cfg.alpha > 0 ? reduced_couplings(cfg.alpha) : resolve_couplings(cfg.couplings);
    auto sys = make_torus_system(H, c, eta, cfg.xi);

    FixedPointOptions fopt;
    fopt.grid_n = cfg.grid_n;
    auto fps = find_fixed_points(sys, fopt);

    std::string f1 = outpath(com, "fixed_points.csv");
    {
        CsvWriter w(f1, {"theta1", "theta2", "re_l1", "im_l1", "re_l2", "im_l2", "class",
                         "index", "gait"});
        for (const auto& r : fps)
            w.row(std::vector<std::string>{
                format_double(r.theta[0]), format_double(r.theta[1]),
                format_double(r.eigs.l1.real()), format_double(r.eigs.l1.imag()),
                format_double(r.eigs.l2.real()), format_double(r.eigs.l2.imag()),
                to_string(r.cls), std::to_string(r.index), to_string(r.gait.cls)});
    }
    std::string f2 = outpath(com, "nullclines.csv");
    {
        auto nc = nullclines(sys, cfg.resolution);
        CsvWriter w(f2, {"component", "x1", "y1", "x2", "y2"});
        for (int k = 0; k < 2; ++k)
            for (const auto& s : nc[k])
                w.row(std::vector<std::string>{std::to_string(k + 1),
                                               format_double(s.a[0]), format_double(s.a[1]),
                                               format_double(s.b[0]), format_double(s.b[1])});
    }
    std::vector<std::string> files{f1, f2};
    if (!cfg.traj.empty()) {
        auto comma = cfg.traj.find(',');
        if (comma == std::string::npos) throw Error("--traj expects 'theta1,theta2'");
        Vec2 th0{std::stod(cfg.traj.substr(0, comma)), std::stod(cfg.traj.substr(comma + 1))};
        auto tr = flow_trajectory(sys, th0, cfg.traj_span);
        std::string f3 = outpath(com, "trajectory.csv");
        CsvWriter w(f3, {"theta1", "theta2"});
        for (const auto& pt : tr.points) w.row(std::vector<double>{pt[0], pt[1]});
        w.close();
        files.push_back(f3);
    }
    return files;
}

// ---------------------------------------------------------------------- bifurcate
struct BifurcateCfg {
    std::string hsource = "app";
    std::string preset = "delta-control";
    double alpha = -1;
    std::string couplings;
    std::string xi_range = "0.01:0.026";
    int steps = 400;
    int bn_nodes = 25;
    double dt = 0.001;
    Json to_json() const {
        return {{"hsource", hsource}, {"preset", preset}, {"alpha", alpha},
                {"couplings", couplings}, {"xi_range", xi_range}, {"steps", steps},
                {"bn_nodes", bn_nodes}, {"dt", dt}};
    }
    static BifurcateCfg from_json(const Json& j) {
        BifurcateCfg c;
        c.hsource = j.at("hsource");
        c.preset = j.at("preset");
        c.alpha = j.at("alpha");
        c.couplings = j.at("couplings");
        c.xi_range = j.at("xi_range");
        c.steps = j.at("steps");
        c.bn_nodes = j.at("bn_nodes");
        c.dt = j.at("dt");
        return c;
    }
};

std::vector<std::string> write_continuation(const ContinuationResult& res,
                                            const Common& com) {
    std::string f1 = outpath(com, "branches.csv");
    {
        CsvWriter w(f1, {"branch_id", "xi", "theta1", "theta2", "class"});
        for (const auto& b : res.branches)
            for (const auto& pt : b.points)
                w.row(std::vector<std::string>{std::to_string(b.id), format_double(pt.xi),
                                               format_double(pt.theta[0]),
                                               format_double(pt.theta[1]), to_string(pt.cls)});
    }
    std::string f2 = outpath(com, "events.csv");
    {
        CsvWriter w(f2, {"xi", "kind", "branch_ids", "theta1", "theta2", "n_involved"});
        for (const auto& e : res.events) {
            std::string ids;
            for (std::size_t i = 0; i < e.branch_ids.size(); ++i)
                ids += (i ? ";" : "") + std::to_string(e.branch_ids[i]);
            w.row(std::vector<std::string>{format_double(e.xi), to_string(e.kind), ids,
                                           format_double(e.location[0]),
                                           format_double(e.location[1]),
                                           std::to_string(e.n_involved)});
        }
    }
    return {f1, f2};
}

std::vector<std::string> run_bifurcate(const BifurcateCfg& cfg, const Common& com) {
    auto colon = cfg.xi_range.find(':');
    if (colon == std::string::npos) throw Error("--xi-range expects 'lo:hi'");
    double lo = std::stod(cfg.xi_range.substr(0, colon));
    double hi = std::stod(cfg.xi_range.substr(colon + 1));
    if (!(hi > lo)) throw Error("--xi-range must have lo < hi");

    CouplingStrengths c =
        cfg.alpha > 0 ? reduced_couplings(cfg.alpha) : resolve_couplings(cfg.couplings);
    ContinuationOptions opt;
    opt.steps = cfg.steps;

    ContinuationResult res;
    if (cfg.hsource == "app") {
        res = continue_branches(HappFamily{}, c, lo, hi, opt);
    } else if (cfg.hsource == "bn") {
        ParamPreset pr = neuron_preset(cfg.preset);
        PipelineOptions popt;
        popt.dt = cfg.dt;
        auto xis = linspace(lo, hi, static_cast<std::size_t>(cfg.bn_nodes));
        SampledHFamily fam = build_bn_family(pr, xis, popt, com.threads);
        res = continue_branches(fam, c, lo, hi, opt);
    } else {
        throw Error("hsource must be bn or app");
    }
    return write_continuation(res, com);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bursting-neuron CPG simulator and gait-transition analysis"};
    app.require_subcommand(0, 1);

    Common com;
    std::string from_manifest;
    app.add_option("--from-manifest", from_manifest,
                   "re-run a recorded analysis bit-identically");
    app.add_option("--out-dir", com.out_dir, "output directory");
    app.add_option("--threads", com.threads, "worker thread cap");

    SingleCellCfg sc;
    auto* c1 = app.add_subcommand("single-cell", "one limit cycle and its burst metrics");
    c1->add_option("--preset", sc.preset)->check(CLI::IsMember({"delta-control", "iext-control"}));
    c1->add_option("--xi", sc.xi);
    c1->add_option("--dt", sc.dt);
    c1->add_option("--settle", sc.settle);

    SweepCfg sw;
    auto* c2 = app.add_subcommand("sweep", "speed-parameter sweep of burst metrics");
    c2->add_option("--preset", sw.preset)->check(CLI::IsMember({"delta-control", "iext-control"}));
    c2->add_option("--n", sw.n)->check(CLI::Range(2, 10000));
    c2->add_option("--dt", sw.dt);

    NetworkCfg nw;
    auto* c3 = app.add_subcommand("network", "24-ODE network run, raster and gait label");
    c3->add_option("--preset", nw.preset)->check(CLI::IsMember({"delta-control", "iext-control"}));
    c3->add_option("--xi", nw.xi);
    c3->add_option("--couplings", nw.couplings);
    c3->add_option("--ics", nw.ics);
    c3->add_option("--span", nw.span);
    c3->add_option("--window", nw.window);
    c3->add_option("--dt", nw.dt);

    PhaseCfg ph;
    auto* c4 = app.add_subcommand("iprc", "adjoint phase response curve");
    auto* c5 = app.add_subcommand("hfun", "coupling function H");
    auto* c6 = app.add_subcommand("eta", "transition offset eta over the sweep window");
    auto* c7 = app.add_subcommand("fourier", "order-2 Fourier fit of H");
    for (auto* cc : {c4, c5, c6, c7}) {
        cc->add_option("--preset", ph.preset)
            ->check(CLI::IsMember({"delta-control", "iext-control"}));
        cc->add_option("--xi", ph.xi);
        cc->add_option("--dt", ph.dt);
    }
    c6->add_option("--n", ph.n)->check(CLI::Range(2, 500));

    TorusCfg tc;
    auto* c8 = app.add_subcommand("torus", "phase-difference fixed points and nullclines");
    c8->add_option("--hsource", tc.hsource)->check(CLI::IsMember({"bn", "app", "file"}));
    c8->add_option("--hfile", tc.hfile);
    c8->add_option("--preset", tc.preset)->check(CLI::IsMember({"delta-control", "iext-control"}));
    c8->add_option("--xi", tc.xi);
    c8->add_option("--couplings", tc.couplings);
    c8->add_option("--alpha", tc.alpha);
    c8->add_option("--dt", tc.dt);
    c8->add_option("--grid-n", tc.grid_n);
    c8->add_option("--resolution", tc.resolution);
    c8->add_option("--traj", tc.traj);
    c8->add_option("--traj-span", tc.traj_span);

    BifurcateCfg bf;
    auto* c9 = app.add_subcommand("bifurcate", "branch continuation over the speed parameter");
    c9->add_option("--hsource", bf.hsource)->check(CLI::IsMember({"bn", "app"}));
    c9->add_option("--preset", bf.preset)->check(CLI::IsMember({"delta-control", "iext-control"}));
    c9->add_option("--alpha", bf.alpha);
    c9->add_option("--couplings", bf.couplings);
    c9->add_option("--xi-range", bf.xi_range);
    c9->add_option("--steps", bf.steps)->check(CLI::Range(2, 100000));
    c9->add_option("--bn-nodes", bf.bn_nodes)->check(CLI::Range(2, 500));
    c9->add_option("--dt", bf.dt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        auto t0 = std::chrono::steady_clock::now();
        std::string sub;
        Json params;
        std::vector<std::string> outputs;

        if (!from_manifest.empty()) {
            RunManifest m = RunManifest::read(from_manifest);
            sub = m.subcommand;
            params = m.params;
            if (sub == "single-cell")
                outputs = run_single_cell(SingleCellCfg::from_json(params), com);
            else if (sub == "sweep")
                outputs = run_sweep(SweepCfg::from_json(params), com);
            else if (sub == "network")
                outputs = run_network(NetworkCfg::from_json(params), com);
            else if (sub == "iprc")
                outputs = run_iprc(PhaseCfg::from_json(params), com);
            else if (sub == "hfun")
                outputs = run_hfun(PhaseCfg::from_json(params), com);
            else if (sub == "eta")
                outputs = run_eta(PhaseCfg::from_json(params), com);
            else if (sub == "fourier")
                outputs = run_fourier(PhaseCfg::from_json(params), com);
            else if (sub == "torus")
                outputs = run_torus(TorusCfg::from_json(params), com);
            else if (sub == "bifurcate")
                outputs = run_bifurcate(BifurcateCfg::from_json(params), com);
            else
                throw Error("manifest names unknown subcommand: " + sub);
        } else if (c1->parsed()) {
            sub = "single-cell";
            params = sc.to_json();
            outputs = run_single_cell(sc, com);
        } else if (c2->parsed()) {
            sub = "sweep";
            params = sw.to_json();
            outputs = run_sweep(sw, com);
        } else if (c3->parsed()) {
            sub = "network";
            params = nw.to_json();
            outputs = run_network(nw, com);
        } else if (c4->parsed() || c5->parsed() || c6->parsed() || c7->parsed()) {
            params = ph.to_json();
            if (c4->parsed()) {
                sub = "iprc";
                outputs = run_iprc(ph, com);
            } else if (c5->parsed()) {
                sub = "hfun";
                outputs = run_hfun(ph, com);
            } else if (c6->parsed()) {
                sub = "eta";
                outputs = run_eta(ph, com);
            } else {
                sub = "fourier";
                outputs = run_fourier(ph, com);
            }
        } else if (c8->parsed()) {
            sub = "torus";
            params = tc.to_json();
            outputs = run_torus(tc, com);
        } else if (c9->parsed()) {
            sub = "bifurcate";
            params = bf.to_json();
            outputs = run_bifurcate(bf, com);
        } else {
            std::cerr << app.help() << std::endl;
            return 2;
        }

        double wall =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        finish(com, sub, params, outputs, wall);
        return 0;
    } catch (const Error& e) {
        std::cerr << "gaitlab: " << e.what() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "gaitlab: " << e.what() << std::endl;
        return 1;
    }
}
