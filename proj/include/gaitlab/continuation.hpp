#pragma once

// Natural-parameter continuation of torus fixed points over the speed
// parameter, with global re-seeding to catch branch births, plus event
// detection: saddle-node (a dying pair), transcritical (det sign change on a
// surviving branch with a partner passing through), and degenerate merges
// (three or more branches entering one tolerance ball).

#include <algorithm>
#include <vector>

#include "gaitlab/common.hpp"
#include "gaitlab/happ.hpp"
#include "gaitlab/torus.hpp"

namespace gaitlab {

struct BranchPoint {
    double xi;
    Vec2 theta;
    Eigs eigs;
    FpClass cls;
    double det, tr;
};

struct Branch {
    int id = 0;
    std::vector<BranchPoint> points;
    bool alive = true;
    double death_xi = 0;  // last xi where the branch existed

    const BranchPoint& back() const { return points.back(); }
};

enum class EventKind { SaddleNode, Transcritical, DegenerateMerge, Unresolved };

inline std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::SaddleNode: return "saddle-node";
        case EventKind::Transcritical: return "transcritical";
        case EventKind::DegenerateMerge: return "degenerate-merge";
        default: return "unresolved";
    }
}

struct BifurcationEvent {
    double xi = 0;
    EventKind kind = EventKind::Unresolved;
    std::vector<int> branch_ids;
    Vec2 location{};
    int n_involved = 0;
};

struct ContinuationOptions {
    int steps = 400;
    int reseed_every = 20;
    double match_tol = 1e-3;      // census point <-> branch identification
    double max_jump = 0.08;       // per-step movement guard
    double merge_radius = 0.1;    // ball for grouping deaths into one event
    int group_steps = 3;          // xi proximity (in steps) for grouping deaths
    double partner_tol = 0.05;    // transcritical partner distance
    FixedPointOptions fp;
};

struct ContinuationResult {
    std::vector<Branch> branches;
    std::vector<BifurcationEvent> events;
    std::vector<double> xi_grid;
};

namespace detail {

template <class H>
inline BranchPoint make_branch_point(const TorusSystem<H>& sys, double xi, const Vec2& th,
                                     double class_tol) {
    BranchPoint bp;
    bp.xi = xi;
    bp.theta = th;
    auto J = sys.jacobian(th);
    bp.eigs = eig2x2(J);
    bp.cls = classify_eigs(bp.eigs, class_tol);
    bp.det = J[0] * J[3] - J[1] * J[2];
    bp.tr = J[0] + J[3];
    return bp;
}

}  // namespace detail

// Family: provides `auto at(double xi)` returning an object with members
// `h` (value/deriv callable) and `eta`.
template <class Family>
inline ContinuationResult continue_branches(const Family& family,
                                            const CouplingStrengths& c, double xi_lo,
                                            double xi_hi, ContinuationOptions opt = {}) {
    if (opt.steps < 2) throw Error("continue_branches: need at least 2 steps");
    ContinuationResult res;
    res.xi_grid = linspace(xi_lo, xi_hi, static_cast<std::size_t>(opt.steps) + 1);

    struct Death {
        int branch_id;
        double xi;
        Vec2 location;
        int step;
    };
    std::vector<Death> deaths;
    int next_id = 0;

    auto snap0 = family.at(res.xi_grid[0]);
    auto sys0 = make_torus_system(snap0.h, c, snap0.eta, res.xi_grid[0]);
    {
        auto fps = find_fixed_points(sys0, opt.fp);
        if (fps.empty()) throw Error("continue_branches: no fixed points at xi_lo");
        for (const auto& r : fps) {
            Branch b;
            b.id = next_id++;
            b.points.push_back(
                detail::make_branch_point(sys0, res.xi_grid[0], r.theta, 1e-12));
            res.branches.push_back(std::move(b));
        }
    }

    int n_failed_total = 0;
    for (int k = 1; k < static_cast<int>(res.xi_grid.size()); ++k) {
        double xi = res.xi_grid[k];
        auto snap = family.at(xi);
        auto sys = make_torus_system(snap.h, c, snap.eta, xi);

        // Newton-correct each live branch.
        int live = 0, failed = 0;
        for (auto& b : res.branches) {
            if (!b.alive) continue;
            ++live;
            Vec2 th = b.back().theta;
            bool ok = detail::newton_torus(sys, th, 1e-11, 60);
            if (ok && torus_dist(th, b.back().theta) <= opt.max_jump) {
                b.points.push_back(detail::make_branch_point(sys, xi, th, 1e-12));
            } else {
                b.alive = false;
                b.death_xi = b.back().xi;
                deaths.push_back({b.id, b.back().xi, b.back().theta, k});
                ++failed;
            }
        }
        if (live > 0 && failed * 2 > live && k < 3)
            throw StepTooLargeError("most branches failed at the first steps; halve the step");
        n_failed_total += failed;

        // Collapse duplicates: a correction jumping onto another branch's root.
        for (std::size_t i = 0; i < res.branches.size(); ++i) {
            auto& bi = res.branches[i];
            if (!bi.alive || bi.back().xi != xi) continue;
            for (std::size_t j = i + 1; j < res.branches.size(); ++j) {
                auto& bj = res.branches[j];
                if (!bj.alive || bj.back().xi != xi) continue;
                if (torus_dist(bi.back().theta, bj.back().theta) < 1e-6) {
                    bj.alive = false;
                    bj.points.pop_back();
                    bj.death_xi = bj.back().xi;
                    deaths.push_back({bj.id, bj.back().xi, bj.back().theta, k});
                }
            }
        }

        // Global re-seed: births.
        if (k % opt.reseed_every == 0 || k + 1 == static_cast<int>(res.xi_grid.size())) {
            auto fps = find_fixed_points(sys, opt.fp);
            for (const auto& r : fps) {
                bool matched = false;
                for (const auto& b : res.branches) {
                    if (!b.alive || b.back().xi != xi) continue;
                    if (torus_dist(b.back().theta, r.theta) < opt.match_tol) {
                        matched = true;
                        break;
                    }
                }
                if (!matched) {
                    Branch b;
                    b.id = next_id++;
                    b.points.push_back(detail::make_branch_point(sys, xi, r.theta, 1e-12));
                    res.branches.push_back(std::move(b));
                }
            }
        }
    }
    (void)n_failed_total;

    // ---- Event extraction ----
    double step = (xi_hi - xi_lo) / opt.steps;

    // Group deaths by xi-step proximity and location.
    std::sort(deaths.begin(), deaths.end(),
              [](const Death& a, const Death& b) { return a.step < b.step; });
    std::vector<bool> used(deaths.size(), false);
    for (std::size_t i = 0; i < deaths.size(); ++i) {
        if (used[i]) continue;
        std::vector<std::size_t> group{i};
        used[i] = true;
        for (std::size_t j = i + 1; j < deaths.size(); ++j) {
            if (used[j]) continue;
            if (deaths[j].step - deaths[i].step > opt.group_steps) break;
            bool close = false;
            for (std::size_t g : group)
                if (torus_dist(deaths[j].location, deaths[g].location) < opt.merge_radius)
                    close = true;
            if (close) {
                group.push_back(j);
                used[j] = true;
            }
        }
        BifurcationEvent ev;
        double cx = 0, cy = 0, cxi = 0;
        for (std::size_t g : group) {
            ev.branch_ids.push_back(deaths[g].branch_id);
            cx += deaths[g].location[0];
            cy += deaths[g].location[1];
            cxi = std::max(cxi, deaths[g].xi);
        }
        ev.location = {cx / group.size(), cy / group.size()};
        ev.xi = cxi + 0.5 * step;  // the root vanished between this node and the next
        // Count survivors passing through the ball at the event.
        int survivors = 0;
        for (const auto& b : res.branches) {
            bool dying = false;
            for (int id : ev.branch_ids) dying |= (b.id == id);
            if (dying) continue;
            const BranchPoint* at = nullptr;
            for (const auto& pt : b.points)
                if (pt.xi <= ev.xi) at = &pt;
            if (at && torus_dist(at->theta, ev.location) < opt.merge_radius) ++survivors;
        }
        ev.n_involved = static_cast<int>(group.size()) + survivors;
        ev.kind = group.size() >= 3 ? EventKind::DegenerateMerge
                 : group.size() == 2 ? EventKind::SaddleNode
                                     : EventKind::Unresolved;
        res.events.push_back(ev);
    }

    // Determinant sign changes on surviving stretches -> transcritical.
    for (const auto& b : res.branches) {
        for (std::size_t k = 1; k < b.points.size(); ++k) {
            const auto& p0 = b.points[k - 1];
            const auto& p1 = b.points[k];
            if ((p0.det > 0) == (p1.det > 0)) continue;
            // Skip crossings within a couple of steps of this branch's death.
            if (!b.alive && p1.xi > b.death_xi - 2.5 * step) continue;
            double s = p0.det / (p0.det - p1.det);
            double xie = p0.xi + s * (p1.xi - p0.xi);
            Vec2 loc{p0.theta[0] + s * circ_diff(p1.theta[0], p0.theta[0]),
                     p0.theta[1] + s * circ_diff(p1.theta[1], p0.theta[1])};
            loc = {wrap01(loc[0]), wrap01(loc[1])};
            // Partner: another branch passing close at xie.
            std::vector<int> ids{b.id};
            for (const auto& o : res.branches) {
                if (o.id == b.id) continue;
                const BranchPoint* at = nullptr;
                for (const auto& pt : o.points)
                    if (pt.xi <= xie) at = &pt;
                if (at && torus_dist(at->theta, loc) < opt.partner_tol)
                    ids.push_back(o.id);
            }
            // Deduplicate against an event already recorded at this spot.
            bool dup = false;
            for (auto& ev : res.events) {
                if (ev.kind != EventKind::Transcritical) continue;
                if (std::fabs(ev.xi - xie) < 3 * step &&
                    torus_dist(ev.location, loc) < opt.partner_tol) {
                    dup = true;
                    for (int id : ids)
                        if (std::find(ev.branch_ids.begin(), ev.branch_ids.end(), id) ==
                            ev.branch_ids.end())
                            ev.branch_ids.push_back(id);
                }
            }
            if (dup) continue;
            BifurcationEvent ev;
            ev.xi = xie;
            ev.kind = ids.size() >= 2 ? EventKind::Transcritical : EventKind::Unresolved;
            ev.branch_ids = ids;
            ev.location = loc;
            ev.n_involved = static_cast<int>(ids.size());
            res.events.push_back(ev);
        }
    }

    std::sort(res.events.begin(), res.events.end(),
              [](const BifurcationEvent& a, const BifurcationEvent& b) { return a.xi < b.xi; });
    return res;
}

// ---------------------------------------------------------------------------
// Census over a xi grid.

struct CensusRow {
    double xi = 0;
    ClassCounts counts;
    std::vector<FixedPointRecord> fps;
    int index_sum = 0;
};

template <class Family>
inline std::vector<CensusRow> fixed_point_census(const Family& family,
                                                 const CouplingStrengths& c,
                                                 const std::vector<double>& xis,
                                                 const FixedPointOptions& opt = {},
                                                 unsigned threads = 0) {
    std::vector<CensusRow> rows(xis.size());
    parallel_for(
        xis.size(),
        [&](std::size_t i) {
            auto snap = family.at(xis[i]);
            auto sys = make_torus_system(snap.h, c, snap.eta, xis[i]);
            CensusRow row;
            row.xi = xis[i];
            row.fps = find_fixed_points(sys, opt);
            row.counts = count_classes(row.fps);
            row.index_sum = index_sum(row.fps);
            rows[i] = std::move(row);
        },
        threads);
    return rows;
}

// ---------------------------------------------------------------------------
// H families.

// Closed-form family.
struct HappFamily {
    struct Snapshot {
        HappView h;
        double eta;
    };
    Snapshot at(double delta) const { return {HappView{delta}, happ_eta_clamped(delta)}; }
};

// Linear blend between two sampled coupling functions.
struct BlendedH {
    const CouplingFunction* lo = nullptr;
    const CouplingFunction* hi = nullptr;
    double w = 0;  // weight of hi

    double value(double u) const { return (1 - w) * lo->value(u) + w * hi->value(u); }
    double deriv(double u) const { return (1 - w) * lo->deriv(u) + w * hi->deriv(u); }
};

// Family backed by coupling functions precomputed on a xi grid; between
// nodes, samples (equivalently Fourier coefficients) blend linearly.
struct SampledHFamily {
    std::vector<double> xis;              // ascending
    std::vector<CouplingFunction> nodes;  // same length
    std::vector<double> etas;

    struct Snapshot {
        BlendedH h;
        double eta;
    };

    Snapshot at(double xi) const {
        if (xis.empty()) throw Error("SampledHFamily: empty");
        if (xis.size() == 1) return {{&nodes[0], &nodes[0], 0.0}, etas[0]};
        auto it = std::upper_bound(xis.begin(), xis.end(), xi);
        std::size_t j = std::min<std::size_t>(
            std::max<std::ptrdiff_t>(1, it - xis.begin()), xis.size() - 1);
        double w = (xi - xis[j - 1]) / (xis[j] - xis[j - 1]);
        w = std::min(1.0, std::max(0.0, w));
        return {{&nodes[j - 1], &nodes[j], w}, (1 - w) * etas[j - 1] + w * etas[j]};
    }
};

}  // namespace gaitlab
