#pragma once

// Phase-difference dynamics on the 2-torus in normalized coordinates
// (theta1, theta2) = (phi1 - phi2, phi3 - phi2) in [0,1)^2:
//
//   theta1' = (c1-c2) H(2/3-eta) + c5 H(-theta1) - c4 H(theta1) - c7 H(theta2)
//   theta2' = (c3-c2) H(2/3-eta) + c6 H(-theta2) - c4 H(theta1) - c7 H(theta2)
//
// With balance and c1=c2=c3 the time-rescaled form is
//   theta1' = H(-theta1) - alpha H(theta1) - (1-alpha) H(theta2),
// which is the same field with c = (0,0,0, alpha, 1, 1, 1-alpha).

#include <algorithm>
#include <complex>
#include <optional>
#include <vector>

#include "gaitlab/common.hpp"
#include "gaitlab/gait.hpp"
#include "gaitlab/integrate.hpp"
#include "gaitlab/network.hpp"

namespace gaitlab {

inline CouplingStrengths reduced_couplings(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie in (0,1)");
    return CouplingStrengths{{0, 0, 0, alpha, 1.0, 1.0, 1.0 - alpha}};
}

template <class H>
struct TorusSystem {
    const H* h = nullptr;
    CouplingStrengths c;
    double eta = 0;  // transition offset used by the contralateral term
    double xi = 0;

    Vec2 field(const Vec2& th) const {
        const auto& hh = *h;
        double K = hh.value(2.0 / 3.0 - eta);
        double h1 = hh.value(th[0]), h2 = hh.value(th[1]);
        double hm1 = hh.value(-th[0]), hm2 = hh.value(-th[1]);
        return {(c[0] - c[1]) * K + c[4] * hm1 - c[3] * h1 - c[6] * h2,
                (c[2] - c[1]) * K + c[5] * hm2 - c[3] * h1 - c[6] * h2};
    }

    // Analytic Jacobian via the spline derivative of H.
    std::array<double, 4> jacobian(const Vec2& th) const {
        const auto& hh = *h;
        double d1 = hh.deriv(th[0]), d2 = hh.deriv(th[1]);
        double dm1 = hh.deriv(-th[0]), dm2 = hh.deriv(-th[1]);
        return {-c[4] * dm1 - c[3] * d1, -c[6] * d2, -c[3] * d1, -c[5] * dm2 - c[6] * d2};
    }
};

template <class H>
inline TorusSystem<H> make_torus_system(const H& h, const CouplingStrengths& c,
                                        double eta, double xi = 0) {
    return TorusSystem<H>{&h, c, eta, xi};
}

template <class H>
inline TorusSystem<H> make_reduced_system(const H& h, double alpha, double eta,
                                          double xi = 0) {
    return TorusSystem<H>{&h, reduced_couplings(alpha), eta, xi};
}

// ---------------------------------------------------------------------------
// Eigenvalues and classification

enum class FpClass { Sink, Source, Saddle, Nonhyperbolic };

inline std::string to_string(FpClass c) {
    switch (c) {
        case FpClass::Sink: return "sink";
        case FpClass::Source: return "source";
        case FpClass::Saddle: return "saddle";
        default: return "nonhyperbolic";
    }
}

struct Eigs {
    std::complex<double> l1, l2;
};

inline Eigs eig2x2(const std::array<double, 4>& J) {
    double tr = J[0] + J[3];
    double det = J[0] * J[3] - J[1] * J[2];
    double disc = tr * tr / 4.0 - det;
    if (disc >= 0) {
        double r = std::sqrt(disc);
        return {{tr / 2.0 - r, 0.0}, {tr / 2.0 + r, 0.0}};
    }
    double im = std::sqrt(-disc);
    return {{tr / 2.0, -im}, {tr / 2.0, im}};
}

inline FpClass classify_eigs(const Eigs& e, double tol) {
    double r1 = e.l1.real(), r2 = e.l2.real();
    if (std::fabs(r1) < tol || std::fabs(r2) < tol) return FpClass::Nonhyperbolic;
    if (r1 < 0 && r2 < 0) return FpClass::Sink;
    if (r1 > 0 && r2 > 0) return FpClass::Source;
    return FpClass::Saddle;
}

struct FixedPointRecord {
    Vec2 theta{};
    std::array<double, 4> jacobian{};
    Eigs eigs;
    FpClass cls = FpClass::Nonhyperbolic;
    int index = 0;  // sign(det J)
    GaitLabel gait;
    double residual = 0;
};

// ---------------------------------------------------------------------------
// Fixed-point search: grid seeding + damped Newton with torus wrapping.

struct FixedPointOptions {
    int grid_n = 256;
    double newton_tol = 1e-12;   // residual target (field sup-norm)
    int newton_max_iter = 50;
    double dedup_tol = 1e-4;
    double nonhyperbolic_rel = 1e-6;  // relative to the field scale
    double gait_tol = 0.04;           // sup-norm distance for gait labels
};

namespace detail {

template <class H>
inline bool newton_torus(const TorusSystem<H>& sys, Vec2& th, double tol, int max_iter) {
    Vec2 f = sys.field(th);
    double r = std::max(std::fabs(f[0]), std::fabs(f[1]));
    for (int it = 0; it < max_iter; ++it) {
        if (r < tol) return true;
        auto J = sys.jacobian(th);
        double det = J[0] * J[3] - J[1] * J[2];
        if (std::fabs(det) < 1e-300) return false;
        double dx = (J[3] * f[0] - J[1] * f[1]) / det;
        double dy = (-J[2] * f[0] + J[0] * f[1]) / det;
        double damp = 1.0;
        for (int k = 0; k < 8; ++k) {
            Vec2 trial{wrap01(th[0] - damp * dx), wrap01(th[1] - damp * dy)};
            Vec2 ft = sys.field(trial);
            double rt = std::max(std::fabs(ft[0]), std::fabs(ft[1]));
            if (rt < r || damp < 1.0 / 64.0) {
                th = trial;
                f = ft;
                r = rt;
                break;
            }
            damp *= 0.5;
        }
    }
    return r < tol;
}

}  // namespace detail

// Label a torus fixed point by the nearest gait structure.
inline GaitLabel torus_gait_label(const Vec2& th, double eta, double tol) {
    auto near = [&](double a, double b) {
        return torus_dist(th, Vec2{a, b}) <= tol;
    };
    // Exact family points first (eta of the system), then the corners.
    if (near(0.5, 0.5)) return {GaitClass::Tripod, 1.0 / 6.0, torus_dist(th, {0.5, 0.5})};
    double a = 2.0 / 3.0 - eta, b = 1.0 / 3.0 + eta;
    if (near(a, b)) {
        GaitClass c = eta < 1e-3 ? GaitClass::TetrapodForward : GaitClass::TransitionForward;
        return {c, eta, torus_dist(th, {a, b})};
    }
    if (near(b, a)) {
        GaitClass c = eta < 1e-3 ? GaitClass::TetrapodBackward : GaitClass::TransitionBackward;
        return {c, eta, torus_dist(th, {b, a})};
    }
    // Membership in the one-parameter families.
    double best = 1e300, best_s = 0;
    int best_fam = -1;
    const int n = 400;
    for (int k = 0; k <= n; ++k) {
        double s = (1.0 / 6.0) * k / n;
        double d1 = torus_dist(th, Vec2{2.0 / 3.0 - s, 1.0 / 3.0 + s});
        double d2 = torus_dist(th, Vec2{1.0 / 3.0 + s, 2.0 / 3.0 - s});
        if (d1 < best) { best = d1; best_s = s; best_fam = 0; }
        if (d2 < best) { best = d2; best_s = s; best_fam = 1; }
    }
    if (best <= tol) {
        if (best_s >= 1.0 / 6.0 - 1e-3)
            return {GaitClass::Tripod, 1.0 / 6.0, best};
        GaitClass c;
        if (best_fam == 0)
            c = best_s < 1e-3 ? GaitClass::TetrapodForward : GaitClass::TransitionForward;
        else
            c = best_s < 1e-3 ? GaitClass::TetrapodBackward : GaitClass::TransitionBackward;
        return {c, best_s, best};
    }
    return {GaitClass::Unclassified, 0, best};
}

template <class H>
inline std::vector<FixedPointRecord> find_fixed_points(const TorusSystem<H>& sys,
                                                       const FixedPointOptions& opt = {}) {
    int n = std::max(opt.grid_n, 16);
    std::vector<double> f1((n + 1) * (n + 1)), f2((n + 1) * (n + 1));
    double field_scale = 0;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            Vec2 th{(i + 0.5) / n, (j + 0.5) / n};
            Vec2 f = sys.field(th);
            f1[i * (n + 1) + j] = f[0];
            f2[i * (n + 1) + j] = f[1];
            field_scale = std::max({field_scale, std::fabs(f[0]), std::fabs(f[1])});
        }
    }
    if (field_scale == 0) field_scale = 1.0;

    std::vector<Vec2> seeds;
    auto sign_change = [](double a, double b, double c, double d) {
        double lo = std::min({a, b, c, d}), hi = std::max({a, b, c, d});
        return lo <= 0 && hi >= 0;
    };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double a1 = f1[i * (n + 1) + j], b1 = f1[(i + 1) * (n + 1) + j];
            double c1 = f1[i * (n + 1) + j + 1], d1 = f1[(i + 1) * (n + 1) + j + 1];
            double a2 = f2[i * (n + 1) + j], b2 = f2[(i + 1) * (n + 1) + j];
            double c2 = f2[i * (n + 1) + j + 1], d2 = f2[(i + 1) * (n + 1) + j + 1];
            if (sign_change(a1, b1, c1, d1) && sign_change(a2, b2, c2, d2))
                seeds.push_back(Vec2{(i + 1.0) / n, (j + 1.0) / n});
        }
    }
    // Always try the structural candidates.
    double e = sys.eta;
    for (Vec2 s : {Vec2{2.0 / 3.0 - e, 1.0 / 3.0 + e}, Vec2{1.0 / 3.0 + e, 1.0 / 3.0 + e},
                   Vec2{1.0 / 3.0 + e, 2.0 / 3.0 - e}, Vec2{2.0 / 3.0 - e, 2.0 / 3.0 - e},
                   Vec2{0.5, 0.5}, Vec2{0.0, 0.0}})
        seeds.push_back(s);

    std::vector<FixedPointRecord> out;
    double class_tol = opt.nonhyperbolic_rel * field_scale;
    double accept_tol = std::max(opt.newton_tol * field_scale, 1e-13);
    for (Vec2 s : seeds) {
        Vec2 th = s;
        if (!detail::newton_torus(sys, th, accept_tol, opt.newton_max_iter))
            continue;  // NewtonDiverged: seed skipped
        bool dup = false;
        for (const auto& r : out)
            if (torus_dist(r.theta, th) < opt.dedup_tol) {
                dup = true;
                break;
            }
        if (dup) continue;
        FixedPointRecord rec;
        rec.theta = {wrap01(th[0]), wrap01(th[1])};
        rec.jacobian = sys.jacobian(rec.theta);
        rec.eigs = eig2x2(rec.jacobian);
        rec.cls = classify_eigs(rec.eigs, class_tol);
        double det = rec.jacobian[0] * rec.jacobian[3] - rec.jacobian[1] * rec.jacobian[2];
        rec.index = det > 0 ? 1 : (det < 0 ? -1 : 0);
        rec.gait = torus_gait_label(rec.theta, sys.eta, opt.gait_tol);
        Vec2 f = sys.field(rec.theta);
        rec.residual = std::max(std::fabs(f[0]), std::fabs(f[1]));
        out.push_back(rec);
    }
    std::sort(out.begin(), out.end(), [](const FixedPointRecord& a, const FixedPointRecord& b) {
        return a.theta[0] != b.theta[0] ? a.theta[0] < b.theta[0] : a.theta[1] < b.theta[1];
    });
    return out;
}

inline int index_sum(const std::vector<FixedPointRecord>& fps) {
    int s = 0;
    for (const auto& r : fps) s += r.index;
    return s;
}

struct ClassCounts {
    int sinks = 0, sources = 0, saddles = 0, nonhyperbolic = 0;
    int total() const { return sinks + sources + saddles + nonhyperbolic; }
};

inline ClassCounts count_classes(const std::vector<FixedPointRecord>& fps) {
    ClassCounts c;
    for (const auto& r : fps) {
        switch (r.cls) {
            case FpClass::Sink: ++c.sinks; break;
            case FpClass::Source: ++c.sources; break;
            case FpClass::Saddle: ++c.saddles; break;
            default: ++c.nonhyperbolic;
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// Closed-form eigenvalues at the six special points of the reduced
// (balanced, equal-contralateral) system.

enum class SpecialPoint {
    TransitionForward,   // (2/3-eta, 1/3+eta)
    DiagonalLower,       // (1/3+eta, 1/3+eta)
    TransitionBackward,  // (1/3+eta, 2/3-eta)
    DiagonalUpper,       // (2/3-eta, 2/3-eta)
    Center,              // (1/2, 1/2)
    Origin,              // (0, 0)
};

inline Vec2 special_point_location(SpecialPoint sp, double eta) {
    double a = 2.0 / 3.0 - eta, b = 1.0 / 3.0 + eta;
    switch (sp) {
        case SpecialPoint::TransitionForward: return {a, b};
        case SpecialPoint::DiagonalLower: return {b, b};
        case SpecialPoint::TransitionBackward: return {b, a};
        case SpecialPoint::DiagonalUpper: return {a, a};
        case SpecialPoint::Center: return {0.5, 0.5};
        default: return {0.0, 0.0};
    }
}

// p = H'(1/3+eta), q = H'(2/3-eta), r_half = H'(1/2), r_zero = H'(0).
template <class H>
inline Eigs special_point_eigs(SpecialPoint sp, const H& h, double eta, double alpha) {
    double p = h.deriv(1.0 / 3.0 + eta), q = h.deriv(2.0 / 3.0 - eta);
    switch (sp) {
        case SpecialPoint::TransitionForward:
            return {{-q - p, 0}, {-(1 - alpha) * p - alpha * q, 0}};
        case SpecialPoint::DiagonalLower:
            return {{-q - p, 0}, {-q, 0}};
        case SpecialPoint::TransitionBackward:
            return {{-q - p, 0}, {-(1 - alpha) * q - alpha * p, 0}};
        case SpecialPoint::DiagonalUpper:
            return {{-q - p, 0}, {-p, 0}};
        case SpecialPoint::Center: {
            double r = h.deriv(0.5);
            return {{-r, 0}, {-2 * r, 0}};
        }
        default: {
            double r = h.deriv(0.0);
            return {{-r, 0}, {-2 * r, 0}};
        }
    }
}

// Numerical Jacobian by central differences of the field.
template <class H>
inline std::array<double, 4> numerical_jacobian(const TorusSystem<H>& sys, const Vec2& th,
                                                double step = 1e-6) {
    std::array<double, 4> J{};
    for (int k = 0; k < 2; ++k) {
        Vec2 lo = th, hi = th;
        lo[k] = wrap01(lo[k] - step);
        hi[k] = wrap01(hi[k] + step);
        Vec2 flo = sys.field(lo), fhi = sys.field(hi);
        J[k] = (fhi[0] - flo[0]) / (2 * step);
        J[2 + k] = (fhi[1] - flo[1]) / (2 * step);
    }
    return J;
}

// ---------------------------------------------------------------------------
// Stability bounds on alpha.

struct AlphaBounds {
    double alpha_min = 0, alpha_max = 0;
    bool min_in_range = false, max_in_range = false;
};

template <class H>
inline AlphaBounds alpha_bounds(const H& h, double eta) {
    double p = h.deriv(1.0 / 3.0 + eta), q = h.deriv(2.0 / 3.0 - eta);
    if (p == q)
        throw DegenerateDenominatorError("alpha bounds undefined: H' equal at the two legs");
    AlphaBounds b;
    b.alpha_max = p / (p - q);
    b.alpha_min = q / (q - p);
    b.max_in_range = b.alpha_max > 0 && b.alpha_max < 1;
    b.min_in_range = b.alpha_min > 0 && b.alpha_min < 1;
    return b;
}

// ---------------------------------------------------------------------------
// Nullclines (marching squares on the periodic grid) and flow.

struct Segment {
    Vec2 a, b;
};

template <class H>
inline std::array<std::vector<Segment>, 2> nullclines(const TorusSystem<H>& sys,
                                                      int resolution = 256) {
    int n = std::max(resolution, 16);
    std::vector<double> f1((n + 1) * (n + 1)), f2((n + 1) * (n + 1));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            Vec2 f = sys.field({static_cast<double>(i) / n, static_cast<double>(j) / n});
            f1[i * (n + 1) + j] = f[0];
            f2[i * (n + 1) + j] = f[1];
        }
    auto march = [&](const std::vector<double>& g) {
        std::vector<Segment> segs;
        auto lerp = [](double x0, double x1, double v0, double v1) {
            return x0 + (x1 - x0) * (v0 / (v0 - v1));
        };
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double x0 = static_cast<double>(i) / n, x1 = static_cast<double>(i + 1) / n;
                double y0 = static_cast<double>(j) / n, y1 = static_cast<double>(j + 1) / n;
                double v00 = g[i * (n + 1) + j], v10 = g[(i + 1) * (n + 1) + j];
                double v01 = g[i * (n + 1) + j + 1], v11 = g[(i + 1) * (n + 1) + j + 1];
                int code = (v00 > 0) | ((v10 > 0) << 1) | ((v11 > 0) << 2) | ((v01 > 0) << 3);
                if (code == 0 || code == 15) continue;
                Vec2 bottom{lerp(x0, x1, v00, v10), y0};
                Vec2 top{lerp(x0, x1, v01, v11), y1};
                Vec2 left{x0, lerp(y0, y1, v00, v01)};
                Vec2 right{x1, lerp(y0, y1, v10, v11)};
                switch (code) {
                    case 1: case 14: segs.push_back({bottom, left}); break;
                    case 2: case 13: segs.push_back({bottom, right}); break;
                    case 3: case 12: segs.push_back({left, right}); break;
                    case 4: case 11: segs.push_back({top, right}); break;
                    case 6: case 9: segs.push_back({bottom, top}); break;
                    case 7: case 8: segs.push_back({left, top}); break;
                    case 5: case 10: {
                        double vc = 0.25 * (v00 + v01 + v10 + v11);
                        bool same = (vc > 0) == (code == 5 ? v00 > 0 : v10 > 0);
                        if (code == 5) {
                            if (same) {
                                segs.push_back({left, top});
                                segs.push_back({bottom, right});
                            } else {
                                segs.push_back({bottom, left});
                                segs.push_back({top, right});
                            }
                        } else {
                            if (same) {
                                segs.push_back({bottom, left});
                                segs.push_back({top, right});
                            } else {
                                segs.push_back({left, top});
                                segs.push_back({bottom, right});
                            }
                        }
                        break;
                    }
                }
            }
        }
        return segs;
    };
    return {march(f1), march(f2)};
}

struct TorusTrajectory {
    std::vector<Vec2> points;  // wrapped
    Vec2 end{};
    bool converged = false;
    std::optional<Vec2> nearest_fixed_point;
};

template <class H>
inline TorusTrajectory flow_trajectory(const TorusSystem<H>& sys, const Vec2& th0,
                                       double span, double dt = 0.001,
                                       std::size_t max_points = 4000) {
    if (span <= 0) throw Error("flow_trajectory: span must be positive");
    long n = static_cast<long>(span / dt);
    std::size_t stride = std::max<std::size_t>(1, static_cast<std::size_t>(n) / max_points);
    TorusTrajectory tr;
    Vec2 th = {wrap01(th0[0]), wrap01(th0[1])};
    auto f = [&sys](const Vec2& x) { return sys.field(x); };
    tr.points.push_back(th);
    for (long i = 0; i < n; ++i) {
        rk4_step<2>(f, th, dt);
        th = {wrap01(th[0]), wrap01(th[1])};
        if (!all_finite(th)) throw NonFiniteError("torus flow diverged");
        if (static_cast<std::size_t>(i + 1) % stride == 0) tr.points.push_back(th);
    }
    tr.end = th;
    Vec2 fend = sys.field(th);
    tr.converged = std::max(std::fabs(fend[0]), std::fabs(fend[1])) < 1e-6;
    return tr;
}

// ---------------------------------------------------------------------------
// Six-oscillator validation layer. Phases are cycle fractions; rates are in
// cycles/second (H units), so spans are in seconds.

using SixPhases = Vec<6>;

template <class H>
struct SixOscillatorField {
    const H* h;
    CouplingStrengths c;
    double omega_hz;  // uncoupled rate, cycles/s

    SixPhases operator()(const SixPhases& x) const {
        const auto& hh = *h;
        auto Hd = [&](int j, int i) { return hh.value(x[j] - x[i]); };
        SixPhases d;
        d[0] = omega_hz + c[0] * Hd(3, 0) + c[4] * Hd(1, 0);
        d[1] = omega_hz + c[1] * Hd(4, 1) + c[3] * Hd(0, 1) + c[6] * Hd(2, 1);
        d[2] = omega_hz + c[2] * Hd(5, 2) + c[5] * Hd(1, 2);
        d[3] = omega_hz + c[0] * Hd(0, 3) + c[4] * Hd(4, 3);
        d[4] = omega_hz + c[1] * Hd(1, 4) + c[3] * Hd(3, 4) + c[6] * Hd(5, 4);
        d[5] = omega_hz + c[2] * Hd(2, 5) + c[5] * Hd(4, 5);
        return d;
    }
};

struct SixTrace {
    std::vector<double> t;
    std::vector<SixPhases> x;  // unwrapped
};

template <class H>
inline SixTrace six_oscillator_simulate(const H& h, const CouplingStrengths& c,
                                        double omega_hz, const SixPhases& x0, double span_s,
                                        double dt_s = 1e-4, std::size_t max_points = 2000) {
    SixOscillatorField<H> f{&h, c, omega_hz};
    long n = static_cast<long>(span_s / dt_s);
    std::size_t stride = std::max<std::size_t>(1, static_cast<std::size_t>(n) / max_points);
    SixTrace tr;
    SixPhases x = x0;
    tr.t.push_back(0);
    tr.x.push_back(x);
    for (long i = 0; i < n; ++i) {
        rk4_step<6>(f, x, dt_s);
        if (!all_finite(x)) throw NonFiniteError("six-oscillator flow diverged");
        if (static_cast<std::size_t>(i + 1) % stride == 0) {
            tr.t.push_back((i + 1) * dt_s);
            tr.x.push_back(x);
        }
    }
    if (tr.t.back() != n * dt_s) {
        tr.t.push_back(n * dt_s);
        tr.x.push_back(x);
    }
    return tr;
}

// Coupled stepping rate of the transition-gait solutions under balance:
// omega_hat = omega + (c1+c5) H(2/3 - eta), in the units of omega.
template <class H>
inline double coupled_frequency(const H& h, const CouplingStrengths& c, double eta,
                                double omega_hz) {
    return omega_hz + (c[0] + c[4]) * h.value(2.0 / 3.0 - eta);
}

}  // namespace gaitlab
