#pragma once

// Gait taxonomy shared by the network raster classifier and the torus
// fixed-point labeller. Legs are indexed R1,R2,R3,L1,L2,L3 (0..5); phases
// are cycle fractions relative to R2.

#include <array>
#include <cmath>
#include <string>

#include "gaitlab/common.hpp"

namespace gaitlab {

enum class GaitClass {
    TetrapodForwardRight,
    TetrapodForwardLeft,
    TetrapodBackwardRight,
    TetrapodBackwardLeft,
    Tripod,
    TransitionForward,
    TransitionBackward,
    TetrapodForward,   // torus label: right/left indistinguishable
    TetrapodBackward,  // torus label
    Unclassified,
};

struct GaitLabel {
    GaitClass cls = GaitClass::Unclassified;
    double eta_frac = 0;  // in [0, 1/6]; 0 = tetrapod, 1/6 = tripod
    double residual = 0;  // sup circular distance of the best fit

    bool is_tetrapod() const {
        return cls == GaitClass::TetrapodForwardRight ||
               cls == GaitClass::TetrapodForwardLeft ||
               cls == GaitClass::TetrapodBackwardRight ||
               cls == GaitClass::TetrapodBackwardLeft ||
               cls == GaitClass::TetrapodForward || cls == GaitClass::TetrapodBackward;
    }
    bool is_backward() const {
        return cls == GaitClass::TetrapodBackwardRight ||
               cls == GaitClass::TetrapodBackwardLeft ||
               cls == GaitClass::TetrapodBackward ||
               cls == GaitClass::TransitionBackward;
    }
};

inline std::string to_string(GaitClass c) {
    switch (c) {
        case GaitClass::TetrapodForwardRight: return "tetrapod-forward-right";
        case GaitClass::TetrapodForwardLeft: return "tetrapod-forward-left";
        case GaitClass::TetrapodBackwardRight: return "tetrapod-backward-right";
        case GaitClass::TetrapodBackwardLeft: return "tetrapod-backward-left";
        case GaitClass::Tripod: return "tripod";
        case GaitClass::TransitionForward: return "transition-forward";
        case GaitClass::TransitionBackward: return "transition-backward";
        case GaitClass::TetrapodForward: return "tetrapod-forward";
        case GaitClass::TetrapodBackward: return "tetrapod-backward";
        default: return "unclassified";
    }
}

// Transition-gait families as leg-phase patterns. eta in [0, 1/6];
// eta = 0 gives the pure tetrapods, eta = 1/6 the tripod.
enum class GaitFamily { FR, FL, BR, BL };

inline std::array<double, 6> gait_pattern(GaitFamily fam, double eta) {
    double a = 2.0 / 3.0 - eta, b = 1.0 / 3.0 + eta;
    switch (fam) {
        case GaitFamily::FR: return {a, 0, b, 1.0 / 3.0 - 2 * eta, a, 0};
        case GaitFamily::FL: return {a, 0, b, 0, b, 2.0 / 3.0 + 2 * eta};
        case GaitFamily::BR: return {b, 0, a, 2.0 / 3.0 + 2 * eta, b, 0};
        default: return {b, 0, a, 0, a, 1.0 / 3.0 - 2 * eta};
    }
}

inline GaitClass tetrapod_class(GaitFamily fam) {
    switch (fam) {
        case GaitFamily::FR: return GaitClass::TetrapodForwardRight;
        case GaitFamily::FL: return GaitClass::TetrapodForwardLeft;
        case GaitFamily::BR: return GaitClass::TetrapodBackwardRight;
        default: return GaitClass::TetrapodBackwardLeft;
    }
}

inline GaitClass transition_class(GaitFamily fam) {
    return (fam == GaitFamily::FR || fam == GaitFamily::FL)
               ? GaitClass::TransitionForward
               : GaitClass::TransitionBackward;
}

inline double pattern_cost(const std::array<double, 6>& phases, GaitFamily fam,
                           double eta) {
    auto q = gait_pattern(fam, eta);
    double worst = 0;
    for (int i = 0; i < 6; ++i) worst = std::max(worst, circ_dist(phases[i], q[i]));
    return worst;
}

// Classify a vector of per-leg phases (fractions, R2-relative) against the
// five ideal patterns first, then the one-parameter transition families.
inline GaitLabel classify_phases(const std::array<double, 6>& phases,
                                 double tol_frac = 0.05) {
    constexpr GaitFamily fams[4] = {GaitFamily::FR, GaitFamily::FL, GaitFamily::BR,
                                    GaitFamily::BL};
    // Ideal patterns.
    GaitLabel best;
    best.residual = 1e300;
    for (GaitFamily fam : fams) {
        double c = pattern_cost(phases, fam, 0.0);
        if (c <= tol_frac && c < best.residual)
            best = {tetrapod_class(fam), 0.0, c};
    }
    double ctri = pattern_cost(phases, GaitFamily::FR, 1.0 / 6.0);
    if (ctri <= tol_frac && ctri < best.residual) best = {GaitClass::Tripod, 1.0 / 6.0, ctri};
    if (best.residual <= tol_frac) return best;

    // Transition families: least-squares eta on a fine grid, acceptance by
    // sup distance.
    best = GaitLabel{};
    best.residual = 1e300;
    const int n_eta = 600;
    for (GaitFamily fam : fams) {
        double best_eta = 0, best_sq = 1e300;
        for (int k = 0; k <= n_eta; ++k) {
            double eta = (1.0 / 6.0) * k / n_eta;
            auto q = gait_pattern(fam, eta);
            double sq = 0;
            for (int i = 0; i < 6; ++i) {
                double d = circ_diff(phases[i], q[i]);
                sq += d * d;
            }
            if (sq < best_sq) {
                best_sq = sq;
                best_eta = eta;
            }
        }
        double c = pattern_cost(phases, fam, best_eta);
        if (c < best.residual) {
            best.cls = transition_class(fam);
            best.eta_frac = best_eta;
            best.residual = c;
        }
    }
    if (best.residual > tol_frac) return {GaitClass::Unclassified, 0, best.residual};
    if (best.eta_frac >= 1.0 / 6.0 - 1e-9) {
        best.cls = GaitClass::Tripod;
        best.eta_frac = 1.0 / 6.0;
    }
    return best;
}

}  // namespace gaitlab
