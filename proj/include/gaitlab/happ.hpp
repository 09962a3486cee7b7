#pragma once

// Explicit order-2 Fourier coupling function whose coefficients are
// quadratic polynomials in the speed parameter delta. Fitted over
// delta in [0.008, 0.024]; evaluation extrapolates smoothly outside.

#include <algorithm>
#include <cmath>

#include "gaitlab/common.hpp"
#include "gaitlab/phase.hpp"

namespace gaitlab {

struct HappCoefficients {
    double a0, a1, b1, a2, b2;
};

inline HappCoefficients happ_coefficients(double delta) {
    double d2 = delta * delta;
    return {
        -80.8384 * d2 + 2.6862 * delta - 0.0986,
        -137.9839 * d2 + 7.5308 * delta - 0.1433,
        77.9417 * d2 - 3.9694 * delta - 0.0720,
        -184.2374 * d2 + 8.9996 * delta - 0.0420,
        68.0350 * d2 + 0.6692 * delta - 0.1077,
    };
}

inline constexpr double kHappFitLo = 0.008;
inline constexpr double kHappFitHi = 0.024;

inline double happ_eval(double delta, double theta) {
    HappCoefficients c = happ_coefficients(delta);
    return c.a0 + c.a1 * std::cos(2 * M_PI * theta) + c.b1 * std::sin(2 * M_PI * theta) +
           c.a2 * std::cos(4 * M_PI * theta) + c.b2 * std::sin(4 * M_PI * theta);
}

inline double happ_deriv(double delta, double theta) {
    HappCoefficients c = happ_coefficients(delta);
    return 2 * M_PI *
           (-c.a1 * std::sin(2 * M_PI * theta) + c.b1 * std::cos(2 * M_PI * theta) -
            2 * c.a2 * std::sin(4 * M_PI * theta) + 2 * c.b2 * std::cos(4 * M_PI * theta));
}

// Closed-form transition offset: eta = arccos(-b1/(2 b2))/(2 pi) - 1/3.
inline double happ_eta(double delta) {
    HappCoefficients c = happ_coefficients(delta);
    if (c.b2 == 0) throw DomainError("happ_eta: b2 vanishes");
    double r = -c.b1 / (2.0 * c.b2);
    if (r < -1.0 || r > 1.0)
        throw DomainError("happ_eta: arccos argument " + std::to_string(r) +
                          " outside [-1,1] at delta=" + std::to_string(delta));
    return std::acos(r) / (2.0 * M_PI) - 1.0 / 3.0;
}

// Speed at which the transition branch reaches the tripod point:
// -b1(delta*)/(2 b2(delta*)) = -1, found by bisection on the fit window.
inline double happ_delta_star() {
    auto g = [](double d) {
        HappCoefficients c = happ_coefficients(d);
        return -c.b1 / (2.0 * c.b2) + 1.0;
    };
    double lo = kHappFitLo, hi = kHappFitHi;
    double glo = g(lo);
    if ((glo < 0) == (g(hi) < 0))
        throw DomainError("happ_delta_star: no sign change on the fit window");
    for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
        double mid = 0.5 * (lo + hi);
        if ((g(mid) < 0) == (glo < 0)) {
            lo = mid;
            glo = g(mid);
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// View with the value/deriv interface shared by CouplingFunction, so the
// torus machinery can consume either.
struct HappView {
    double delta = 0.01;
    double value(double u) const { return happ_eval(delta, u); }
    double deriv(double u) const { return happ_deriv(delta, u); }
};

// eta(delta) clamped onto [0, 1/6]: the constant branch past delta*, zero
// below the onset. Matches the sampled-root solver's convention.
inline double happ_eta_clamped(double delta) {
    HappCoefficients c = happ_coefficients(delta);
    double r = (c.b2 != 0) ? -c.b1 / (2.0 * c.b2) : 2.0;
    if (r <= -1.0) return 1.0 / 6.0;
    if (r >= 1.0) return 0.0;
    double eta = std::acos(r) / (2.0 * M_PI) - 1.0 / 3.0;
    return std::min(1.0 / 6.0, std::max(0.0, eta));
}

inline CouplingFunction happ_sampled(double delta, std::size_t n = 1024) {
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i)
        ys[i] = happ_eval(delta, static_cast<double>(i) / static_cast<double>(n));
    return make_coupling_function(std::move(ys), delta);
}

}  // namespace gaitlab
