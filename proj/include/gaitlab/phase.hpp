#pragma once

// Phase reduction machinery: adjoint iPRC on the limit cycle, the coupling
// function H by averaging, its order-2 Fourier fit, and the eta equation
// H(2/3 - eta) = H(1/3 + eta).
//
// Conventions: the iPRC is normalized so Z . Gamma' = omega (rad/ms)
// pointwise. Coupling functions are sampled on the normalized phase domain
// [0,1) and carry units of cycles per second, so that phase-difference
// dynamics integrate in seconds.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "gaitlab/common.hpp"
#include "gaitlab/integrate.hpp"
#include "gaitlab/neuron.hpp"

namespace gaitlab {

// ---------------------------------------------------------------------------
// Periodic cubic spline on a uniform grid over [0,1).

class PeriodicSpline {
  public:
    PeriodicSpline() = default;

    explicit PeriodicSpline(std::vector<double> y) : y_(std::move(y)) {
        std::size_t n = y_.size();
        if (n < 3) throw Error("PeriodicSpline: need at least 3 samples");
        h_ = 1.0 / static_cast<double>(n);
        m_ = solve_cyclic(y_, h_);
    }

    double value(double u) const {
        std::size_t n = y_.size();
        double s = wrap01(u) * static_cast<double>(n);
        std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(s), n - 1);
        double t = (s - static_cast<double>(i)) * h_;
        std::size_t j = (i + 1) % n;
        double a = (h_ - t), b = t;
        return (m_[i] * a * a * a + m_[j] * b * b * b) / (6.0 * h_) +
               (y_[i] / h_ - m_[i] * h_ / 6.0) * a + (y_[j] / h_ - m_[j] * h_ / 6.0) * b;
    }

    double deriv(double u) const {
        std::size_t n = y_.size();
        double s = wrap01(u) * static_cast<double>(n);
        std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(s), n - 1);
        double t = (s - static_cast<double>(i)) * h_;
        std::size_t j = (i + 1) % n;
        double a = (h_ - t), b = t;
        return (-m_[i] * a * a + m_[j] * b * b) / (2.0 * h_) -
               (y_[i] / h_ - m_[i] * h_ / 6.0) + (y_[j] / h_ - m_[j] * h_ / 6.0);
    }

    const std::vector<double>& samples() const { return y_; }

  private:
    // Solve the cyclic tridiagonal system for second derivatives.
    static std::vector<double> solve_cyclic(const std::vector<double>& y, double h) {
        std::size_t n = y.size();
        std::vector<double> d(n);
        for (std::size_t i = 0; i < n; ++i) {
            double ym = y[(i + n - 1) % n], yp = y[(i + 1) % n];
            d[i] = 6.0 * (ym - 2.0 * y[i] + yp) / (h * h);
        }
        // System: m[i-1] + 4 m[i] + m[i+1] = d[i] with cyclic corners.
        // Sherman-Morrison removal of the corner entries.
        const double alpha = 1.0, beta = 1.0;  // corner entries A[0][n-1], A[n-1][0]
        const double gamma = -4.0;
        std::vector<double> diag(n, 4.0);
        diag[0] -= gamma;
        diag[n - 1] -= alpha * beta / gamma;

        auto thomas = [&](const std::vector<double>& rhs) {
            std::vector<double> cp(n), dp(n), x(n);
            cp[0] = 1.0 / diag[0];
            dp[0] = rhs[0] / diag[0];
            for (std::size_t i = 1; i < n; ++i) {
                double m = diag[i] - cp[i - 1];
                cp[i] = 1.0 / m;
                dp[i] = (rhs[i] - dp[i - 1]) / m;
            }
            x[n - 1] = dp[n - 1];
            for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
            return x;
        };

        std::vector<double> u(n, 0.0);
        u[0] = gamma;
        u[n - 1] = alpha;
        std::vector<double> x1 = thomas(d);
        std::vector<double> x2 = thomas(u);
        double vx1 = x1[0] + beta / gamma * x1[n - 1];
        double vx2 = 1.0 + x2[0] + beta / gamma * x2[n - 1];
        std::vector<double> m(n);
        for (std::size_t i = 0; i < n; ++i) m[i] = x1[i] - vx1 / vx2 * x2[i];
        return m;
    }

    std::vector<double> y_;
    std::vector<double> m_;
    double h_ = 0;
};

// ---------------------------------------------------------------------------
// Infinitesimal phase response curve via the adjoint equation.

struct PhaseResponseCurve {
    std::vector<Vec4> Z;        // at the limit cycle's uniform sample grid
    double omega = 0;           // rad/ms
    double period_ms = 0;
    double norm_residual = 0;   // stddev(Z.f)/mean(Z.f) after rescaling
    int periods_used = 0;
};

struct AdjointOptions {
    int max_periods = 20;
    double tol = 1e-6;  // sup-norm relative agreement between successive periods
};

namespace detail {

inline void matT_vec4(const std::array<double, 16>& J, const Vec4& z, Vec4& out) {
    for (int i = 0; i < 4; ++i) {
        double s = 0;
        for (int k = 0; k < 4; ++k) s += J[4 * k + i] * z[k];
        out[i] = -s;
    }
}

}  // namespace detail

// Integrate dZ/dt = -J(Gamma(t))^T Z backward over the stored fine trace
// until successive periods agree, then rescale so Z . Gamma' = omega.
inline PhaseResponseCurve compute_iprc(const LimitCycle& lc, const NeuronParams& p,
                                       const AdjointOptions& opt = {}) {
    const std::size_t M = lc.fine_x.size();
    if (M < 4) throw Error("compute_iprc: limit cycle carries no fine trace");

    // Midpoint states between consecutive fine nodes (cubic Hermite).
    std::vector<Vec4> mid(M - 1);
    for (std::size_t i = 0; i + 1 < M; ++i) {
        double h = lc.fine_t[i + 1] - lc.fine_t[i];
        mid[i] = hermite<4>(lc.fine_x[i], lc.fine_f[i], lc.fine_x[i + 1], lc.fine_f[i + 1],
                            h, 0.5);
    }
    std::vector<std::array<double, 16>> Jnode(M), Jmid(M - 1);
    for (std::size_t i = 0; i < M; ++i) Jnode[i] = neuron_jacobian(lc.fine_x[i], p);
    for (std::size_t i = 0; i + 1 < M; ++i) Jmid[i] = neuron_jacobian(mid[i], p);

    auto backward_period = [&](Vec4 z, std::vector<Vec4>* store) {
        if (store) (*store)[M - 1] = z;
        for (std::size_t i = M - 1; i-- > 0;) {
            double h = -(lc.fine_t[i + 1] - lc.fine_t[i]);
            Vec4 k1, k2, k3, k4, y;
            detail::matT_vec4(Jnode[i + 1], z, k1);
            for (int k = 0; k < 4; ++k) y[k] = z[k] + 0.5 * h * k1[k];
            detail::matT_vec4(Jmid[i], y, k2);
            for (int k = 0; k < 4; ++k) y[k] = z[k] + 0.5 * h * k2[k];
            detail::matT_vec4(Jmid[i], y, k3);
            for (int k = 0; k < 4; ++k) y[k] = z[k] + h * k3[k];
            detail::matT_vec4(Jnode[i], y, k4);
            for (int k = 0; k < 4; ++k)
                z[k] += h / 6.0 * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]);
            if (store) (*store)[i] = z;
        }
        return z;
    };

    Vec4 z{1.0, 0.0, 0.0, 0.0};
    {
        double nrm = norm2<4>(z);
        for (auto& v : z) v /= nrm;
    }
    bool converged = false;
    int used = 0;
    for (int k = 0; k < opt.max_periods; ++k) {
        Vec4 z_end = backward_period(z, nullptr);
        ++used;
        double nrm = norm2<4>(z_end);
        if (nrm == 0 || !all_finite(z_end))
            throw NoConvergenceError("adjoint solution degenerated");
        for (auto& v : z_end) v /= nrm;  // neutral multiplier is 1; keep scale tame
        double rel = 0;
        for (int i = 0; i < 4; ++i) rel = std::max(rel, std::fabs(z_end[i] - z[i]));
        z = z_end;
        if (k > 0 && rel < opt.tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NoConvergenceError("adjoint iteration did not reach periodic agreement in " +
                                 std::to_string(opt.max_periods) + " periods");

    std::vector<Vec4> ztrace(M);
    backward_period(z, &ztrace);

    // Resample Z onto the uniform grid by linear interpolation in the fine
    // trace (the trace step equals the integration step).
    const std::size_t N = lc.samples.size();
    PhaseResponseCurve prc;
    prc.Z.resize(N);
    prc.omega = lc.omega;
    prc.period_ms = lc.period_ms;
    prc.periods_used = used;
    std::size_t j = 0;
    for (std::size_t i = 0; i < N; ++i) {
        double ts = lc.period_ms * static_cast<double>(i) / static_cast<double>(N);
        while (j + 1 < M && lc.fine_t[j + 1] < ts) ++j;
        double h = lc.fine_t[j + 1] - lc.fine_t[j];
        double s = h > 0 ? (ts - lc.fine_t[j]) / h : 0.0;
        for (int k = 0; k < 4; ++k)
            prc.Z[i][k] = (1.0 - s) * ztrace[j][k] + s * ztrace[j + 1][k];
    }

    // Rescale so that Z . Gamma' = omega.
    double mean_q = 0;
    for (std::size_t i = 0; i < N; ++i) {
        double q = 0;
        for (int k = 0; k < 4; ++k) q += prc.Z[i][k] * lc.derivs[i][k];
        mean_q += q;
    }
    mean_q /= static_cast<double>(N);
    if (mean_q == 0) throw NoConvergenceError("adjoint solution orthogonal to the flow");
    double scale = prc.omega / mean_q;
    for (auto& zz : prc.Z)
        for (auto& v : zz) v *= scale;

    double var = 0;
    for (std::size_t i = 0; i < N; ++i) {
        double q = 0;
        for (int k = 0; k < 4; ++k) q += prc.Z[i][k] * lc.derivs[i][k];
        var += (q - prc.omega) * (q - prc.omega);
    }
    prc.norm_residual = std::sqrt(var / static_cast<double>(N)) / prc.omega;
    return prc;
}

// ---------------------------------------------------------------------------
// Coupling function

// Unit conversion: the averaged integral is in rad/ms; coupling functions are
// reported in cycles/second.
inline constexpr double kRadPerMsToCyclesPerSec = 1000.0 / (2.0 * M_PI);

struct CouplingFunction {
    std::vector<double> samples;  // H on the uniform grid over [0,1)
    double xi = 0;                // speed-parameter value it was computed at
    double period_ms = 0;
    double omega = 0;             // rad/ms of the underlying cycle
    PeriodicSpline spline;

    double value(double u) const { return spline.value(u); }
    double deriv(double u) const { return spline.deriv(u); }
    double max_abs() const {
        double m = 0;
        for (double v : samples) m = std::max(m, std::fabs(v));
        return m;
    }
};

inline CouplingFunction make_coupling_function(std::vector<double> samples, double xi = 0,
                                               double period_ms = 0, double omega = 0) {
    CouplingFunction H;
    H.samples = std::move(samples);
    H.xi = xi;
    H.period_ms = period_ms;
    H.omega = omega;
    H.spline = PeriodicSpline(H.samples);
    return H;
}

// H(theta) = -(g_syn/T) Int Z_v(t) (v(t) - E_s_post) s(t + theta) dt on the
// uniform grid (trapezoid = Riemann sum for periodic integrands), converted
// to cycles/second.
inline CouplingFunction coupling_function_hbn(const LimitCycle& lc,
                                              const PhaseResponseCurve& prc,
                                              const NeuronParams& p, double xi = 0) {
    const std::size_t N = lc.samples.size();
    if (prc.Z.size() != N) throw Error("coupling_function_hbn: grid mismatch");
    std::vector<double> g(N), s(N);
    for (std::size_t i = 0; i < N; ++i) {
        g[i] = prc.Z[i][0] * (lc.samples[i][0] - p.E_s_post);
        s[i] = lc.samples[i][3];
    }
    std::vector<double> H(N);
    double scale = -p.g_syn / static_cast<double>(N) * kRadPerMsToCyclesPerSec;
    for (std::size_t j = 0; j < N; ++j) {
        double acc = 0;
        for (std::size_t i = 0; i < N; ++i) acc += g[i] * s[(i + j) % N];
        H[j] = scale * acc;
    }
    return make_coupling_function(std::move(H), xi, lc.period_ms, lc.omega);
}

// ---------------------------------------------------------------------------
// The eta equation H(2/3 - eta) = H(1/3 + eta) on eta in [0, 1/6].

struct EtaOptions {
    double tol = 1e-6;
    int scan_points = 2048;
};

template <class H>
inline double solve_eta(const H& h, const EtaOptions& opt = {}) {
    auto g = [&](double eta) {
        return h.value(2.0 / 3.0 - eta) - h.value(1.0 / 3.0 + eta);
    };
    // Scan for sign changes away from the structural zero at eta = 1/6.
    const int n = opt.scan_points;
    const double hi = 1.0 / 6.0 - 2.0 / static_cast<double>(n);
    double prev = g(0.0), prev_eta = 0.0;
    std::vector<std::pair<double, double>> brackets;
    for (int i = 1; i <= n; ++i) {
        double eta = hi * static_cast<double>(i) / static_cast<double>(n);
        double cur = g(eta);
        if (prev == 0.0 || (prev < 0) != (cur < 0)) brackets.push_back({prev_eta, eta});
        prev = cur;
        prev_eta = eta;
    }
    if (brackets.empty()) return 1.0 / 6.0;  // only the constant solution
    if (brackets.size() > 1)
        throw AmbiguousRootError("multiple interior roots of the eta equation (" +
                                 std::to_string(brackets.size()) + ")");
    double lo = brackets[0].first, up = brackets[0].second;
    double glo = g(lo);
    for (int it = 0; it < 200 && (up - lo) > opt.tol; ++it) {
        double mid = 0.5 * (lo + up);
        double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((glo < 0) != (gm < 0))
            up = mid;
        else {
            lo = mid;
            glo = gm;
        }
    }
    return 0.5 * (lo + up);
}

// ---------------------------------------------------------------------------
// Order-2 Fourier fit

struct FourierCoefficients {
    double a0 = 0, a1 = 0, b1 = 0, a2 = 0, b2 = 0;
    double fit_residual = 0;  // max |series - samples|

    double value(double u) const {
        return a0 + a1 * std::cos(2 * M_PI * u) + b1 * std::sin(2 * M_PI * u) +
               a2 * std::cos(4 * M_PI * u) + b2 * std::sin(4 * M_PI * u);
    }
    double deriv(double u) const {
        return 2 * M_PI *
               (-a1 * std::sin(2 * M_PI * u) + b1 * std::cos(2 * M_PI * u) -
                2 * a2 * std::sin(4 * M_PI * u) + 2 * b2 * std::cos(4 * M_PI * u));
    }
};

inline FourierCoefficients fit_fourier(const CouplingFunction& H) {
    const std::size_t N = H.samples.size();
    if (N < 8) throw Error("fit_fourier: need at least 8 samples");
    FourierCoefficients f;
    for (std::size_t i = 0; i < N; ++i) {
        double u = static_cast<double>(i) / static_cast<double>(N);
        double y = H.samples[i];
        f.a0 += y;
        f.a1 += y * std::cos(2 * M_PI * u);
        f.b1 += y * std::sin(2 * M_PI * u);
        f.a2 += y * std::cos(4 * M_PI * u);
        f.b2 += y * std::sin(4 * M_PI * u);
    }
    f.a0 /= static_cast<double>(N);
    f.a1 *= 2.0 / static_cast<double>(N);
    f.b1 *= 2.0 / static_cast<double>(N);
    f.a2 *= 2.0 / static_cast<double>(N);
    f.b2 *= 2.0 / static_cast<double>(N);
    for (std::size_t i = 0; i < N; ++i) {
        double u = static_cast<double>(i) / static_cast<double>(N);
        f.fit_residual = std::max(f.fit_residual, std::fabs(f.value(u) - H.samples[i]));
    }
    return f;
}

// ---------------------------------------------------------------------------
// Conditions on G = H(theta) - H(-theta) that guarantee a unique transition
// branch on [1/3, 1/2] (checked numerically over a xi-family of H).

struct HConditionRow {
    double xi = 0;
    bool dG_dxi_negative = false;   // on theta in [1/3, 1/2)
    bool G_concave_down = false;    // on theta in (1/3, 1/2)
    double G_at_third = 0;
};

struct HConditionReport {
    std::vector<HConditionRow> rows;
    double xi_bar = 0;   // root of G(1/3; xi) = 0, if bracketed
    bool has_xi_bar = false;
};

template <class HAt>
inline HConditionReport check_h_conditions(const std::vector<double>& xis, HAt&& h_at) {
    HConditionReport rep;
    const int nth = 64;
    std::vector<double> Gprev;
    double xi_prev = 0;
    for (std::size_t k = 0; k < xis.size(); ++k) {
        auto h = h_at(xis[k]);
        HConditionRow row;
        row.xi = xis[k];
        auto G = [&](double th) { return h.value(th) - h.value(-th); };
        row.G_at_third = G(1.0 / 3.0);

        std::vector<double> Gcur(nth + 1);
        for (int i = 0; i <= nth; ++i) {
            double th = 1.0 / 3.0 + (1.0 / 2.0 - 1.0 / 3.0) * i / nth;
            Gcur[i] = G(th);
        }
        // Condition (2): dG/dxi < 0 between this node and the previous one.
        if (k > 0) {
            bool neg = true;
            for (int i = 0; i < nth; ++i)  // exclude theta = 1/2 where G = 0
                if (Gcur[i] - Gprev[i] >= 0) neg = false;
            row.dG_dxi_negative = neg;
            if (!rep.has_xi_bar && Gprev[0] >= 0 && Gcur[0] < 0) {
                double s = Gprev[0] / (Gprev[0] - Gcur[0]);
                rep.xi_bar = xi_prev + s * (xis[k] - xi_prev);
                rep.has_xi_bar = true;
            }
        }
        // Condition (3): concavity via second differences on the interior.
        bool conc = true;
        for (int i = 1; i < nth; ++i)
            if (Gcur[i - 1] - 2 * Gcur[i] + Gcur[i + 1] >= 0) conc = false;
        row.G_concave_down = conc;

        rep.rows.push_back(row);
        Gprev = Gcur;
        xi_prev = xis[k];
    }
    return rep;
}

}  // namespace gaitlab
