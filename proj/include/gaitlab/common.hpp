#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gaitlab {

inline constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonFiniteError : Error { using Error::Error; };
struct NoCycleError : Error { using Error::Error; };
struct NoBurstError : Error { using Error::Error; };
struct NoConvergenceError : Error { using Error::Error; };
struct AmbiguousRootError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct DegenerateDenominatorError : Error { using Error::Error; };
struct UnknownPresetError : Error { using Error::Error; };
struct StepTooLargeError : Error { using Error::Error; };

struct ParseError : Error {
    int line = 0;
    ParseError(const std::string& msg, int line_no)
        : Error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
};

// ---------------------------------------------------------------------------
// Small vector helpers

template <std::size_t N>
using Vec = std::array<double, N>;

using Vec2 = Vec<2>;
using Vec4 = Vec<4>;

template <std::size_t N>
inline bool all_finite(const Vec<N>& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

template <std::size_t N>
inline double norm2(const Vec<N>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

template <std::size_t N>
inline double dist2(const Vec<N>& a, const Vec<N>& b) {
    double s = 0;
    for (std::size_t i = 0; i < N; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

// Fraction of a cycle, wrapped into [0, 1).
inline double wrap01(double u) {
    double r = u - std::floor(u);
    return (r >= 1.0) ? 0.0 : r;
}

// Signed circular distance in (-1/2, 1/2].
inline double circ_diff(double a, double b) {
    double d = wrap01(a - b);
    return (d > 0.5) ? d - 1.0 : d;
}

inline double circ_dist(double a, double b) { return std::fabs(circ_diff(a, b)); }

// Distance on the 2-torus (sup norm over wrapped coordinates).
inline double torus_dist(const Vec2& a, const Vec2& b) {
    return std::max(circ_dist(a[0], b[0]), circ_dist(a[1], b[1]));
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> xs(n);
    if (n == 1) {
        xs[0] = lo;
        return xs;
    }
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return xs;
}

// Circular mean of phase fractions.
inline double circ_mean(const std::vector<double>& ph) {
    double cs = 0, sn = 0;
    for (double p : ph) {
        cs += std::cos(2 * M_PI * p);
        sn += std::sin(2 * M_PI * p);
    }
    return wrap01(std::atan2(sn, cs) / (2 * M_PI));
}

// ---------------------------------------------------------------------------
// Parallel map over an index range. Results must be written by index so the
// output is independent of scheduling.

inline unsigned default_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n ? n : 2;
}

template <class F>
void parallel_for(std::size_t n, F&& body, unsigned threads = 0) {
    if (threads == 0) threads = default_threads();
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex err_mtx;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mtx);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    unsigned k = std::min<std::size_t>(threads, n);
    pool.reserve(k);
    for (unsigned t = 0; t < k; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace gaitlab
