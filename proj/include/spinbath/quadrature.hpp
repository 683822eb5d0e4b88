#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "spinbath/errors.hpp"

// Adaptive Gauss-Kronrod (7-15) quadrature with interval bisection, plus a
// rational substitution for semi-infinite integrals.

namespace spinbath::quad {

namespace detail {

// G7-K15 nodes/weights on [-1, 1], positive half (nodes are symmetric).
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.000000000000000000000000000000000e+00,
    2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01,
    5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01,
    8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01,
    9.914553711208126392068546975263285e-01};

inline constexpr std::array<double, 8> kronrod_weights = {
    2.094821410847278280129991748917143e-01,
    2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01,
    1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01,
    1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02,
    2.293532201052922496373200805896959e-02};

// Gauss-7 weights matching kronrod_nodes indices 1, 3, 5, 7 (0 is the center).
inline constexpr std::array<double, 4> gauss_weights = {
    4.179591836734693877551020408163265e-01,
    3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01,
    1.294849661688696932706114326790820e-01};

struct Interval {
    double a, b, value, err;
    bool operator<(const Interval& o) const { return err < o.err; }
};

template <typename F>
Interval gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = kronrod_weights[0] * fc;
    double gauss = gauss_weights[0] * fc;
    for (int i = 1; i < 8; ++i) {
        const double x = h * kronrod_nodes[i];
        const double fsum = f(c - x) + f(c + x);
        kron += kronrod_weights[i] * fsum;
        if (i % 2 == 0) gauss += gauss_weights[i / 2] * fsum;
    }
    kron *= h;
    gauss *= h;
    const double diff = std::abs(kron - gauss);
    // QUADPACK-style sharpened error estimate.
    const double err = diff > 0.0 ? diff * std::min(1.0, std::pow(200.0 * diff / std::max(std::abs(kron), 1e-300), 1.5))
                                  : 0.0;
    return {a, b, kron, std::max(err, diff * 1e-6)};
}

} // namespace detail

struct Result {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

/// Adaptive integration of f over [a, b]. Converges when the summed error
/// estimate drops below max(abs_tol, rel_tol * |integral|).
template <typename F>
Result integrate(const F& f, double a, double b, double abs_tol = 1e-12, double rel_tol = 1e-10,
                 int max_intervals = 20000) {
    if (!(b > a)) return {0.0, 0.0, 0};
    std::priority_queue<detail::Interval> heap;
    heap.push(detail::gk15(f, a, b));
    double total = heap.top().value;
    double total_err = heap.top().err;
    int n = 1;
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total)) && n < max_intervals) {
        detail::Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // interval at machine resolution
            heap.push({worst.a, worst.b, worst.value, 0.0});
            total_err -= worst.err;
            continue;
        }
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        n += 2;
    }
    if (total_err > std::max(abs_tol * 100.0, rel_tol * 100.0 * std::abs(total)) && n >= max_intervals)
        throw numerical_error("adaptive quadrature did not converge: estimate " + std::to_string(total) +
                              ", error " + std::to_string(total_err) + ", intervals " + std::to_string(n));
    return {total, total_err, n};
}

/// Integrate f over a list of contiguous breakpoints, adaptively per panel.
template <typename F>
Result integrate_panels(const F& f, const std::vector<double>& breakpoints, double abs_tol = 1e-12,
                        double rel_tol = 1e-10, int max_intervals = 20000) {
    Result out;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        auto r = integrate(f, breakpoints[i], breakpoints[i + 1], abs_tol, rel_tol, max_intervals);
        out.value += r.value;
        out.error += r.error;
        out.intervals += r.intervals;
    }
    return out;
}

/// Integrate f over [0, inf) via the substitution x = scale * t / (1 - t),
/// t in [0, 1). `scale` should be the characteristic width of the integrand.
template <typename F>
Result integrate_zero_to_inf(const F& f, double scale, double abs_tol = 1e-12, double rel_tol = 1e-9,
                             int max_intervals = 40000) {
    auto g = [&](double t) {
        const double om = 1.0 - t;
        const double x = scale * t / om;
        return f(x) * scale / (om * om);
    };
    // Stop just shy of t = 1; the remainder is below double resolution for
    // integrands decaying at least as 1/x^2.
    return integrate(g, 0.0, 1.0 - 1e-14, abs_tol, rel_tol, max_intervals);
}

} // namespace spinbath::quad
