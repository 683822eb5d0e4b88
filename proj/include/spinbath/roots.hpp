#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "spinbath/errors.hpp"

namespace spinbath::roots {

/// Brent's method on a bracketing interval [a, b] with f(a)*f(b) <= 0.
template <typename F>
double brent(const F& f, double a, double b, double x_tol = 1e-14, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0)
        throw numerical_error("brent: interval does not bracket a root");
    if (std::abs(fa) < std::abs(fb)) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    double c = a, fc = fa, d = b - a, s = b;
    bool mflag = true;
    for (int i = 0; i < max_iter; ++i) {
        if (fa != fc && fb != fc) {
            // inverse quadratic interpolation
            s = a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) +
                c * fa * fb / ((fc - fa) * (fc - fb));
        } else {
            s = b - fb * (b - a) / (fb - fa);
        }
        const double lo = (3.0 * a + b) / 4.0;
        const bool out_of_range = !((s > std::min(lo, b)) && (s < std::max(lo, b)));
        const double step_prev = mflag ? std::abs(b - c) : std::abs(c - d);
        if (out_of_range || std::abs(s - b) >= 0.5 * step_prev || step_prev < x_tol) {
            s = 0.5 * (a + b);
            mflag = true;
        } else {
            mflag = false;
        }
        const double fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if (fa * fs < 0.0) {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if (std::abs(fa) < std::abs(fb)) {
            std::swap(a, b);
            std::swap(fa, fb);
        }
        if (fb == 0.0 || std::abs(b - a) < x_tol * std::max(1.0, std::abs(b)))
            return b;
    }
    return b;
}

/// Scan g over a log-spaced grid in [lo, hi] and return every bracketing pair
/// refined by Brent. Roots come back sorted ascending.
template <typename F>
std::vector<double> find_roots_log_grid(const F& g, double lo, double hi, int n_grid = 400) {
    std::vector<double> roots;
    const double llo = std::log(lo), lhi = std::log(hi);
    double x_prev = lo, g_prev = g(lo);
    for (int i = 1; i <= n_grid; ++i) {
        const double x = std::exp(llo + (lhi - llo) * i / n_grid);
        const double gx = g(x);
        if (g_prev == 0.0) {
            roots.push_back(x_prev);
        } else if (g_prev * gx < 0.0) {
            roots.push_back(brent(g, x_prev, x, 1e-13));
        }
        x_prev = x;
        g_prev = gx;
    }
    if (g_prev == 0.0) roots.push_back(x_prev);
    return roots;
}

/// Bisection on a monotone function where f(lo) and f(hi) straddle zero.
template <typename F>
double bisect(const F& f, double lo, double hi, double rel_tol = 1e-12, int max_iter = 200) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw numerical_error("bisect: interval does not bracket a root");
    for (int i = 0; i < max_iter && (hi - lo) > rel_tol * std::abs(hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace spinbath::roots
