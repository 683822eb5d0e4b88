#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "spinbath/errors.hpp"

// Small dense nonlinear least squares: Levenberg-Marquardt with box
// constraints by projection, numeric central-difference Jacobian, and a
// cyclic-Jacobi symmetric eigensolver for covariance and rank diagnostics.
// Problem sizes here are tiny (2-4 parameters, tens of points).

namespace spinbath::lm {

using Matrix = std::vector<std::vector<double>>;
using ResidualFn = std::function<std::vector<double>(const std::vector<double>&)>;

struct Options {
    int max_iter = 300;
    double ftol = 1e-14;      ///< relative chi2 improvement below which we stop
    double xtol = 1e-14;      ///< relative step size below which we stop
    double lambda0 = 1e-3;
    double lambda_up = 8.0;
    double lambda_down = 0.25;
    double jacobian_rel_step = 1e-6;
    double sv_threshold = 1e-8;  ///< relative singular-value cutoff for rank
};

struct Result {
    std::vector<double> params;
    Matrix covariance;                    ///< scaled by reduced chi2
    double chi2 = 0.0;
    double chi2_reduced = 0.0;
    bool converged = false;
    int n_iter = 0;
    std::vector<double> singular_values;  ///< of the weighted Jacobian, descending
    std::vector<int> deficient_directions;  ///< parameter-space indices below threshold
};

namespace detail {

inline double chi2_of(const std::vector<double>& r) {
    double s = 0.0;
    for (double v : r) s += v * v;
    return s;
}

/// Cyclic Jacobi eigensolver for a symmetric matrix. Returns eigenvalues
/// (unsorted) and the rotation matrix V with A = V diag(w) V^T.
inline void sym_eigen(Matrix a, std::vector<double>& w, Matrix& v) {
    const std::size_t n = a.size();
    v.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-300) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    w.resize(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = a[i][i];
}

/// Solve (A + lambda diag(A)) x = b by Gaussian elimination with partial
/// pivoting. A must be square.
inline std::vector<double> solve_damped(Matrix a, std::vector<double> b, double lambda) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i][i];
        a[i][i] = d + lambda * (d != 0.0 ? d : 1.0);
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-300)
            throw numerical_error("normal equations singular even with damping");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

inline std::vector<double> clamp_to_box(std::vector<double> x, const std::vector<double>& lo,
                                        const std::vector<double>& hi) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lo[i]) x[i] = lo[i];
        if (x[i] > hi[i]) x[i] = hi[i];
    }
    return x;
}

inline Matrix numeric_jacobian(const ResidualFn& fn, const std::vector<double>& x,
                               const std::vector<double>& lo, const std::vector<double>& hi,
                               std::size_t n_res, double rel_step) {
    const std::size_t np = x.size();
    Matrix j(n_res, std::vector<double>(np, 0.0));
    for (std::size_t p = 0; p < np; ++p) {
        // Step scale falls back to the box width so a parameter sitting at
        // exactly zero still gets a resolvable finite difference.
        double scale = std::abs(x[p]);
        if (std::isfinite(hi[p] - lo[p])) scale = std::max(scale, 1e-3 * (hi[p] - lo[p]));
        double h = rel_step * std::max(scale, 1e-12);
        std::vector<double> xp = x, xm = x;
        xp[p] = std::min(x[p] + h, hi[p]);
        xm[p] = std::max(x[p] - h, lo[p]);
        const double span = xp[p] - xm[p];
        if (span <= 0.0)
            throw fit_error("parameter " + std::to_string(p) + " pinned by identical bounds");
        const auto rp = fn(xp);
        const auto rm = fn(xm);
        for (std::size_t i = 0; i < n_res; ++i) j[i][p] = (rp[i] - rm[i]) / span;
    }
    return j;
}

} // namespace detail

/// Minimize sum r_i(x)^2 subject to lo <= x <= hi. The residual function must
/// return a fixed-length vector; weights belong inside the residuals.
inline Result minimize(const ResidualFn& fn, std::vector<double> x0, std::vector<double> lo,
                       std::vector<double> hi, const Options& opt = {}) {
    const std::size_t np = x0.size();
    if (lo.size() != np || hi.size() != np)
        throw fit_error("bound vectors must match parameter count");
    for (std::size_t i = 0; i < np; ++i)
        if (!(lo[i] <= hi[i])) throw fit_error("lower bound exceeds upper bound");
    std::vector<double> x = detail::clamp_to_box(std::move(x0), lo, hi);

    std::vector<double> r = fn(x);
    const std::size_t n_res = r.size();
    if (n_res < np) throw fit_error("fewer residuals than parameters");
    double chi2 = detail::chi2_of(r);
    double lambda = opt.lambda0;

    Result out;
    out.converged = false;

    Matrix jac;
    bool jac_fresh = false;
    int iter = 0;
    for (; iter < opt.max_iter; ++iter) {
        if (!jac_fresh) {
            jac = detail::numeric_jacobian(fn, x, lo, hi, n_res, opt.jacobian_rel_step);
            jac_fresh = true;
        }
        // Normal equations: A = J^T J, g = J^T r.
        Matrix a(np, std::vector<double>(np, 0.0));
        std::vector<double> g(np, 0.0);
        for (std::size_t i = 0; i < n_res; ++i) {
            for (std::size_t p = 0; p < np; ++p) {
                g[p] += jac[i][p] * r[i];
                for (std::size_t q = p; q < np; ++q) a[p][q] += jac[i][p] * jac[i][q];
            }
        }
        for (std::size_t p = 0; p < np; ++p)
            for (std::size_t q = 0; q < p; ++q) a[p][q] = a[q][p];

        bool accepted = false;
        for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
            std::vector<double> delta;
            try {
                delta = detail::solve_damped(a, g, lambda);
            } catch (const numerical_error&) {
                lambda *= opt.lambda_up;
                continue;
            }
            std::vector<double> trial(np);
            for (std::size_t p = 0; p < np; ++p) trial[p] = x[p] - delta[p];
            trial = detail::clamp_to_box(std::move(trial), lo, hi);
            const auto r_trial = fn(trial);
            const double chi2_trial = detail::chi2_of(r_trial);
            if (chi2_trial < chi2) {
                double step_norm = 0.0, x_norm = 0.0;
                for (std::size_t p = 0; p < np; ++p) {
                    step_norm += (trial[p] - x[p]) * (trial[p] - x[p]);
                    x_norm += x[p] * x[p];
                }
                const double rel_impr = (chi2 - chi2_trial) / std::max(chi2, 1e-300);
                x = std::move(trial);
                r = r_trial;
                chi2 = chi2_trial;
                lambda = std::max(lambda * opt.lambda_down, 1e-14);
                jac_fresh = false;
                accepted = true;
                if (rel_impr < opt.ftol ||
                    std::sqrt(step_norm) < opt.xtol * (std::sqrt(x_norm) + opt.xtol)) {
                    out.converged = true;
                }
            } else {
                lambda *= opt.lambda_up;
            }
        }
        if (!accepted) {
            // No downhill step at any damping: we are at a (possibly bound-
            // constrained) minimum to numerical precision.
            out.converged = true;
            break;
        }
        if (out.converged) break;
    }
    out.n_iter = iter + 1;
    out.params = x;
    out.chi2 = chi2;
    const std::size_t dof = n_res > np ? n_res - np : 1;
    out.chi2_reduced = chi2 / static_cast<double>(dof);

    // Rank diagnostics and covariance from the final J^T J eigensystem.
    jac = detail::numeric_jacobian(fn, x, lo, hi, n_res, opt.jacobian_rel_step);
    Matrix a(np, std::vector<double>(np, 0.0));
    for (std::size_t i = 0; i < n_res; ++i)
        for (std::size_t p = 0; p < np; ++p)
            for (std::size_t q = 0; q < np; ++q) a[p][q] += jac[i][p] * jac[i][q];
    std::vector<double> w;
    Matrix v;
    detail::sym_eigen(a, w, v);
    double w_max = 0.0;
    for (double wi : w) w_max = std::max(w_max, std::abs(wi));
    out.singular_values.resize(np);
    for (std::size_t i = 0; i < np; ++i) out.singular_values[i] = std::sqrt(std::max(0.0, w[i]));
    std::sort(out.singular_values.rbegin(), out.singular_values.rend());
    out.covariance.assign(np, std::vector<double>(np, 0.0));
    const double cutoff = opt.sv_threshold * opt.sv_threshold * w_max;
    for (std::size_t k = 0; k < np; ++k) {
        if (w[k] <= cutoff) {
            out.deficient_directions.push_back(static_cast<int>(k));
            continue;
        }
        for (std::size_t p = 0; p < np; ++p)
            for (std::size_t q = 0; q < np; ++q)
                out.covariance[p][q] += v[p][k] * v[q][k] / w[k];
    }
    for (std::size_t p = 0; p < np; ++p)
        for (std::size_t q = 0; q < np; ++q) out.covariance[p][q] *= out.chi2_reduced;
    return out;
}

} // namespace spinbath::lm
