#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "spinbath/errors.hpp"
#include "spinbath/levmar.hpp"
#include "spinbath/noise_model.hpp"
#include "spinbath/relaxation.hpp"
#include "spinbath/roots.hpp"
#include "spinbath/units.hpp"

// Inverse problems: decay-curve fitting, (tau_c, <B^2>) extraction from paired
// relaxation times, and Raman+Orbach rate-model fits over temperature series.

namespace spinbath {

enum class CurveKind { t1, t2 };

struct CurveMeta {
    std::string id;
    std::optional<double> temperature_k;
    std::optional<double> field_t;
    std::optional<bool> smm_present;
};

struct DecayCurve {
    std::vector<double> t_s;
    std::vector<double> signal;
    std::vector<double> sigma;  ///< empty, or one positive entry per point
    CurveKind kind = CurveKind::t2;
    CurveMeta meta;

    void validate() const {
        if (t_s.size() != signal.size())
            throw data_error("curve '" + meta.id + "': time and signal lengths differ");
        if (!sigma.empty() && sigma.size() != t_s.size())
            throw data_error("curve '" + meta.id + "': sigma length differs from points");
        for (std::size_t i = 1; i < t_s.size(); ++i)
            if (!(t_s[i] > t_s[i - 1]))
                throw data_error("curve '" + meta.id + "': times must be strictly increasing");
        for (double s : sigma)
            if (!(s > 0.0)) throw data_error("curve '" + meta.id + "': sigma must be > 0");
        for (double t : t_s)
            if (t < 0.0 || !std::isfinite(t))
                throw data_error("curve '" + meta.id + "': times must be finite and >= 0");
        for (double s : signal)
            if (!std::isfinite(s)) throw data_error("curve '" + meta.id + "': non-finite signal");
    }
};

/// s(t) = baseline + A exp(-(t/T)^beta).
inline double stretched_exp(double t, double amplitude, double t_char, double beta,
                            double baseline) {
    if (t < 0.0) throw domain_error("stretched_exp requires t >= 0");
    if (t == 0.0) return baseline + amplitude;
    return baseline + amplitude * std::exp(-std::pow(t / t_char, beta));
}

struct FitResult {
    double amplitude = 0.0;
    double t_char_s = 0.0;
    double beta = 1.0;
    double baseline = 0.0;
    lm::Matrix covariance;  ///< parameter order: amplitude, t_char, beta, baseline
    double chi2_reduced = 0.0;
    bool converged = false;
    int n_iter = 0;
    int n_starts_tried = 0;

    double err(std::size_t i) const {
        if (covariance.empty()) return 0.0;
        return std::sqrt(std::max(0.0, covariance[i][i]));
    }
    double t_char_err_s() const { return err(1); }
    double beta_err() const { return err(2); }
};

struct FitOptions {
    double beta_min = 0.5;
    double beta_max = 3.0;
    int n_t_starts = 6;
    std::vector<double> beta_starts{1.0, 2.5};
};

/// Weighted stretched-exponential fit with multi-start initialization.
/// Starts are log-spaced in T_char over the data time range; ties are broken
/// by chi2, then smaller beta, then smaller T_char, so the result is
/// deterministic.
inline FitResult fit_decay(const DecayCurve& curve, const FitOptions& opt = {}) {
    curve.validate();
    const std::size_t n = curve.t_s.size();
    if (n < 5) throw data_error("fit_decay needs >= 5 points, got " + std::to_string(n));
    const double s_max = *std::max_element(curve.signal.begin(), curve.signal.end());
    const double s_min = *std::min_element(curve.signal.begin(), curve.signal.end());
    const double range = s_max - s_min;
    if (range <= 1e-14 * std::max(1.0, std::abs(s_max)))
        throw data_error("fit_decay: signal is constant, nothing to fit");

    const bool weighted = !curve.sigma.empty();
    auto residuals = [&](const std::vector<double>& p) {
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double m = stretched_exp(curve.t_s[i], p[0], p[1], p[2], p[3]);
            r[i] = m - curve.signal[i];
            if (weighted) r[i] /= curve.sigma[i];
        }
        return r;
    };

    const double t_lo = std::max(curve.t_s.front(), curve.t_s.back() * 1e-6);
    const double t_hi = curve.t_s.back();
    std::vector<double> lo{0.0, t_lo * 1e-2, opt.beta_min, s_min - range};
    std::vector<double> hi{10.0 * range, t_hi * 1e2, opt.beta_max, s_max + range};

    const double a0 = curve.signal.front() - s_min;
    const double b0 = s_min;

    lm::Result best;
    bool have_best = false;
    std::vector<double> best_start;
    std::ostringstream diag;
    int tried = 0;
    for (double beta0 : opt.beta_starts) {
        for (int k = 0; k < opt.n_t_starts; ++k) {
            const double f = static_cast<double>(k) / static_cast<double>(opt.n_t_starts - 1);
            const double t0 = t_lo * std::pow(t_hi / std::max(t_lo, 1e-300), f);
            std::vector<double> x0{std::max(a0, 0.1 * range), t0, beta0, b0};
            ++tried;
            lm::Result r;
            try {
                r = lm::minimize(residuals, x0, lo, hi);
            } catch (const error& e) {
                diag << "start " << tried << " (T=" << t0 << ", beta=" << beta0
                     << "): " << e.what() << "\n";
                continue;
            }
            if (!r.converged) {
                diag << "start " << tried << " (T=" << t0 << ", beta=" << beta0
                     << "): no convergence in " << r.n_iter << " iterations\n";
                continue;
            }
            bool better = !have_best;
            if (have_best) {
                const double scale = std::max(best.chi2, 1e-300);
                if (r.chi2 < best.chi2 * (1.0 - 1e-9)) better = true;
                else if (std::abs(r.chi2 - best.chi2) <= 1e-9 * scale) {
                    if (r.params[2] < best.params[2] - 1e-12) better = true;
                    else if (std::abs(r.params[2] - best.params[2]) <= 1e-12 &&
                             r.params[1] < best.params[1])
                        better = true;
                }
            }
            if (better) {
                best = r;
                have_best = true;
                best_start = x0;
            }
        }
    }
    if (!have_best)
        throw fit_error("fit_decay: no start converged; per-start diagnostics:\n" + diag.str());

    FitResult out;
    out.amplitude = best.params[0];
    out.t_char_s = best.params[1];
    out.beta = best.params[2];
    out.baseline = best.params[3];
    out.covariance = best.covariance;
    out.converged = best.converged;
    out.n_iter = best.n_iter;
    out.n_starts_tried = tried;

    if (weighted) {
        out.chi2_reduced = best.chi2_reduced;
    } else {
        // Unweighted: report chi2 against a robust scale estimated from the
        // residuals (MAD), so chi2_reduced ~ 1 for a well-specified model.
        auto r = residuals(best.params);
        std::vector<double> absr(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) absr[i] = std::abs(r[i]);
        std::nth_element(absr.begin(), absr.begin() + absr.size() / 2, absr.end());
        const double mad = absr[absr.size() / 2];
        const double scale = 1.4826 * mad;
        const std::size_t dof = n > 4 ? n - 4 : 1;
        out.chi2_reduced = scale > 0.0
                               ? best.chi2 / (scale * scale * static_cast<double>(dof))
                               : 0.0;
    }
    return out;
}

struct MeasuredTime {
    Time value = Time::seconds(0.0);
    Time err = Time::seconds(0.0);
};

struct BathExtraction {
    Time tau_c = Time::seconds(0.0);
    Time tau_c_err = Time::seconds(0.0);
    double b_rms_sq = 0.0;      ///< T^2
    double b_rms_sq_err = 0.0;  ///< T^2
    double residual_norm = 0.0;
    Time echo_tau = Time::seconds(0.0);
    std::vector<Time> all_roots;  ///< every bracket root found; first is reported
};

namespace detail {

struct BathRates {
    double rate1;  ///< bath-induced 1/T1, s^-1
    double rate2;  ///< bath-induced 1/T2, s^-1
};

inline BathRates bath_rates_from_times(double t1_with, double t1_without, double t2_with,
                                       double t2_without) {
    for (double t : {t1_with, t1_without, t2_with, t2_without})
        if (!(t > 0.0)) throw data_error("extract_bath: all relaxation times must be > 0");
    const double r1 = 1.0 / t1_with - 1.0 / t1_without;
    const double r2 = 1.0 / t2_with - 1.0 / t2_without;
    if (r1 <= 0.0 && r2 <= 0.0)
        throw data_error("extract_bath: zero bath signal, with-bath times do not exceed "
                         "intrinsic rates in either channel");
    if (r1 <= 0.0 || r2 <= 0.0)
        throw data_error("extract_bath: bath-induced rate <= 0 in one channel (T1 excess " +
                         std::to_string(r1) + " s^-1, T2 excess " + std::to_string(r2) +
                         " s^-1); the two-channel solve needs both positive");
    return {r1, r2};
}

/// Core solve at fixed inputs; returns (tau_c seconds, b_rms_sq, roots).
inline std::tuple<double, double, std::vector<double>> solve_bath(
    double t1_with, double t1_without, double t2_with, double t2_without, double echo_tau_s,
    const RelaxationFilter& t1_filter, double gamma) {
    const auto rates = bath_rates_from_times(t1_with, t1_without, t2_with, t2_without);
    const double target = rates.rate2 / rates.rate1;
    const Time echo_tau = Time::seconds(echo_tau_s);

    // The rate ratio I2/I1 depends only on tau_c; scan the physical bracket
    // [1 ns, 1 s] on a log grid and refine every sign change.
    auto ratio_minus_target = [&](double tc_s) {
        const Time tc = Time::seconds(tc_s);
        return overlap_echo(tc, echo_tau) / overlap_t1(tc, t1_filter) - target;
    };
    const double lo = 1e-9, hi = 1.0;
    const auto roots_found = roots::find_roots_log_grid(ratio_minus_target, lo, hi, 240);
    if (roots_found.empty()) {
        // Report the attainable ratio range so the caller can see how far off
        // the inputs are.
        double r_min = std::numeric_limits<double>::infinity(), r_max = 0.0;
        for (int i = 0; i <= 40; ++i) {
            const double tc = lo * std::pow(hi / lo, i / 40.0);
            const double r = ratio_minus_target(tc) + target;
            r_min = std::min(r_min, r);
            r_max = std::max(r_max, r);
        }
        std::ostringstream msg;
        msg << "extract_bath: no tau_c in [1 ns, 1 s] reproduces rate ratio " << target
            << "; attainable range is [" << r_min << ", " << r_max << "]";
        throw identifiability_error(msg.str());
    }
    // Multiple roots can exist because the ratio curve rises, peaks, and
    // falls; the smallest root (rising branch) is the deterministic choice.
    const double tc = roots_found.front();
    const double b2 =
        rates.rate2 / (kappa * gamma * gamma * overlap_echo(Time::seconds(tc), echo_tau));
    return {tc, b2, roots_found};
}

} // namespace detail

/// Invert paired T1/T2 measurements (with and without the bath present) into
/// (tau_c, <B^2>). The echo_tau argument is the total echo evolution time the
/// T2 rate refers to. Uncertainties are propagated by numerical linearization.
inline BathExtraction extract_bath(MeasuredTime t1_with, MeasuredTime t1_without,
                                   MeasuredTime t2_with, MeasuredTime t2_without, Time echo_tau,
                                   const RelaxationFilter& t1_filter,
                                   double gamma = constants::gamma_nv) {
    if (echo_tau.s() <= 0.0) throw domain_error("extract_bath: echo_tau must be > 0");
    const auto [tc, b2, roots_found] =
        detail::solve_bath(t1_with.value.s(), t1_without.value.s(), t2_with.value.s(),
                           t2_without.value.s(), echo_tau.s(), t1_filter, gamma);

    BathExtraction out;
    out.tau_c = Time::seconds(tc);
    out.b_rms_sq = b2;
    out.echo_tau = echo_tau;
    for (double r : roots_found) out.all_roots.push_back(Time::seconds(r));

    // Residual: reconstruct the bath rates from the solution and compare.
    const auto rates = detail::bath_rates_from_times(t1_with.value.s(), t1_without.value.s(),
                                                     t2_with.value.s(), t2_without.value.s());
    const double pred1 = kappa * gamma * gamma * b2 * overlap_t1(out.tau_c, t1_filter);
    const double pred2 = kappa * gamma * gamma * b2 * overlap_echo(out.tau_c, echo_tau);
    out.residual_norm = std::abs(pred1 - rates.rate1) / rates.rate1 +
                        std::abs(pred2 - rates.rate2) / rates.rate2;

    // Linearized error propagation: re-solve at each input shifted by its
    // uncertainty and accumulate the quadrature sum.
    const std::array<MeasuredTime, 4> inputs{t1_with, t1_without, t2_with, t2_without};
    double var_tc = 0.0, var_b2 = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const double sig = inputs[i].err.s();
        if (sig <= 0.0) continue;
        std::array<double, 4> v{t1_with.value.s(), t1_without.value.s(), t2_with.value.s(),
                                t2_without.value.s()};
        v[i] += sig;
        try {
            const auto [tc_p, b2_p, ignored] =
                detail::solve_bath(v[0], v[1], v[2], v[3], echo_tau.s(), t1_filter, gamma);
            (void)ignored;
            var_tc += (tc_p - tc) * (tc_p - tc);
            var_b2 += (b2_p - b2) * (b2_p - b2);
        } catch (const error&) {
            // A one-sigma shift can push the system out of its solvable
            // region; skip that direction rather than fail the extraction.
        }
    }
    out.tau_c_err = Time::seconds(std::sqrt(var_tc));
    out.b_rms_sq_err = std::sqrt(var_b2);
    return out;
}

struct RateModelFitSpec {
    std::optional<double> fixed_raman_c;
    std::optional<double> fixed_raman_n;
    std::optional<double> fixed_tau0_inv;
    std::optional<Energy> fixed_barrier;  ///< unset means the barrier is free
};

struct RatePoint {
    Temperature temperature = Temperature::kelvin(1.0);
    Time tau_c = Time::seconds(1.0);
    double tau_c_rel_err = 0.0;  ///< optional relative uncertainty on tau_c
};

struct RateModelFitResult {
    RelaxationRateModel model;
    double chi2_reduced = 0.0;
    bool converged = false;
    int n_iter = 0;
    std::vector<std::string> free_names;
    std::vector<double> singular_values;
};

/// Weighted least squares on log(1/tau_c) over a temperature series.
/// Parameters are fit as (ln C, n, ln tau0_inv, E_a in cm^-1); any subset may
/// be fixed. Practically unidentifiable directions raise an error.
inline RateModelFitResult fit_rate_model(const std::vector<RatePoint>& points,
                                         const RateModelFitSpec& spec = {}) {
    if (points.empty()) throw data_error("fit_rate_model: no points");
    for (const auto& p : points)
        if (p.tau_c.s() <= 0.0) throw data_error("fit_rate_model: tau_c must be > 0");

    std::vector<std::string> free_names;
    if (!spec.fixed_raman_c) free_names.push_back("raman_c");
    if (!spec.fixed_raman_n) free_names.push_back("raman_n");
    if (!spec.fixed_tau0_inv) free_names.push_back("tau0_inv");
    if (!spec.fixed_barrier) free_names.push_back("barrier");
    const std::size_t n_free = free_names.size();
    if (n_free == 0) throw config_error("fit_rate_model: nothing to fit, all parameters fixed");
    if (points.size() < n_free)
        throw identifiability_error("fit_rate_model: " + std::to_string(points.size()) +
                                    " point(s) cannot determine " + std::to_string(n_free) +
                                    " free parameter(s): " + [&] {
                                        std::string s;
                                        for (const auto& nm : free_names) s += nm + " ";
                                        return s;
                                    }());
    double t_min = points.front().temperature.k(), t_max = t_min;
    for (const auto& p : points) {
        t_min = std::min(t_min, p.temperature.k());
        t_max = std::max(t_max, p.temperature.k());
    }
    const bool fully_free = n_free >= 3;
    if (fully_free && t_max < 2.0 * t_min)
        throw identifiability_error(
            "fit_rate_model: temperature span must cover at least a factor 2 when C, n and "
            "tau0_inv are all free (got " +
            std::to_string(t_min) + " K to " + std::to_string(t_max) + " K)");

    // Pack/unpack between the free-parameter vector and the full model.
    auto unpack = [&](const std::vector<double>& x) {
        RelaxationRateModel m;
        std::size_t k = 0;
        m.raman_c = spec.fixed_raman_c ? *spec.fixed_raman_c : std::exp(x[k++]);
        m.raman_n = spec.fixed_raman_n ? *spec.fixed_raman_n : x[k++];
        m.tau0_inv = spec.fixed_tau0_inv ? *spec.fixed_tau0_inv : std::exp(x[k++]);
        m.barrier = spec.fixed_barrier ? *spec.fixed_barrier : Energy::wavenumber(x[k++]);
        return m;
    };

    auto model_rate = [](const RelaxationRateModel& m, double t_k) {
        const double raman = m.raman_c * std::pow(t_k, m.raman_n);
        const double orbach =
            m.tau0_inv > 0.0
                ? m.tau0_inv * std::exp(-thermal_energy_ratio(m.barrier, Temperature::kelvin(t_k)))
                : 0.0;
        return raman + orbach;
    };

    auto residuals = [&](const std::vector<double>& x) {
        const auto m = unpack(x);
        std::vector<double> r(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double pred = model_rate(m, points[i].temperature.k());
            const double meas = 1.0 / points[i].tau_c.s();
            double res = std::log(std::max(pred, 1e-300)) - std::log(meas);
            if (points[i].tau_c_rel_err > 0.0) res /= points[i].tau_c_rel_err;
            r[i] = res;
        }
        return r;
    };

    // Initial guesses: Raman from the lowest-T point (Orbach is exponentially
    // suppressed there), attempt rate from the highest-T excess.
    const auto& p_lo = *std::min_element(points.begin(), points.end(), [](auto& a, auto& b) {
        return a.temperature.k() < b.temperature.k();
    });
    const auto& p_hi = *std::max_element(points.begin(), points.end(), [](auto& a, auto& b) {
        return a.temperature.k() < b.temperature.k();
    });

    std::vector<double> n_starts{2.0, 3.5, 5.0};
    if (spec.fixed_raman_n) n_starts = {*spec.fixed_raman_n};

    lm::Result best;
    bool have_best = false;
    std::vector<double> best_x;
    for (double n0 : n_starts) {
        const double rate_lo = 1.0 / p_lo.tau_c.s();
        const double c0 = spec.fixed_raman_c
                              ? *spec.fixed_raman_c
                              : rate_lo / std::pow(p_lo.temperature.k(), n0);
        const Energy ea0 = spec.fixed_barrier ? *spec.fixed_barrier : Energy::wavenumber(200.0);
        const double rate_hi = 1.0 / p_hi.tau_c.s();
        const double raman_hi = c0 * std::pow(p_hi.temperature.k(), n0);
        const double excess = std::max(rate_hi - raman_hi, 0.1 * rate_hi);
        const double tau0_inv0 =
            spec.fixed_tau0_inv
                ? *spec.fixed_tau0_inv
                : excess * std::exp(thermal_energy_ratio(ea0, p_hi.temperature));

        std::vector<double> x0, lo_b, hi_b;
        if (!spec.fixed_raman_c) {
            x0.push_back(std::log(std::max(c0, 1e-30)));
            lo_b.push_back(-90.0);
            hi_b.push_back(90.0);
        }
        if (!spec.fixed_raman_n) {
            x0.push_back(n0);
            lo_b.push_back(0.1);
            hi_b.push_back(12.0);
        }
        if (!spec.fixed_tau0_inv) {
            x0.push_back(std::log(std::max(tau0_inv0, 1e-30)));
            lo_b.push_back(-90.0);
            hi_b.push_back(90.0);
        }
        if (!spec.fixed_barrier) {
            x0.push_back(200.0);
            lo_b.push_back(1.0);
            hi_b.push_back(5000.0);
        }
        lm::Result r;
        try {
            r = lm::minimize(residuals, x0, lo_b, hi_b);
        } catch (const error&) {
            continue;
        }
        if (!r.converged) continue;
        if (!have_best || r.chi2 < best.chi2) {
            best = r;
            have_best = true;
            best_x = r.params;
        }
    }
    if (!have_best) throw fit_error("fit_rate_model: no start converged");
    if (!best.deficient_directions.empty()) {
        std::ostringstream msg;
        msg << "fit_rate_model: practically unidentifiable direction(s) in {";
        for (std::size_t i = 0; i < free_names.size(); ++i)
            msg << (i ? ", " : "") << free_names[i];
        msg << "}; singular values:";
        for (double s : best.singular_values) msg << " " << s;
        throw identifiability_error(msg.str());
    }

    RateModelFitResult out;
    out.model = unpack(best_x);
    out.model.validate();
    out.chi2_reduced = best.chi2_reduced;
    out.converged = best.converged;
    out.n_iter = best.n_iter;
    out.free_names = free_names;
    out.singular_values = best.singular_values;
    return out;
}

struct TempFieldRow {
    double temperature_k = 0.0;
    double field_t = 0.0;
    double t2_s = 0.0;
    double t2_err_s = 0.0;
    double beta = 0.0;
    std::string id;
};

struct FieldComparison {
    double temperature_k = 0.0;
    double field_low_t = 0.0;
    double field_high_t = 0.0;
    double t2_low_s = 0.0;
    double t2_high_s = 0.0;
    double relative_increase = 0.0;  ///< t2_high/t2_low - 1
};

struct TempFieldTable {
    std::vector<TempFieldRow> rows;  ///< sorted by field, then temperature
    std::optional<FieldComparison> comparison;
};

/// Fit every curve and tabulate T2 against temperature and field. When at
/// least two distinct fields share a temperature, the low-vs-high field
/// comparison at that temperature is attached.
inline TempFieldTable t2_vs_temperature_table(const std::vector<DecayCurve>& curves,
                                              const FitOptions& opt = {}) {
    if (curves.empty()) throw data_error("t2_vs_temperature_table: no curves");
    TempFieldTable out;
    for (const auto& c : curves) {
        if (!c.meta.temperature_k || !c.meta.field_t)
            throw data_error("t2_vs_temperature_table: curve '" + c.meta.id +
                             "' lacks temperature or field metadata");
        const auto fit = fit_decay(c, opt);
        TempFieldRow row;
        row.temperature_k = *c.meta.temperature_k;
        row.field_t = *c.meta.field_t;
        row.t2_s = fit.t_char_s;
        row.t2_err_s = fit.t_char_err_s();
        row.beta = fit.beta;
        row.id = c.meta.id;
        out.rows.push_back(row);
    }
    std::sort(out.rows.begin(), out.rows.end(), [](const TempFieldRow& a, const TempFieldRow& b) {
        if (a.field_t != b.field_t) return a.field_t < b.field_t;
        return a.temperature_k < b.temperature_k;
    });

    // Field comparison: for each temperature present at >= 2 fields, compare
    // the lowest and highest field rows; report the first such temperature.
    for (const auto& row : out.rows) {
        const TempFieldRow* low = nullptr;
        const TempFieldRow* high = nullptr;
        for (const auto& r : out.rows) {
            if (std::abs(r.temperature_k - row.temperature_k) > 0.05 * row.temperature_k)
                continue;
            if (!low || r.field_t < low->field_t) low = &r;
            if (!high || r.field_t > high->field_t) high = &r;
        }
        if (low && high && high->field_t > low->field_t) {
            FieldComparison cmp;
            cmp.temperature_k = row.temperature_k;
            cmp.field_low_t = low->field_t;
            cmp.field_high_t = high->field_t;
            cmp.t2_low_s = low->t2_s;
            cmp.t2_high_s = high->t2_s;
            cmp.relative_increase = high->t2_s / low->t2_s - 1.0;
            out.comparison = cmp;
            break;
        }
    }
    return out;
}

} // namespace spinbath
