// Acceptance gate: one line per check, pinned tolerances and runtime
// budgets, nonzero exit when any check fails. Failures print enough
// diagnostics to see what the code actually produced.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "spinbath/constants.hpp"
#include "spinbath/filters.hpp"
#include "spinbath/inference.hpp"
#include "spinbath/montecarlo.hpp"
#include "spinbath/noise_model.hpp"
#include "spinbath/quadrature.hpp"
#include "spinbath/relaxation.hpp"
#include "spinbath/rng.hpp"
#include "spinbath/units.hpp"

using namespace spinbath;

namespace {

struct Check {
    std::string name;
    double budget_s;
    std::function<bool(std::string&)> run;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// 1. Lorentzian spectrum integrates to one across ten decades of tau_c.
bool check_nsd_normalization(std::string& detail) {
    double worst = 0.0;
    for (double tc : {1e-10, 1e-6, 1e-2}) {
        const NoiseSpectrum s(Time::seconds(tc));
        const auto r = quad::integrate_zero_to_inf(s, 1.0 / tc, 0.0, 1e-9);
        worst = std::max(worst, std::abs(r.value - 1.0));
    }
    detail = "max |integral - 1| = " + fmt(worst) + " over tau_c 1e-10..1e-2 s, tol 1e-6";
    return worst <= 1e-6;
}

// 2. Echo filter integrates to 2 pi at every tau; the relaxation filter
// integrates to 4 pi when the lines sit far above the linewidth.
bool check_filter_normalization(std::string& detail) {
    double worst2 = 0.0;
    for (double tau_us : {0.1, 1.0, 10.0, 100.0}) {
        EchoFilter f(Time::us(tau_us));
        const int n_panels = 400;
        std::vector<double> pts;
        for (int k = 0; k <= n_panels; ++k) pts.push_back(f.zero(k));
        const auto head = quad::integrate_panels(f, pts, 0.0, 1e-10);
        // tail telescopes: mean of sin^4 is 3/8, remainder 3/(pi N) + O(1/N^3)
        const double total = head.value + 3.0 / (constants::pi * n_panels);
        worst2 = std::max(worst2, std::abs(total / (2.0 * constants::pi) - 1.0));
    }

    const auto f1 = zero_field_relaxation_filter(Time::us(2.0));
    const double w0 = constants::omega_nv_zero_field;
    const double g = f1.gamma();
    std::vector<double> pts{0.0,           w0 / 2.0,     w0 - 1e3 * g, w0 - 10.0 * g,
                            w0 + 10.0 * g, w0 + 1e3 * g, w0 * 2.0,     w0 * 1e3};
    const auto r1 = quad::integrate_panels(f1, pts, 0.0, 1e-10);
    const double err1 = std::abs(r1.value / (4.0 * constants::pi) - 1.0);

    detail = "echo err " + fmt(worst2) + " (tol 1e-6), relaxation err " + fmt(err1) +
             " (tol 1e-4)";
    return worst2 <= 1e-6 && err1 <= 1e-4;
}

// 3. Overlap quadrature, closed form and Monte Carlo agree on a 3x3 grid of
// (tau_c/tau, tau) with one shared calibration constant.
bool check_echo_oracle_triangle(std::string& detail) {
    const double gamma = constants::gamma_nv;
    double worst_quad = 0.0, kappa_lo = 1e300, kappa_hi = 0.0, worst_mc = 0.0;
    int point = 0;
    for (double ratio : {0.1, 1.0, 10.0}) {
        for (double tau_us : {0.3, 1.0, 3.0}) {
            const Time tau = Time::us(tau_us);
            const Time tc = Time::us(ratio * tau_us);
            // field chosen so chi = 0.5 at this point
            const double delta_sq = 0.5 / closed_form_ou_echo(1.0, tc, tau);
            const double chi_closed = closed_form_ou_echo(delta_sq, tc, tau);

            const double i2 = overlap_echo_quadrature(tc, tau);
            const double chi_quad = kappa * delta_sq * tau.s() * i2;
            worst_quad = std::max(worst_quad, std::abs(chi_quad / chi_closed - 1.0));
            const double kappa_implied = chi_closed / (delta_sq * tau.s() * i2);
            kappa_lo = std::min(kappa_lo, kappa_implied);
            kappa_hi = std::max(kappa_hi, kappa_implied);

            mc::TrajectoryConfig cfg;
            cfg.tau_c = tc;
            cfg.sigma_b = std::sqrt(delta_sq) / gamma;
            cfg.dt = Time::seconds(tau.s() / 200.0);
            cfg.n_trajectories = 10000;
            cfg.n_steps = 200;
            cfg.seed = 2468 + point;
            const auto ens = mc::simulate_echo_decay(cfg, {tau});
            const double dev =
                std::abs(ens.mean_signal[0] - std::exp(-chi_closed)) / ens.stderr_of[0];
            worst_mc = std::max(worst_mc, dev);
            ++point;
        }
    }
    const double kappa_spread = (kappa_hi - kappa_lo) / kappa;
    detail = "quad vs closed " + fmt(worst_quad) + " (tol 1e-3), kappa spread " +
             fmt(kappa_spread) + " (tol 1e-6), mc max " + fmt(worst_mc) +
             " sigma (tol 3), 1e4 trajectories";
    return worst_quad <= 1e-3 && kappa_spread <= 1e-6 && worst_mc <= 3.0;
}

// 4. Ensemble statistics: stationary variance, 1/e autocorrelation at one
// correlation time, bit-identical reruns under a fixed seed.
bool check_ensemble_statistics(std::string& detail) {
    mc::TrajectoryConfig cfg;
    cfg.tau_c = Time::us(5.0);
    cfg.sigma_b = 2.84e-6;
    cfg.dt = Time::us(0.25);
    cfg.n_steps = 200;
    cfg.n_trajectories = 10000;
    cfg.seed = 31;
    const std::size_t lag_tc = 20;  // tau_c / dt

    const auto ac = mc::estimate_autocorrelation(cfg, 2 * lag_tc);
    const double var_true = cfg.sigma_b * cfg.sigma_b;
    const double z_var = std::abs(ac.value[0] - var_true) / ac.stderr_of[0];
    const auto [ratio, ratio_err] = ac.ratio_to_lag0(lag_tc);
    const double z_ratio = std::abs(ratio - std::exp(-1.0)) / ratio_err;

    const auto ac2 = mc::estimate_autocorrelation(cfg, 2 * lag_tc);
    bool identical = ac.value == ac2.value && ac.stderr_of == ac2.stderr_of;
    mc::TrajectoryConfig echo_cfg = cfg;
    echo_cfg.dt = Time::us(0.05);  // echo spacing must span >= 100 steps
    echo_cfg.n_trajectories = 2000;
    const auto echo_a = mc::simulate_echo_decay(echo_cfg, {Time::us(5.0)});
    const auto echo_b = mc::simulate_echo_decay(echo_cfg, {Time::us(5.0)});
    identical = identical && echo_a.mean_signal == echo_b.mean_signal;

    detail = "variance z = " + fmt(z_var) + ", 1/e ratio z = " + fmt(z_ratio) +
             " (tol 3 each), seeded rerun " + (identical ? "bit-identical" : "DIFFERS");
    return z_var <= 3.0 && z_ratio <= 3.0 && identical;
}

// 5. Bulk-crystal rate model: sub-ns correlation time at room temperature
// (corner in the GHz range) and tens of ms deep in the Orbach-frozen regime.
bool check_rate_model_scales(std::string& detail) {
    const auto model = bulk_cobalt_rate_model();
    const double tc_rt = correlation_time(model, Temperature::kelvin(296.0)).s();
    const double corner = 1.0 / tc_rt;
    const double tc_cold = correlation_time(model, Temperature::kelvin(5.0)).s();
    detail = "tau_c(296 K) = " + fmt(tc_rt) + " s (< 1e-9), corner " + fmt(corner) +
             " rad/s (> 1e9), tau_c(5 K) = " + fmt(tc_cold) + " s (in 0.01..0.04)";
    return tc_rt < 1e-9 && corner > 1e9 && tc_cold > 10e-3 && tc_cold < 40e-3;
}

// 6. Round trip: rates generated from known bath parameters invert back to
// them within 1%; the bracketing solver agrees with an exhaustive 2-D scan.
bool check_extraction_round_trip(std::string& detail) {
    const auto filter = zero_field_relaxation_filter(Time::us(2.0));
    const Time echo_tau = Time::ms(1.0);
    const double g = constants::gamma_nv;
    const Time huge = Time::seconds(1e9);  // no intrinsic contribution

    double worst_tc = 0.0, worst_b = 0.0;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const double tc_true = 0.1e-6 * std::pow(1e3, i / 4.0);
            const double b_true = 0.1e-6 * std::pow(1e3, j / 4.0);
            const double b2 = b_true * b_true;
            const double r1 = t1_rate(b2, Time::seconds(tc_true), filter, g);
            const double r2 = echo_rate(b2, Time::seconds(tc_true), echo_tau, g);
            const auto got = extract_bath({Time::seconds(1.0 / r1)}, {huge},
                                          {Time::seconds(1.0 / r2)}, {huge}, echo_tau, filter, g);
            worst_tc = std::max(worst_tc, std::abs(got.tau_c.s() / tc_true - 1.0));
            worst_b = std::max(worst_b, std::abs(std::sqrt(got.b_rms_sq) / b_true - 1.0));
        }
    }

    // independent oracle: fine log grid in tau_c with the analytically
    // optimal b^2 per point, smallest near-perfect minimum wins
    int agree = 0;
    rng::Stream pick(2024, 0);
    for (int inst = 0; inst < 20; ++inst) {
        const double tc_true = 0.3e-6 * std::pow(100.0, pick.uniform());
        const double b_true = 0.5e-6 * std::pow(100.0, pick.uniform());
        const double b2 = b_true * b_true;
        const double r1 = t1_rate(b2, Time::seconds(tc_true), filter, g);
        const double r2 = echo_rate(b2, Time::seconds(tc_true), echo_tau, g);
        const auto got = extract_bath({Time::seconds(1.0 / r1)}, {huge},
                                      {Time::seconds(1.0 / r2)}, {huge}, echo_tau, filter, g);
        const int n_grid = 1200;
        double best_tc = 0.0;
        for (int k = 0; k <= n_grid; ++k) {
            const double tc = 1e-9 * std::pow(1e9, double(k) / n_grid);
            const double k1 = t1_rate(1.0, Time::seconds(tc), filter, g);
            const double k2 = echo_rate(1.0, Time::seconds(tc), echo_tau, g);
            const double misfit =
                std::abs((std::log(k1) - std::log(k2)) - (std::log(r1) - std::log(r2)));
            if (misfit < 0.04) {
                best_tc = tc;
                break;
            }
        }
        if (best_tc > 0.0 && std::abs(std::log(got.tau_c.s() / best_tc)) < 0.06) ++agree;
    }

    detail = "5x5 grid worst tau_c err " + fmt(worst_tc) + ", worst B err " + fmt(worst_b) +
             " (tol 0.01 each); grid-scan oracle agrees on " + std::to_string(agree) + "/20";
    return worst_tc <= 0.01 && worst_b <= 0.01 && agree == 20;
}

// 7. Stretched-exponential recovery under 2% noise, 30 points per curve.
bool check_fit_recovery_rate(std::string& detail) {
    int good = 0;
    const int n_runs = 200;
    for (int run = 0; run < n_runs; ++run) {
        rng::Stream s(5000 + run, 0);
        const double t_true = 3e-6 * std::pow(4.0, s.uniform());  // 3..12 us
        DecayCurve c;
        c.meta.id = "synthetic";
        for (int i = 1; i <= 30; ++i) {
            const double t = 3.0 * t_true * i / 30.0;
            c.t_s.push_back(t);
            c.signal.push_back(stretched_exp(t, 1.0, t_true, 1.5, 0.0) + 0.02 * s.normal());
            c.sigma.push_back(0.02);
        }
        const auto fit = fit_decay(c);
        if (fit.converged && std::abs(fit.t_char_s - t_true) / t_true < 0.05) ++good;
    }
    detail = std::to_string(good) + "/200 curves within 5% of the generating T (need >= 190)";
    return good >= 190;
}

// 8. Reference measured relaxation pair (T1 0.35 ms with / 22 ms without the
// molecular layer; T2 0.80 us / 4.0 us at echo spacing 0.8 us, T2* 1 us):
// the extracted correlation time should land in the 0.5..50 us window that
// brackets the reported five-sensor average of 5 us.
bool check_reference_pair_window(std::string& detail) {
    const auto filter = zero_field_relaxation_filter(Time::us(1.0));
    const Time echo_tau = Time::us(0.8);
    const auto got = extract_bath({Time::ms(0.35)}, {Time::ms(22.0)}, {Time::us(0.80)},
                                  {Time::us(4.0)}, echo_tau, filter);
    const double tc = got.tau_c.s();
    const bool in_window = tc >= 0.5e-6 && tc <= 50e-6;
    std::string roots;
    for (const Time& r : got.all_roots) roots += (roots.empty() ? "" : ", ") + fmt(r.s());
    detail = "smallest consistent tau_c = " + fmt(tc) + " s, window [5e-7, 5e-5] s, roots {" +
             roots + "}, residual " + fmt(got.residual_norm);
    if (!in_window)
        detail += "; the measured rate ratio admits only ns- and ms-scale solutions at this "
                  "echo spacing, so the window cannot be reached from these four numbers";
    return in_window;
}

// 9. Declared irreproducibles: raw measured decay traces, the reported
// on-sensor molecule count, and surface-layer rate coefficients are not
// derivable from first principles here. Coverage instead comes from forward
// synthesis with known parameters followed by refitting.
bool check_synthetic_regression(std::string& detail) {
    // correlation times from the bulk rate model over a temperature ladder,
    // refit with the barrier pinned
    const auto model = bulk_cobalt_rate_model();
    std::vector<RatePoint> pts;
    for (double temp_k : {4.0, 6.0, 9.0, 13.0, 20.0, 30.0, 45.0}) {
        const Time tc = correlation_time(model, Temperature::kelvin(temp_k));
        pts.push_back({Temperature::kelvin(temp_k), tc, 0.01});
    }
    RateModelFitSpec spec;
    spec.fixed_barrier = Energy::wavenumber(230.0);
    const auto fit = fit_rate_model(pts, spec);
    const bool model_ok = fit.converged &&
                          std::abs(fit.model.raman_c / model.raman_c - 1.0) < 1e-4 &&
                          std::abs(fit.model.raman_n / model.raman_n - 1.0) < 1e-4 &&
                          std::abs(fit.model.tau0_inv / model.tau0_inv - 1.0) < 1e-4;

    // synthetic decay curve refit round trip at realistic scales
    DecayCurve c;
    c.meta.id = "synth";
    for (int i = 1; i <= 30; ++i) {
        const double t = 12e-6 * i / 30.0;
        c.t_s.push_back(t);
        c.signal.push_back(stretched_exp(t, 1.0, 4e-6, 1.3, 0.05));
    }
    const auto fit2 = fit_decay(c);
    const bool curve_ok = fit2.converged && std::abs(fit2.t_char_s / 4e-6 - 1.0) < 1e-6 &&
                          std::abs(fit2.beta / 1.3 - 1.0) < 1e-6;

    detail = std::string("raw measured traces, the on-sensor molecule count and "
                         "surface-layer rate coefficients are not reproducible from "
                         "published numbers; synthetic-regression coverage: rate model ") +
             (model_ok ? "recovered" : "FAILED") + ", decay refit " +
             (curve_ok ? "recovered" : "FAILED");
    return model_ok && curve_ok;
}

} // namespace

int main() {
    std::vector<Check> checks = {
        {"lorentzian spectrum normalization", 1.0, check_nsd_normalization},
        {"filter function normalization", 1.0, check_filter_normalization},
        {"echo oracle triangle (quadrature, closed form, monte carlo)", 120.0,
         check_echo_oracle_triangle},
        {"ou ensemble statistics and seeded reproducibility", 60.0, check_ensemble_statistics},
        {"bulk rate model temperature scales", 1.0, check_rate_model_scales},
        {"bath extraction round trip and grid-scan oracle", 60.0, check_extraction_round_trip},
        {"stretched-exponential recovery rate under noise", 60.0, check_fit_recovery_rate},
        {"reference relaxation pair lands in the expected window", 1.0,
         check_reference_pair_window},
        {"irreproducibles declared, synthetic regression coverage", 60.0,
         check_synthetic_regression},
    };

    int failures = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = checks[i].run(detail);
        } catch (const std::exception& e) {
            detail = std::string("unexpected exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = elapsed < checks[i].budget_s;
        if (!(ok && in_budget)) ++failures;
        std::printf("%s %zu: %s; %s [%.2f s, budget %g s]\n",
                    ok && in_budget ? "PASS" : "FAIL", i + 1, checks[i].name.c_str(),
                    detail.c_str(), elapsed, checks[i].budget_s);
    }
    std::printf("%zu/%zu checks passed\n", checks.size() - failures, checks.size());
    return failures == 0 ? 0 : 1;
}
