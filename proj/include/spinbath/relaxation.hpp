#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "spinbath/constants.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/filters.hpp"
#include "spinbath/noise_model.hpp"
#include "spinbath/quadrature.hpp"
#include "spinbath/roots.hpp"
#include "spinbath/units.hpp"

// Overlap integrals of the normalized NSD with the sequence filters, and the
// relaxation-time predictions built from them. The echo overlap has an exact
// closed form; quadrature routes are kept alongside so the two can be checked
// against each other.

namespace spinbath {

/// Sensitivity prefactor in rate = kappa * gamma^2 <B^2> * overlap.
inline constexpr double kappa = 0.25;

/// Exact echo overlap integral:
///   I2(tau_c, tau) = int_0^inf S(omega) F2(omega) domega
///                  = (4 tau_c / tau) [tau - 3 tau_c
///                      + 4 tau_c e^{-tau/(2 tau_c)} - tau_c e^{-tau/tau_c}].
/// Dimension s^-1. Limits: 4 tau_c for tau_c << tau (motional narrowing),
/// tau^2 / (3 tau_c) for tau_c >> tau (quasi-static).
inline double overlap_echo(Time tau_c, Time tau) {
    const double tc = tau_c.s();
    const double t = tau.s();
    if (tc <= 0.0 || t <= 0.0)
        throw domain_error("overlap_echo requires tau_c > 0 and tau > 0");
    const double r = t / tc;
    if (r < 1e-4) {
        // Series in r avoids catastrophic cancellation deep in the slow
        // regime: I2 = (t^2 / 3 tau_c) (1 - r/4 + r^2/40 + O(r^3)).
        return t * t / (3.0 * tc) * (1.0 - r / 4.0 + r * r / 40.0);
    }
    const double bracket = t - 3.0 * tc + 4.0 * tc * std::exp(-0.5 * r) - tc * std::exp(-r);
    return 4.0 * tc / t * bracket;
}

/// Same integral by panel quadrature: panels between consecutive filter zeros
/// plus an analytic Lorentzian-envelope tail. Used to cross-check the closed
/// form, and as the template for overlaps with no closed form.
inline double overlap_echo_quadrature(Time tau_c, Time tau, double rel_tol = 1e-10) {
    const NoiseSpectrum spectrum(tau_c);
    const EchoFilter filter(tau);
    const double tc = tau_c.s();
    const double t = tau.s();

    auto integrand = [&](double w) { return spectrum(w) * filter(w); };

    // Enough zero-to-zero panels to pass both the corner 1/tau_c and the
    // filter oscillation scale; cap the count and close with the tail.
    const double corner = 1.0 / tc;
    int n_panels = 64;
    while (filter.zero(n_panels) < 100.0 * corner && n_panels < 4096) n_panels *= 2;
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(n_panels) + 2);
    for (int k = 0; k <= n_panels; ++k) pts.push_back(filter.zero(k));
    const double w_max = pts.back();

    const auto body = quad::integrate_panels(integrand, pts, 0.0, rel_tol);

    // Tail: replace sin^4 by its mean 3/8, S by its large-omega form. Exact
    // integral of the enveloped remainder:
    //   int_W^inf (2/pi)(tau_c/(1+tau_c^2 w^2)) * (12/tau) / w^2 dw
    //     = (24 tau_c / (pi tau)) [1/W - tau_c (pi/2 - atan(tau_c W))].
    const double tail = 24.0 * tc / (constants::pi * t) *
                        (1.0 / w_max - tc * (constants::pi / 2.0 - std::atan(tc * w_max)));

    return body.value + tail;
}

/// Overlap of the NSD with the free-relaxation filter, by quadrature with
/// explicit panel splits at the Lorentzian corner and both resonance peaks.
inline double overlap_t1(Time tau_c, const RelaxationFilter& filter, double rel_tol = 1e-9) {
    const NoiseSpectrum spectrum(tau_c);
    const double tc = tau_c.s();
    const double g = filter.gamma();
    const double wm = filter.omega_minus().rad_s();
    const double wp = filter.omega_plus().rad_s();

    auto integrand = [&](double w) { return spectrum(w) * filter(w); };

    std::vector<double> pts{0.0};
    for (double c : {0.01, 0.1, 1.0, 10.0, 100.0}) pts.push_back(c / tc);
    for (double w0 : {wm, wp}) {
        for (double m : {1.0, 10.0, 100.0, 1e3, 1e4, 1e5}) {
            pts.push_back(w0 - m * g);
            pts.push_back(w0 + m * g);
        }
        pts.push_back(w0);
    }
    const double w_max = std::max({1e3 / tc, wp + 1e6 * g, wm + 1e6 * g});
    pts.push_back(w_max);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::remove_if(pts.begin(), pts.end(),
                             [&](double x) { return x < 0.0 || x > w_max; }),
              pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const auto body = quad::integrate_panels(integrand, pts, 0.0, rel_tol);

    // Past w_max both factors fall like w^-2 (w_max clears the corner by 1e3
    // and the peaks by 1e6 linewidths), so the remainder integrates to
    // 8 g / (3 pi tau_c w_max^3).
    const double tail = 8.0 * g / (3.0 * constants::pi * tc * std::pow(w_max, 3));
    return body.value + tail;
}

/// Narrow-line estimate of the same overlap, for sanity checks:
/// resonant pickup S(omega_0) * 4*pi plus the zero-frequency floor F1(0).
inline double overlap_t1_narrow_line(Time tau_c, const RelaxationFilter& filter) {
    const NoiseSpectrum spectrum(tau_c);
    const double wm = filter.omega_minus().rad_s();
    const double wp = filter.omega_plus().rad_s();
    const double resonant = 2.0 * constants::pi * (spectrum(wm) + spectrum(wp));
    const double floor = filter(0.0);  // times int S = 1
    return resonant + floor;
}

/// Exact OU echo coherence exponent with Delta^2 = gamma^2 <B^2>:
///   chi(t) = Delta^2 tau_c^2 [t/tau_c - 3 + 4 e^{-t/(2 tau_c)} - e^{-t/tau_c}].
/// Limits: Delta^2 t^3 / (12 tau_c) for t << tau_c, Delta^2 tau_c t for t >> tau_c.
inline double closed_form_ou_echo(double delta_sq, Time tau_c, Time t) {
    if (delta_sq < 0.0)
        throw domain_error("closed_form_ou_echo requires Delta^2 >= 0");
    if (t.s() == 0.0) return 0.0;
    return kappa * delta_sq * t.s() * overlap_echo(tau_c, t);
}

/// chi(t) = kappa gamma^2 <B^2> t int S F2; identical to closed_form_ou_echo
/// when Delta^2 = gamma^2 <B^2>.
inline double coherence_exponent_echo(double b_rms_sq, Time tau_c, Time t,
                                      double gyromagnetic = constants::gamma_nv) {
    if (t.s() == 0.0) return 0.0;
    return kappa * gyromagnetic * gyromagnetic * b_rms_sq * t.s() * overlap_echo(tau_c, t);
}

/// Bath-induced echo dephasing rate at a fixed total evolution time tau:
/// chi(tau)/tau, so that exp(-chi) = exp(-rate * tau).
inline double echo_rate(double b_rms_sq, Time tau_c, Time tau,
                        double gyromagnetic = constants::gamma_nv) {
    return kappa * gyromagnetic * gyromagnetic * b_rms_sq * overlap_echo(tau_c, tau);
}

/// Bath-induced longitudinal rate.
inline double t1_rate(double b_rms_sq, Time tau_c, const RelaxationFilter& filter,
                      double gyromagnetic = constants::gamma_nv) {
    return kappa * gyromagnetic * gyromagnetic * b_rms_sq * overlap_t1(tau_c, filter);
}

enum class Regime { slow, intermediate, fast };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::slow: return "slow";
        case Regime::fast: return "fast";
        default: return "intermediate";
    }
}

struct SensorParams {
    RelaxationFilter filter;         ///< transition frequencies + T2*
    Time echo_tau;                   ///< total echo evolution time the T2 rate refers to
    double intrinsic_t1_rate = 0.0;  ///< s^-1, bath-free
    double intrinsic_t2_rate = 0.0;  ///< s^-1, bath-free
    double gyromagnetic = constants::gamma_nv;

    void validate() const {
        if (echo_tau.s() <= 0.0)
            throw domain_error("sensor echo_tau must be > 0");
        if (intrinsic_t1_rate < 0.0 || intrinsic_t2_rate < 0.0)
            throw domain_error("intrinsic rates must be >= 0");
        if (gyromagnetic <= 0.0)
            throw domain_error("gyromagnetic ratio must be > 0");
    }
};

struct RelaxationPrediction {
    Time t1 = Time::seconds(0.0);           ///< 1 / (intrinsic_1 + bath_1)
    Time t2_rate = Time::seconds(0.0);      ///< 1 / (intrinsic_2 + bath_2(echo_tau))
    Time t2_coherence = Time::seconds(0.0); ///< solves intrinsic_2 t + chi_bath(t) = 1
    double bath_t1_rate = 0.0;
    double bath_t2_rate = 0.0;
    double overlap_1 = 0.0;
    double overlap_2 = 0.0;
    Time tau_c = Time::seconds(0.0);
    Regime regime = Regime::intermediate;
};

/// Forward model: bath + sensor -> T1 and T2.
inline RelaxationPrediction predict_rates(const BathParams& bath, const SensorParams& sensor,
                                          Temperature temp) {
    sensor.validate();
    const Time tau_c = bath.tau_c(temp);
    const double g2 = sensor.gyromagnetic * sensor.gyromagnetic;
    const double b2 = bath.b_rms_sq();

    RelaxationPrediction out;
    out.tau_c = tau_c;
    out.overlap_1 = overlap_t1(tau_c, sensor.filter);
    out.overlap_2 = overlap_echo(tau_c, sensor.echo_tau);
    out.bath_t1_rate = kappa * g2 * b2 * out.overlap_1;
    out.bath_t2_rate = kappa * g2 * b2 * out.overlap_2;

    const double rate1 = sensor.intrinsic_t1_rate + out.bath_t1_rate;
    const double rate2 = sensor.intrinsic_t2_rate + out.bath_t2_rate;
    if (rate1 <= 0.0 || rate2 <= 0.0)
        throw numerical_error("total relaxation rate is zero; relaxation time unbounded");
    out.t1 = Time::seconds(1.0 / rate1);
    out.t2_rate = Time::seconds(1.0 / rate2);

    // 1/e coherence time: chi_total(t) = intrinsic_2 t + chi_bath(t) = 1.
    auto chi_total = [&](double t) {
        return sensor.intrinsic_t2_rate * t +
               kappa * g2 * b2 * t * overlap_echo(tau_c, Time::seconds(t)) - 1.0;
    };
    double lo = 1e-12, hi = 1e-12;
    while (chi_total(hi) < 0.0 && hi < 1e7) hi *= 2.0;
    if (chi_total(hi) < 0.0)
        throw numerical_error("coherence never decays to 1/e within 1e7 s");
    while (chi_total(lo) > 0.0 && lo > 1e-18) lo /= 2.0;
    out.t2_coherence = Time::seconds(roots::brent(chi_total, lo, hi));

    const double ratio = tau_c.s() / out.t2_coherence.s();
    out.regime = ratio > 10.0 ? Regime::slow : (ratio < 0.1 ? Regime::fast : Regime::intermediate);
    return out;
}

/// Echo envelope exp(-intrinsic_2 t - chi_bath(t)), in [0, 1].
inline double echo_envelope(const BathParams& bath, const SensorParams& sensor, Temperature temp,
                            Time t) {
    const Time tau_c = bath.tau_c(temp);
    const double chi =
        coherence_exponent_echo(bath.b_rms_sq(), tau_c, t, sensor.gyromagnetic) +
        sensor.intrinsic_t2_rate * t.s();
    return std::exp(-chi);
}

} // namespace spinbath
