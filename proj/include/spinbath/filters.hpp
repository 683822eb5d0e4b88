#pragma once

#include <cmath>

#include "spinbath/constants.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/units.hpp"

// Sequence filter functions. Both are defined on omega >= 0 (one-sided
// convention, matching the NSD normalization).

namespace spinbath {

/// Hahn-echo filter, F2(omega) = (32/tau) sin^4(omega tau / 4) / omega^2.
/// Integral over [0, inf) is 2*pi for every tau; F2(0) = 0.
class EchoFilter {
public:
    explicit EchoFilter(Time total_tau) : tau_(total_tau) {
        if (total_tau.s() <= 0.0)
            throw domain_error("EchoFilter requires tau > 0");
    }

    Time tau() const { return tau_; }

    double operator()(double omega_rad_s) const {
        if (omega_rad_s < 0.0)
            throw domain_error("filter requires omega >= 0");
        const double tau = tau_.s();
        const double x = omega_rad_s * tau / 4.0;
        // Series below the switch point keeps the removable singularity smooth:
        // F2 = (omega^2 tau^3 / 8) (1 - x^2/1.5 + ...) near omega = 0.
        if (x < 1e-4) {
            const double s2 = x * x;
            return omega_rad_s * omega_rad_s * tau * tau * tau / 8.0 * (1.0 - 2.0 * s2 / 3.0);
        }
        const double s = std::sin(x);
        const double s2 = s * s;
        return 32.0 / tau * (s2 * s2) / (omega_rad_s * omega_rad_s);
    }

    /// Zeros sit at omega = 4*pi*k/tau; used for quadrature panel splits.
    double zero(int k) const { return 4.0 * constants::pi * static_cast<double>(k) / tau_.s(); }

private:
    Time tau_;
};

/// Free-relaxation filter: two Lorentzians of HWHM 2*pi/T2* centered on the
/// transition frequencies omega_minus, omega_plus.
///   F1(omega) = sum_i (4*pi/T2*) / ((2*pi/T2*)^2 + (omega - omega_i)^2)
/// Integral over (-inf, inf) per line is 2*pi; over [0, inf) with both lines
/// it approaches 4*pi when omega_i >> 2*pi/T2*.
class RelaxationFilter {
public:
    RelaxationFilter(AngularFrequency omega_minus, AngularFrequency omega_plus, Time t2_star)
        : omega_minus_(omega_minus), omega_plus_(omega_plus), t2_star_(t2_star) {
        if (t2_star.s() <= 0.0)
            throw domain_error("RelaxationFilter requires T2* > 0");
        if (omega_minus.rad_s() < 0.0 || omega_plus.rad_s() < 0.0)
            throw domain_error("transition frequencies must be >= 0");
    }

    AngularFrequency omega_minus() const { return omega_minus_; }
    AngularFrequency omega_plus() const { return omega_plus_; }
    Time t2_star() const { return t2_star_; }

    /// Linewidth (HWHM), rad/s.
    double gamma() const { return 2.0 * constants::pi / t2_star_.s(); }

    double operator()(double omega_rad_s) const {
        if (omega_rad_s < 0.0)
            throw domain_error("filter requires omega >= 0");
        const double g = gamma();
        const double dm = omega_rad_s - omega_minus_.rad_s();
        const double dp = omega_rad_s - omega_plus_.rad_s();
        return 2.0 * g / (g * g + dm * dm) + 2.0 * g / (g * g + dp * dp);
    }

private:
    AngularFrequency omega_minus_;
    AngularFrequency omega_plus_;
    Time t2_star_;
};

/// Both transitions degenerate at the zero-field splitting.
inline RelaxationFilter zero_field_relaxation_filter(Time t2_star) {
    const auto w0 = AngularFrequency::rad_per_s(constants::omega_nv_zero_field);
    return RelaxationFilter(w0, w0, t2_star);
}

} // namespace spinbath
