#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "spinbath/constants.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/units.hpp"

// The surface spin bath model: a stationary Gauss-Markov (Ornstein-Uhlenbeck)
// field with correlation time tau_c set by two-phonon Raman and Orbach
// relaxation channels, and a normalized Lorentzian noise spectral density.

namespace spinbath {

/// Raman + Orbach relaxation rate model:
///   1/tau_c = C * T^n + tau0_inv * exp(-E_a / (k_B T)).
/// C carries implicit K^-n units; both addends evaluate in s^-1.
struct RelaxationRateModel {
    double raman_c = 0.0;      ///< C, s^-1 K^-n
    double raman_n = 1.0;      ///< n, dimensionless
    double tau0_inv = 0.0;     ///< inverse attempt frequency, s^-1
    Energy barrier = Energy::joules(0.0);  ///< E_a

    void validate() const {
        if (raman_c < 0.0 || tau0_inv < 0.0)
            throw domain_error("rate model requires C >= 0 and tau0_inv >= 0");
        if (raman_n <= 0.0)
            throw domain_error("rate model requires Raman exponent n > 0");
        if (raman_c == 0.0 && tau0_inv == 0.0)
            throw domain_error("rate model needs at least one of C, tau0_inv strictly positive");
        if (barrier.j() < 0.0)
            throw domain_error("rate model requires E_a >= 0");
    }
};

/// Bulk pressed-powder parameters for the cobalt complex, used as a reference
/// parameter set in tests and sample configs.
inline RelaxationRateModel bulk_cobalt_rate_model() {
    return RelaxationRateModel{0.088, 3.65, 9.1e9, Energy::wavenumber(230.0)};
}

/// tau_c(T) from the Raman + Orbach sum.
inline Time correlation_time(const RelaxationRateModel& model, Temperature temp) {
    model.validate();
    const double t = temp.k();
    if (t <= 0.0)
        throw domain_error("correlation_time requires T > 0");
    const double raman = model.raman_c * std::pow(t, model.raman_n);
    const double orbach = model.tau0_inv * std::exp(-thermal_energy_ratio(model.barrier, temp));
    const double rate = raman + orbach;
    if (rate <= 0.0 || !std::isfinite(rate))
        throw numerical_error("total relaxation rate underflowed to zero; tau_c unbounded at T = " +
                              std::to_string(t) + " K");
    return Time::seconds(1.0 / rate);
}

/// Bath description: mean-square field at the sensor plus either a rate model
/// or a directly specified fixed correlation time (exactly one is active).
class BathParams {
public:
    static BathParams with_rate_model(RelaxationRateModel model, double b_rms_sq_t2) {
        model.validate();
        check_b2(b_rms_sq_t2);
        BathParams p;
        p.rate_model_ = model;
        p.b_rms_sq_ = b_rms_sq_t2;
        return p;
    }

    static BathParams with_fixed_tau_c(Time tau_c, double b_rms_sq_t2) {
        if (tau_c.s() <= 0.0)
            throw domain_error("fixed tau_c must be > 0");
        check_b2(b_rms_sq_t2);
        BathParams p;
        p.fixed_tau_c_ = tau_c;
        p.b_rms_sq_ = b_rms_sq_t2;
        return p;
    }

    bool has_rate_model() const { return rate_model_.has_value(); }
    const RelaxationRateModel& rate_model() const {
        if (!rate_model_) throw domain_error("bath has a fixed tau_c, not a rate model");
        return *rate_model_;
    }

    /// T^2 mean-square field.
    double b_rms_sq() const { return b_rms_sq_; }

    /// Correlation time; ignores T in fixed mode.
    Time tau_c(Temperature temp) const {
        if (fixed_tau_c_) return *fixed_tau_c_;
        return correlation_time(*rate_model_, temp);
    }

private:
    static void check_b2(double b2) {
        if (b2 < 0.0 || !std::isfinite(b2))
            throw domain_error("mean-square field must be finite and >= 0");
    }
    std::optional<RelaxationRateModel> rate_model_;
    std::optional<Time> fixed_tau_c_;
    double b_rms_sq_ = 0.0;
};

/// <B(0)B(t)> = <B^2> exp(-t / tau_c(T)), in T^2.
inline double autocorrelation(const BathParams& bath, Temperature temp, Time t) {
    const double tc = bath.tau_c(temp).s();
    return bath.b_rms_sq() * std::exp(-t.s() / tc);
}

/// One-sided normalized Lorentzian NSD. Integrates to exactly 1 over [0, inf).
class NoiseSpectrum {
public:
    explicit NoiseSpectrum(Time tau_c) : tau_c_(tau_c) {
        if (tau_c.s() <= 0.0)
            throw domain_error("NoiseSpectrum requires tau_c > 0");
    }

    Time tau_c() const { return tau_c_; }

    /// S(omega) = (2/pi) tau_c / (1 + tau_c^2 omega^2), in s/rad.
    double operator()(double omega_rad_s) const {
        if (omega_rad_s < 0.0)
            throw domain_error("nsd requires omega >= 0");
        const double tc = tau_c_.s();
        const double x = tc * omega_rad_s;
        return (2.0 / constants::pi) * tc / (1.0 + x * x);
    }

private:
    Time tau_c_;
};

inline double nsd(const NoiseSpectrum& spectrum, AngularFrequency omega) {
    return spectrum(omega.rad_s());
}

/// The Lorentzian corner 1/tau_c, rad/s.
inline AngularFrequency cutoff_frequency(const NoiseSpectrum& spectrum) {
    return AngularFrequency::rad_per_s(1.0 / spectrum.tau_c().s());
}

} // namespace spinbath
