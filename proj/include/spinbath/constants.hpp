#pragma once

#include <numbers>

// Physical constants, CODATA 2018. All values SI unless the name says otherwise.

namespace spinbath::constants {

inline constexpr double pi = std::numbers::pi_v<double>;

/// k_B [J/K] (exact since the 2019 SI redefinition).
inline constexpr double k_boltzmann = 1.380649e-23;

/// h [J s] (exact).
inline constexpr double h_planck = 6.62607015e-34;

/// c [m/s] (exact).
inline constexpr double c_light = 2.99792458e8;

/// Elementary charge [C] (exact).
inline constexpr double e_charge = 1.602176634e-19;

/// mu_0 [N/A^2].
inline constexpr double mu0 = 1.25663706212e-6;

/// Avogadro constant [1/mol] (exact).
inline constexpr double n_avogadro = 6.02214076e23;

/// Bohr magneton [J/T].
inline constexpr double bohr_magneton = 9.2740100783e-24;

/// 1 cm^-1 expressed in joules: h * c with c in cm/s.
inline constexpr double joule_per_wavenumber = h_planck * c_light * 100.0;

/// k_B expressed in cm^-1/K; evaluates to 0.6950348...
inline constexpr double k_boltzmann_wavenumber = k_boltzmann / joule_per_wavenumber;

/// NV electron gyromagnetic ratio, 2*pi * 28.024 GHz/T, in rad s^-1 T^-1.
inline constexpr double gamma_nv = 2.0 * pi * 28.024e9;

/// NV zero-field splitting, 2*pi * 2.870 GHz, in rad/s.
inline constexpr double omega_nv_zero_field = 2.0 * pi * 2.870e9;

} // namespace spinbath::constants
