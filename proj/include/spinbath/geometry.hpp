#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "spinbath/constants.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/rng.hpp"

// Sensing-volume bookkeeping for a spherical-cap droplet residue sitting on
// the surface above the sensor, and a Monte Carlo estimator of the dipolar
// mean-square field the molecules in the cap produce at the sensor.

namespace spinbath::geometry {

/// Cap volume pi h^2 (3R - h) / 3 for a cap of height h cut from a sphere of
/// radius R. h = R is a hemisphere, h = 2R the full sphere.
inline double cap_volume(double sphere_radius_m, double cap_height_m) {
    if (!(sphere_radius_m > 0.0))
        throw domain_error("cap_volume: sphere radius must be > 0");
    if (!(cap_height_m > 0.0) || cap_height_m > 2.0 * sphere_radius_m)
        throw domain_error("cap_volume: cap height must satisfy 0 < h <= 2R");
    return constants::pi * cap_height_m * cap_height_m *
           (3.0 * sphere_radius_m - cap_height_m) / 3.0;
}

/// Expected molecule count = concentration * N_A * volume.
inline double molecule_count(double volume_m3, double concentration_mol_m3) {
    if (volume_m3 < 0.0 || concentration_mol_m3 < 0.0)
        throw domain_error("molecule_count: inputs must be >= 0");
    return concentration_mol_m3 * constants::n_avogadro * volume_m3;
}

/// Inversion: the volume a given count implies at a given concentration.
inline double implied_volume(double target_count, double concentration_mol_m3) {
    if (target_count < 0.0) throw domain_error("implied_volume: count must be >= 0");
    if (!(concentration_mol_m3 > 0.0))
        throw domain_error("implied_volume: concentration must be > 0");
    return target_count / (concentration_mol_m3 * constants::n_avogadro);
}

struct SensingGeometry {
    double nv_depth_m = 8e-9;         ///< sensor depth below the cap base plane
    double sensing_radius_m = 20e-9;  ///< molecules farther from the sensor are ignored
    double cap_radius_m = 20e-9;      ///< R of the generating sphere
    double cap_height_m = 20e-9;      ///< h, 0 < h <= 2R
    double concentration_mol_m3 = 1.0;  ///< 1 mol/m^3 = 1 mM

    void validate() const {
        if (!(nv_depth_m > 0.0))
            throw domain_error("geometry: sensor depth must be > 0 (sensor inside the cap "
                               "is degenerate)");
        if (!(sensing_radius_m > 0.0)) throw domain_error("geometry: sensing radius must be > 0");
        if (!(cap_radius_m > 0.0)) throw domain_error("geometry: cap radius must be > 0");
        if (!(cap_height_m > 0.0) || cap_height_m > 2.0 * cap_radius_m)
            throw domain_error("geometry: cap height must satisfy 0 < h <= 2R");
        if (concentration_mol_m3 < 0.0)
            throw domain_error("geometry: concentration must be >= 0");
    }

    double volume_m3() const { return cap_volume(cap_radius_m, cap_height_m); }
    double expected_molecules() const { return molecule_count(volume_m3(), concentration_mol_m3); }
};

/// Field of a point dipole with moment m (A m^2) at displacement r from the
/// dipole to the observation point:
///   B = (mu0 / 4 pi) [3 (m . rhat) rhat - m] / r^3.
inline std::array<double, 3> point_dipole_field(const std::array<double, 3>& r_m,
                                                const std::array<double, 3>& moment_a_m2) {
    const double r2 = r_m[0] * r_m[0] + r_m[1] * r_m[1] + r_m[2] * r_m[2];
    if (r2 <= 0.0) throw domain_error("point_dipole_field: zero displacement");
    const double r = std::sqrt(r2);
    const std::array<double, 3> rhat{r_m[0] / r, r_m[1] / r, r_m[2] / r};
    const double mdotr =
        moment_a_m2[0] * rhat[0] + moment_a_m2[1] * rhat[1] + moment_a_m2[2] * rhat[2];
    const double pref = constants::mu0 / (4.0 * constants::pi) / (r2 * r);
    return {pref * (3.0 * mdotr * rhat[0] - moment_a_m2[0]),
            pref * (3.0 * mdotr * rhat[1] - moment_a_m2[1]),
            pref * (3.0 * mdotr * rhat[2] - moment_a_m2[2])};
}

struct DipolarResult {
    double b_sq_mean_t2 = 0.0;  ///< <B^2> along the sensor axis, T^2
    double b_sq_err_t2 = 0.0;   ///< standard error of the mean
    double b_rms_t = 0.0;       ///< sqrt(<B^2>)
    double b_rms_err_t = 0.0;   ///< delta-method error on the RMS
    double fraction_in_range = 0.0;  ///< sampled fraction inside the sensing radius
    double molecules_used = 0.0;     ///< molecule count the estimate was scaled by
};

/// Monte Carlo <B^2>: molecules uniform in the cap, moments isotropic,
/// independent and zero-mean, so the ensemble mean square is the molecule
/// count times the per-molecule mean squared axial field. Molecules beyond
/// sensing_radius from the sensor contribute zero. Deterministic per seed.
/// `fixed_count` overrides the concentration-derived molecule count (useful
/// for scaling studies at constant count).
inline DipolarResult dipolar_b_rms(const SensingGeometry& geom, double moment_bohr,
                                   std::size_t n_samples, std::uint64_t seed,
                                   double fixed_count = -1.0) {
    geom.validate();
    if (!(moment_bohr > 0.0)) throw domain_error("dipolar_b_rms: moment must be > 0");
    if (n_samples < 10000)
        throw domain_error("dipolar_b_rms: need >= 1e4 samples, got " +
                           std::to_string(n_samples));

    const double n_mol = fixed_count >= 0.0 ? fixed_count : geom.expected_molecules();
    const double moment = moment_bohr * constants::bohr_magneton;
    const double r_sphere = geom.cap_radius_m;
    const double h = geom.cap_height_m;
    const double base_radius = std::sqrt(h * (2.0 * r_sphere - h));
    const double z_center = h - r_sphere;  // sphere center; cap = sphere cut by z >= 0
    const double sense2 = geom.sensing_radius_m * geom.sensing_radius_m;

    rng::Stream stream(seed, 0);
    rng::KahanSum sum, sum_sq;
    std::size_t in_range = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        // Uniform point in the cap by rejection from the bounding cylinder.
        double x, y, z;
        for (;;) {
            x = (2.0 * stream.uniform() - 1.0) * base_radius;
            y = (2.0 * stream.uniform() - 1.0) * base_radius;
            z = stream.uniform() * h;
            const double dz = z - z_center;
            if (x * x + y * y + dz * dz <= r_sphere * r_sphere) break;
        }
        // Isotropic unit moment.
        const double mz = 2.0 * stream.uniform() - 1.0;
        const double phi = 2.0 * constants::pi * stream.uniform();
        const double mr = std::sqrt(std::max(0.0, 1.0 - mz * mz));
        const std::array<double, 3> m{moment * mr * std::cos(phi), moment * mr * std::sin(phi),
                                      moment * mz};
        // Sensor at (0, 0, -depth); displacement from molecule to sensor.
        const std::array<double, 3> r{-x, -y, -geom.nv_depth_m - z};
        const double d2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
        double w = 0.0;
        if (d2 <= sense2) {
            ++in_range;
            const auto b = point_dipole_field(r, m);
            w = n_mol * b[2] * b[2];
        }
        sum.add(w);
        sum_sq.add(w * w);
    }
    const double n = static_cast<double>(n_samples);
    DipolarResult out;
    out.molecules_used = n_mol;
    out.fraction_in_range = static_cast<double>(in_range) / n;
    out.b_sq_mean_t2 = sum.value() / n;
    const double var = std::max(0.0, sum_sq.value() / n - out.b_sq_mean_t2 * out.b_sq_mean_t2);
    out.b_sq_err_t2 = std::sqrt(var / n);
    out.b_rms_t = std::sqrt(std::max(0.0, out.b_sq_mean_t2));
    out.b_rms_err_t = out.b_rms_t > 0.0 ? out.b_sq_err_t2 / (2.0 * out.b_rms_t) : 0.0;
    return out;
}

/// Default effective moment: g sqrt(S(S+1)) with g = 2, S = 3/2.
inline double default_moment_bohr() { return 2.0 * std::sqrt(1.5 * 2.5); }

} // namespace spinbath::geometry
