#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "spinbath/geometry.hpp"

using namespace spinbath;
using namespace spinbath::geometry;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("cap volume special cases", "[geometry]") {
    const double r = 20e-9;
    // hemisphere: (2/3) pi R^3
    CHECK_THAT(cap_volume(r, r), WithinRel(2.0 * constants::pi * r * r * r / 3.0, 1e-14));
    CHECK_THAT(cap_volume(r, r), WithinRel(1.6755160819145568e-23, 1e-12));
    // full sphere when h = 2R
    CHECK_THAT(cap_volume(r, 2.0 * r), WithinRel(4.0 * constants::pi * r * r * r / 3.0, 1e-14));
    // thin cap: pi R h^2 to leading order
    const double h = 1e-12;
    CHECK_THAT(cap_volume(r, h), WithinRel(constants::pi * r * h * h, 1e-4));
    CHECK_THROWS_AS(cap_volume(-r, r), domain_error);
    CHECK_THROWS_AS(cap_volume(r, 3.0 * r), domain_error);
}

TEST_CASE("molecule counts at millimolar concentration", "[geometry]") {
    const double v_hemi = cap_volume(20e-9, 20e-9);
    // 1 mM = 1 mol/m^3
    CHECK_THAT(molecule_count(v_hemi, 1.0), WithinRel(10.090193690933152, 1e-12));
    CHECK_THAT(molecule_count(v_hemi, 2.0), WithinRel(2.0 * 10.090193690933152, 1e-12));
    // inversion: volume that holds 240 molecules at 1 mM
    CHECK_THAT(implied_volume(240.0, 1.0), WithinRel(3.985293761217232e-22, 1e-12));
    CHECK_THAT(molecule_count(implied_volume(240.0, 1.0), 1.0), WithinRel(240.0, 1e-12));
    CHECK_THROWS_AS(molecule_count(v_hemi, -1.0), domain_error);
    CHECK_THROWS_AS(implied_volume(240.0, 0.0), domain_error);
}

TEST_CASE("point dipole field on axis and in the plane", "[geometry]") {
    const double m = default_moment_bohr() * constants::bohr_magneton;
    const double r = 10e-9;
    // on the moment axis: B = mu0/(4 pi) 2 m / r^3, along the moment
    const auto on_axis = point_dipole_field({0.0, 0.0, r}, {0.0, 0.0, m});
    CHECK_THAT(on_axis[2], WithinRel(7.183617321073715e-06, 1e-12));
    CHECK_THAT(on_axis[0], WithinAbs(0.0, 1e-20));
    // equatorial plane: half the axial magnitude, anti-parallel
    const auto equator = point_dipole_field({r, 0.0, 0.0}, {0.0, 0.0, m});
    CHECK_THAT(equator[2], WithinRel(-0.5 * on_axis[2], 1e-12));
    CHECK_THROWS_AS(point_dipole_field({0.0, 0.0, 0.0}, {0.0, 0.0, m}), domain_error);
}

TEST_CASE("default moment", "[geometry]") {
    // g sqrt(S(S+1)) with g = 2, S = 3/2
    CHECK_THAT(default_moment_bohr(), WithinRel(3.872983346207417, 1e-14));
}

TEST_CASE("dipolar sampling is deterministic and converges", "[geometry]") {
    SensingGeometry geom;  // defaults: 20 nm hemisphere cap, 8 nm depth, 1 mM
    const auto a = dipolar_b_rms(geom, default_moment_bohr(), 20000, 7);
    const auto b = dipolar_b_rms(geom, default_moment_bohr(), 20000, 7);
    CHECK(a.b_sq_mean_t2 == b.b_sq_mean_t2);  // same seed, bit-identical
    CHECK(a.b_rms_t > 0.0);
    // ball(20 nm) around the 8 nm deep sensor clips the hemisphere to the
    // cap above the surface: h = 12 nm, ratio 2304 pi / (2/3 pi 20^3) = 0.432
    CHECK_THAT(a.fraction_in_range, Catch::Matchers::WithinAbs(0.432, 0.012));

    const auto c = dipolar_b_rms(geom, default_moment_bohr(), 20000, 8);
    CHECK(c.b_sq_mean_t2 != a.b_sq_mean_t2);
    // seeds agree within their combined errors
    const double band = 4.0 * std::hypot(a.b_sq_err_t2, c.b_sq_err_t2);
    CHECK_THAT(c.b_sq_mean_t2, WithinAbs(a.b_sq_mean_t2, band));
}

TEST_CASE("dipolar error shrinks with sample count", "[geometry]") {
    SensingGeometry geom;
    const auto small = dipolar_b_rms(geom, default_moment_bohr(), 10000, 3);
    const auto large = dipolar_b_rms(geom, default_moment_bohr(), 160000, 3);
    // 16x samples: standard error down by ~4; allow a wide statistical band
    const double shrink = small.b_sq_err_t2 / large.b_sq_err_t2;
    CHECK(shrink > 2.0);
    CHECK(shrink < 8.0);
    const double band = 4.0 * std::hypot(small.b_sq_err_t2, large.b_sq_err_t2);
    CHECK_THAT(large.b_sq_mean_t2, WithinAbs(small.b_sq_mean_t2, band));
}

TEST_CASE("mean square field scales linearly with molecule count", "[geometry]") {
    SensingGeometry geom;
    const auto base = dipolar_b_rms(geom, default_moment_bohr(), 40000, 5, 64.0);
    const auto scaled = dipolar_b_rms(geom, default_moment_bohr(), 40000, 5, 1.0);
    // same seed, same sample stream: the count is a pure prefactor
    CHECK_THAT(base.b_sq_mean_t2, WithinRel(64.0 * scaled.b_sq_mean_t2, 1e-12));
    CHECK_THAT(base.b_rms_t, WithinRel(8.0 * scaled.b_rms_t, 1e-12));
    CHECK(base.molecules_used == 64.0);
}

TEST_CASE("moment scaling is quadratic in the mean square", "[geometry]") {
    SensingGeometry geom;
    const auto m1 = dipolar_b_rms(geom, 2.0, 40000, 5);
    const auto m2 = dipolar_b_rms(geom, 4.0, 40000, 5);
    CHECK_THAT(m2.b_sq_mean_t2, WithinRel(4.0 * m1.b_sq_mean_t2, 1e-12));
}

TEST_CASE("geometry validation", "[geometry]") {
    SensingGeometry geom;
    geom.cap_height_m = 50e-9;  // above 2R
    CHECK_THROWS_AS(geom.validate(), domain_error);
    geom = SensingGeometry{};
    geom.nv_depth_m = 0.0;
    CHECK_THROWS_AS(geom.validate(), domain_error);
    geom = SensingGeometry{};
    geom.sensing_radius_m = -1.0;
    CHECK_THROWS_AS(geom.validate(), domain_error);
    geom = SensingGeometry{};
    CHECK_THROWS_AS(dipolar_b_rms(geom, default_moment_bohr(), 5000, 1), domain_error);
    CHECK_THROWS_AS(dipolar_b_rms(geom, 0.0, 20000, 1), domain_error);
}
