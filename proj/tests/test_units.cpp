#include <catch2/catch_amalgamated.hpp>

#include "spinbath/constants.hpp"
#include "spinbath/units.hpp"

using namespace spinbath;
using Catch::Matchers::WithinRel;

TEST_CASE("physical constants", "[units]") {
    // SI-exact values; the derived wavenumber scale follows from h*c.
    CHECK(constants::k_boltzmann == 1.380649e-23);
    CHECK(constants::h_planck == 6.62607015e-34);
    CHECK(constants::n_avogadro == 6.02214076e23);
    CHECK_THAT(constants::joule_per_wavenumber, WithinRel(1.9864458571489285e-23, 1e-15));
    CHECK_THAT(constants::k_boltzmann_wavenumber, WithinRel(0.6950348004861275, 1e-14));
    CHECK_THAT(constants::gamma_nv, WithinRel(2.0 * constants::pi * 28.024e9, 1e-15));
    CHECK_THAT(constants::omega_nv_zero_field, WithinRel(2.0 * constants::pi * 2.870e9, 1e-15));
}

TEST_CASE("time conversions", "[units]") {
    CHECK_THAT(Time::us(5.0).s(), WithinRel(5e-6, 1e-15));
    CHECK_THAT(Time::ms(0.35).s(), WithinRel(0.35e-3, 1e-15));
    CHECK_THAT(Time::ns(12.0).s(), WithinRel(12e-9, 1e-15));
    CHECK_THAT(Time::us(5.0).as_us(), WithinRel(5.0, 1e-15));
    CHECK_THAT(Time::seconds(0.002).as_ms(), WithinRel(2.0, 1e-15));
    CHECK_THROWS_AS(Time::seconds(-1.0), domain_error);
    CHECK_THROWS_AS(Time::seconds(std::nan("")), domain_error);
    CHECK(Time::seconds(0.0).s() == 0.0);
}

TEST_CASE("temperature and field", "[units]") {
    CHECK(Temperature::kelvin(296.0).k() == 296.0);
    CHECK_THROWS_AS(Temperature::kelvin(-0.1), domain_error);
    CHECK_THAT(MagneticField::gauss(20.0).t(), WithinRel(2e-3, 1e-15));
    CHECK_THAT(MagneticField::millitesla(2.0).t(), WithinRel(2e-3, 1e-15));
    CHECK_THAT(MagneticField::tesla(2e-3).as_gauss(), WithinRel(20.0, 1e-15));
    // Signed fields are legal; only squared quantities are sign-checked later.
    CHECK_THAT(MagneticField::gauss(-5.0).t(), WithinRel(-5e-4, 1e-15));
}

TEST_CASE("angular frequency applies 2 pi", "[units]") {
    CHECK_THAT(AngularFrequency::from_mhz(1.0).rad_s(),
               WithinRel(2.0 * constants::pi * 1e6, 1e-15));
    CHECK_THAT(AngularFrequency::from_ghz(2.87).as_hz(), WithinRel(2.87e9, 1e-12));
    CHECK(AngularFrequency::rad_per_s(-3.0).rad_s() == -3.0);
}

TEST_CASE("energy conversions", "[units]") {
    const Energy ea = Energy::wavenumber(230.0);
    CHECK_THAT(ea.j(), WithinRel(4.5688254714425356e-21, 1e-14));
    CHECK_THAT(ea.as_mev(), WithinRel(28.51636563963606, 1e-14));
    CHECK_THAT(Energy::mev(28.51636563963606).as_wavenumber(), WithinRel(230.0, 1e-12));
    CHECK_THAT(convert_energy(1.0, EnergyUnit::Wavenumber, EnergyUnit::Joule),
               WithinRel(1.9864458571489285e-23, 1e-14));
    CHECK_THAT(convert_energy(230.0, "cm-1", "meV"), WithinRel(28.51636563963606, 1e-14));
    CHECK_THROWS_AS(parse_energy_unit("eV"), config_error);
}

TEST_CASE("thermal energy ratio", "[units]") {
    const Energy ea = Energy::wavenumber(230.0);
    CHECK_THAT(thermal_energy_ratio(ea, Temperature::kelvin(296.0)),
               WithinRel(1.1179685196821105, 1e-13));
    CHECK_THAT(thermal_energy_ratio(ea, Temperature::kelvin(5.0)),
               WithinRel(66.18373636518095, 1e-13));
    CHECK_THROWS_AS(thermal_energy_ratio(ea, Temperature::kelvin(0.0)), domain_error);
}

TEST_CASE("quantity parsing", "[units]") {
    CHECK_THAT(parse_time("5 us").s(), WithinRel(5e-6, 1e-15));
    CHECK_THAT(parse_time("0.35 ms").s(), WithinRel(0.35e-3, 1e-15));
    CHECK(parse_time("2s").s() == 2.0);  // space is optional
    CHECK(parse_temperature("296 K").k() == 296.0);
    CHECK_THAT(parse_field("20 G").t(), WithinRel(2e-3, 1e-15));
    CHECK(parse_field("0.05 T").t() == 0.05);
    CHECK_THAT(parse_energy("230 cm-1").as_wavenumber(), WithinRel(230.0, 1e-13));
    CHECK_THAT(parse_frequency("1 MHz").rad_s(), WithinRel(2.0 * constants::pi * 1e6, 1e-15));

    CHECK_THROWS_AS(parse_time("5 parsecs"), config_error);
    CHECK_THROWS_AS(parse_time("fast"), config_error);
    CHECK_THROWS_AS(parse_temperature("296 C"), config_error);
    CHECK_THROWS_AS(parse_field("20 gauss"), config_error);
    CHECK_THROWS_AS(parse_frequency("2.87 THz"), config_error);
    CHECK_THROWS_AS(parse_time("-5 us"), domain_error);
}
