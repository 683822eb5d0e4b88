#pragma once

#include <cctype>
#include <cmath>
#include <string>
#include <string_view>

#include "spinbath/constants.hpp"
#include "spinbath/errors.hpp"

// Unit-safe quantity wrappers. Canonical units are SI throughout the library
// (seconds, kelvin, tesla, joules, rad/s); every human-facing unit is converted
// exactly once at the boundary. All types are immutable value types.

namespace spinbath {

class Time {
public:
    static Time seconds(double v) {
        if (v < 0.0 || !std::isfinite(v))
            throw domain_error("Time must be finite and non-negative, got " + std::to_string(v) + " s");
        return Time(v);
    }
    static Time us(double v) { return seconds(v * 1e-6); }
    static Time ms(double v) { return seconds(v * 1e-3); }
    static Time ns(double v) { return seconds(v * 1e-9); }

    double s() const { return value_; }
    double as_us() const { return value_ * 1e6; }
    double as_ms() const { return value_ * 1e3; }

private:
    explicit Time(double v) : value_(v) {}
    double value_;
};

class Temperature {
public:
    static Temperature kelvin(double v) {
        if (v < 0.0 || !std::isfinite(v))
            throw domain_error("Temperature must be finite and non-negative, got " + std::to_string(v) + " K");
        return Temperature(v);
    }
    double k() const { return value_; }

private:
    explicit Temperature(double v) : value_(v) {}
    double value_;
};

/// Angular frequency in rad/s. Ordinary-frequency constructors apply the 2*pi.
class AngularFrequency {
public:
    static AngularFrequency rad_per_s(double v) {
        if (!std::isfinite(v))
            throw domain_error("AngularFrequency must be finite");
        return AngularFrequency(v);
    }
    static AngularFrequency from_hz(double v) { return rad_per_s(2.0 * constants::pi * v); }
    static AngularFrequency from_mhz(double v) { return from_hz(v * 1e6); }
    static AngularFrequency from_ghz(double v) { return from_hz(v * 1e9); }

    double rad_s() const { return value_; }
    double as_hz() const { return value_ / (2.0 * constants::pi); }

private:
    explicit AngularFrequency(double v) : value_(v) {}
    double value_;
};

/// Signed magnetic field in tesla. Squared-field quantities are validated
/// non-negative where they appear (BathParams).
class MagneticField {
public:
    static MagneticField tesla(double v) {
        if (!std::isfinite(v))
            throw domain_error("MagneticField must be finite");
        return MagneticField(v);
    }
    static MagneticField gauss(double v) { return tesla(v * 1e-4); }
    static MagneticField millitesla(double v) { return tesla(v * 1e-3); }

    double t() const { return value_; }
    double as_gauss() const { return value_ * 1e4; }

private:
    explicit MagneticField(double v) : value_(v) {}
    double value_;
};

enum class EnergyUnit { Joule, Wavenumber, MilliEV };

class Energy {
public:
    static Energy joules(double v) {
        if (!std::isfinite(v)) throw domain_error("Energy must be finite");
        return Energy(v);
    }
    static Energy wavenumber(double v) { return joules(v * constants::joule_per_wavenumber); }
    static Energy mev(double v) { return joules(v * constants::e_charge * 1e-3); }

    double j() const { return value_; }
    double as_wavenumber() const { return value_ / constants::joule_per_wavenumber; }
    double as_mev() const { return value_ / (constants::e_charge * 1e-3); }

private:
    explicit Energy(double v) : value_(v) {}
    double value_;
};

inline EnergyUnit parse_energy_unit(std::string_view token) {
    if (token == "J") return EnergyUnit::Joule;
    if (token == "cm-1") return EnergyUnit::Wavenumber;
    if (token == "meV") return EnergyUnit::MilliEV;
    throw config_error("unknown energy unit '" + std::string(token) + "' (expected J, cm-1 or meV)");
}

/// Convert a magnitude between energy units.
inline double convert_energy(double value, EnergyUnit from, EnergyUnit to) {
    Energy e = Energy::joules(0);
    switch (from) {
        case EnergyUnit::Joule: e = Energy::joules(value); break;
        case EnergyUnit::Wavenumber: e = Energy::wavenumber(value); break;
        case EnergyUnit::MilliEV: e = Energy::mev(value); break;
    }
    switch (to) {
        case EnergyUnit::Joule: return e.j();
        case EnergyUnit::Wavenumber: return e.as_wavenumber();
        case EnergyUnit::MilliEV: return e.as_mev();
    }
    throw config_error("unknown energy unit");
}

inline double convert_energy(double value, std::string_view from, std::string_view to) {
    return convert_energy(value, parse_energy_unit(from), parse_energy_unit(to));
}

/// E_a / (k_B T), dimensionless.
inline double thermal_energy_ratio(Energy e_a, Temperature t) {
    if (t.k() <= 0.0)
        throw domain_error("thermal_energy_ratio requires T > 0");
    return e_a.j() / (constants::k_boltzmann * t.k());
}

namespace detail {

struct ParsedQuantity {
    double value;
    std::string unit;
};

inline ParsedQuantity split_quantity(std::string_view text) {
    std::string s(text);
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw config_error("cannot parse quantity '" + s + "'");
    }
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    std::string unit = s.substr(pos);
    while (!unit.empty() && std::isspace(static_cast<unsigned char>(unit.back()))) unit.pop_back();
    return {v, unit};
}

} // namespace detail

/// Parse "5 us", "0.35 ms", "12 ns", "2 s".
inline Time parse_time(std::string_view text) {
    auto [v, u] = detail::split_quantity(text);
    if (u == "s") return Time::seconds(v);
    if (u == "ms") return Time::ms(v);
    if (u == "us") return Time::us(v);
    if (u == "ns") return Time::ns(v);
    throw config_error("unknown time unit '" + u + "' in '" + std::string(text) + "' (expected ns, us, ms or s)");
}

/// Parse "296 K".
inline Temperature parse_temperature(std::string_view text) {
    auto [v, u] = detail::split_quantity(text);
    if (u == "K") return Temperature::kelvin(v);
    throw config_error("unknown temperature unit '" + u + "' (expected K)");
}

/// Parse "20 G", "2 mT", "0.05 T".
inline MagneticField parse_field(std::string_view text) {
    auto [v, u] = detail::split_quantity(text);
    if (u == "T") return MagneticField::tesla(v);
    if (u == "mT") return MagneticField::millitesla(v);
    if (u == "G") return MagneticField::gauss(v);
    throw config_error("unknown field unit '" + u + "' (expected G, mT or T)");
}

/// Parse "230 cm-1", "28.52 meV".
inline Energy parse_energy(std::string_view text) {
    auto [v, u] = detail::split_quantity(text);
    switch (parse_energy_unit(u)) {
        case EnergyUnit::Joule: return Energy::joules(v);
        case EnergyUnit::Wavenumber: return Energy::wavenumber(v);
        case EnergyUnit::MilliEV: return Energy::mev(v);
    }
    throw config_error("unknown energy unit");
}

/// Parse an ordinary frequency ("1 MHz") into angular frequency.
inline AngularFrequency parse_frequency(std::string_view text) {
    auto [v, u] = detail::split_quantity(text);
    if (u == "Hz") return AngularFrequency::from_hz(v);
    if (u == "MHz") return AngularFrequency::from_mhz(v);
    if (u == "GHz") return AngularFrequency::from_ghz(v);
    throw config_error("unknown frequency unit '" + u + "' (expected Hz, MHz or GHz)");
}

} // namespace spinbath
