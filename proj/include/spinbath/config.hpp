#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinbath/errors.hpp"
#include "spinbath/filters.hpp"
#include "spinbath/geometry.hpp"
#include "spinbath/inference.hpp"
#include "spinbath/montecarlo.hpp"
#include "spinbath/noise_model.hpp"
#include "spinbath/relaxation.hpp"
#include "spinbath/units.hpp"

// Strict JSON run configuration. Unknown keys anywhere in the document are
// rejected up front with their JSON-pointer path; physical quantities are
// unit-suffixed strings ("5 us", "18 G", "2.87 GHz", "230 cm-1").

namespace spinbath::config {

using nlohmann::json;

namespace detail {

inline void check_keys(const json& j, const std::string& path,
                       std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw config_error("config " + path + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) {
                ok = true;
                break;
            }
        if (!ok) throw config_error("config: unknown key '" + path + "/" + key + "'");
    }
}

inline const json* find(const json& j, const char* key) {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

inline std::string get_string(const json& j, const std::string& path, const char* key) {
    const json* v = find(j, key);
    if (!v) throw config_error("config: missing key '" + path + "/" + key + "'");
    if (!v->is_string())
        throw config_error("config: '" + path + "/" + key + "' must be a string");
    return v->get<std::string>();
}

inline std::optional<std::string> get_string_opt(const json& j, const std::string& path,
                                                 const char* key) {
    const json* v = find(j, key);
    if (!v) return std::nullopt;
    if (!v->is_string())
        throw config_error("config: '" + path + "/" + key + "' must be a string");
    return v->get<std::string>();
}

inline double get_number(const json& j, const std::string& path, const char* key) {
    const json* v = find(j, key);
    if (!v) throw config_error("config: missing key '" + path + "/" + key + "'");
    if (!v->is_number())
        throw config_error("config: '" + path + "/" + key + "' must be a number");
    return v->get<double>();
}

inline std::optional<double> get_number_opt(const json& j, const std::string& path,
                                            const char* key) {
    const json* v = find(j, key);
    if (!v) return std::nullopt;
    if (!v->is_number())
        throw config_error("config: '" + path + "/" + key + "' must be a number");
    return v->get<double>();
}

inline std::int64_t get_int(const json& j, const std::string& path, const char* key,
                            std::int64_t fallback) {
    const json* v = find(j, key);
    if (!v) return fallback;
    if (!v->is_number_integer())
        throw config_error("config: '" + path + "/" + key + "' must be an integer");
    return v->get<std::int64_t>();
}

inline bool get_bool(const json& j, const std::string& path, const char* key, bool fallback) {
    const json* v = find(j, key);
    if (!v) return fallback;
    if (!v->is_boolean())
        throw config_error("config: '" + path + "/" + key + "' must be a boolean");
    return v->get<bool>();
}

template <typename Parser>
auto parse_quantity(const json& j, const std::string& path, const char* key, Parser parser) {
    const auto text = get_string(j, path, key);
    try {
        return parser(text);
    } catch (const config_error& e) {
        throw config_error("config '" + path + "/" + key + "': " + e.what());
    }
}

/// Rates carry Hz-family suffixes but are plain inverse seconds (no 2*pi).
inline double parse_rate(std::string_view text) {
    auto [v, u] = spinbath::detail::split_quantity(text);
    if (u == "Hz") return v;
    if (u == "MHz") return v * 1e6;
    if (u == "GHz") return v * 1e9;
    throw config_error("unknown rate unit '" + std::string(u) + "' (expected Hz, MHz or GHz)");
}

} // namespace detail

struct BathBlock {
    std::optional<Time> fixed_tau_c;
    std::optional<RelaxationRateModel> rate_model;
    double b_rms_sq_t2 = 0.0;
    std::optional<Temperature> temperature;

    BathParams bath_params() const {
        if (fixed_tau_c) return BathParams::with_fixed_tau_c(*fixed_tau_c, b_rms_sq_t2);
        return BathParams::with_rate_model(*rate_model, b_rms_sq_t2);
    }

    Temperature temperature_or_default() const {
        if (temperature) return *temperature;
        if (rate_model)
            throw config_error("config '/bath': a rate_model needs 'temperature' to evaluate "
                               "tau_c");
        return Temperature::kelvin(295.0);
    }

    Time tau_c() const {
        if (fixed_tau_c) return *fixed_tau_c;
        return correlation_time(*rate_model, temperature_or_default());
    }
};

inline BathBlock parse_bath(const json& j) {
    const std::string path = "/bath";
    detail::check_keys(j, path, {"b_rms", "tau_c", "rate_model", "temperature"});
    BathBlock out;
    const double b = detail::parse_quantity(j, path, "b_rms", parse_field).t();
    out.b_rms_sq_t2 = b * b;
    const json* tau = detail::find(j, "tau_c");
    const json* model = detail::find(j, "rate_model");
    if ((tau == nullptr) == (model == nullptr))
        throw config_error("config '/bath': exactly one of 'tau_c' and 'rate_model' is required");
    if (tau) {
        out.fixed_tau_c = detail::parse_quantity(j, path, "tau_c", parse_time);
        if (out.fixed_tau_c->s() <= 0.0)
            throw config_error("config '/bath/tau_c': must be > 0");
    } else {
        const std::string mpath = path + "/rate_model";
        detail::check_keys(*model, mpath, {"raman_c", "raman_n", "tau0_inv", "barrier"});
        RelaxationRateModel m;
        m.raman_c = detail::get_number(*model, mpath, "raman_c");
        m.raman_n = detail::get_number(*model, mpath, "raman_n");
        m.tau0_inv = detail::parse_quantity(*model, mpath, "tau0_inv", detail::parse_rate);
        m.barrier = detail::parse_quantity(*model, mpath, "barrier", parse_energy);
        try {
            m.validate();
        } catch (const domain_error& e) {
            throw config_error("config '" + mpath + "': " + std::string(e.what()));
        }
        out.rate_model = m;
    }
    if (detail::find(j, "temperature"))
        out.temperature = detail::parse_quantity(j, path, "temperature", parse_temperature);
    return out;
}

struct SensorBlock {
    Time t2_star = Time::us(2.0);
    AngularFrequency omega_minus = AngularFrequency::rad_per_s(constants::omega_nv_zero_field);
    AngularFrequency omega_plus = AngularFrequency::rad_per_s(constants::omega_nv_zero_field);
    Time echo_tau = Time::us(1.0);
    double intrinsic_t1_rate = 0.0;
    double intrinsic_t2_rate = 0.0;

    RelaxationFilter filter() const { return RelaxationFilter(omega_minus, omega_plus, t2_star); }

    SensorParams sensor_params() const {
        return SensorParams{filter(), echo_tau, intrinsic_t1_rate, intrinsic_t2_rate,
                            constants::gamma_nv};
    }
};

inline SensorBlock parse_sensor(const json& j) {
    const std::string path = "/sensor";
    detail::check_keys(j, path,
                       {"t2_star", "omega_minus", "omega_plus", "echo_tau", "intrinsic_t1",
                        "intrinsic_t2"});
    SensorBlock out;
    out.t2_star = detail::parse_quantity(j, path, "t2_star", parse_time);
    out.echo_tau = detail::parse_quantity(j, path, "echo_tau", parse_time);
    if (detail::find(j, "omega_minus"))
        out.omega_minus = detail::parse_quantity(j, path, "omega_minus", parse_frequency);
    if (detail::find(j, "omega_plus"))
        out.omega_plus = detail::parse_quantity(j, path, "omega_plus", parse_frequency);
    if (detail::find(j, "intrinsic_t1")) {
        const Time t = detail::parse_quantity(j, path, "intrinsic_t1", parse_time);
        if (t.s() <= 0.0) throw config_error("config '/sensor/intrinsic_t1': must be > 0");
        out.intrinsic_t1_rate = 1.0 / t.s();
    }
    if (detail::find(j, "intrinsic_t2")) {
        const Time t = detail::parse_quantity(j, path, "intrinsic_t2", parse_time);
        if (t.s() <= 0.0) throw config_error("config '/sensor/intrinsic_t2': must be > 0");
        out.intrinsic_t2_rate = 1.0 / t.s();
    }
    return out;
}

struct NsdBlock {
    std::optional<AngularFrequency> omega_min;
    std::optional<AngularFrequency> omega_max;
    int n_points = 400;
};

inline NsdBlock parse_nsd(const json& j) {
    const std::string path = "/nsd";
    detail::check_keys(j, path, {"omega_min", "omega_max", "n_points"});
    NsdBlock out;
    if (detail::find(j, "omega_min"))
        out.omega_min = detail::parse_quantity(j, path, "omega_min", parse_frequency);
    if (detail::find(j, "omega_max"))
        out.omega_max = detail::parse_quantity(j, path, "omega_max", parse_frequency);
    out.n_points = static_cast<int>(detail::get_int(j, path, "n_points", 400));
    if (out.n_points < 2) throw config_error("config '/nsd/n_points': must be >= 2");
    return out;
}

struct EchoSweep {
    Time tau_min = Time::us(0.1);
    Time tau_max = Time::us(10.0);
    int n_tau = 10;
    bool log_spacing = true;

    std::vector<Time> grid() const {
        std::vector<Time> out;
        out.reserve(static_cast<std::size_t>(n_tau));
        for (int i = 0; i < n_tau; ++i) {
            const double f = n_tau == 1 ? 0.0
                                        : static_cast<double>(i) / static_cast<double>(n_tau - 1);
            const double t = log_spacing
                                 ? tau_min.s() * std::pow(tau_max.s() / tau_min.s(), f)
                                 : tau_min.s() + f * (tau_max.s() - tau_min.s());
            out.push_back(Time::seconds(t));
        }
        return out;
    }
};

struct McBlock {
    mc::TrajectoryConfig trajectory;
    std::optional<EchoSweep> echo;
    bool psd = false;
    std::size_t psd_segment = 0;
    int dump_trajectories = 0;
};

inline McBlock parse_mc(const json& j) {
    const std::string path = "/mc";
    detail::check_keys(j, path,
                       {"sigma_b", "tau_c", "dt", "n_steps", "n_trajectories", "echo", "psd",
                        "psd_segment", "dump_trajectories"});
    McBlock out;
    out.trajectory.sigma_b = detail::parse_quantity(j, path, "sigma_b", parse_field).t();
    out.trajectory.tau_c = detail::parse_quantity(j, path, "tau_c", parse_time);
    out.trajectory.dt = detail::parse_quantity(j, path, "dt", parse_time);
    const auto n_steps = detail::get_int(j, path, "n_steps", 1000);
    const auto n_traj = detail::get_int(j, path, "n_trajectories", 1000);
    if (n_steps < 1) throw config_error("config '/mc/n_steps': must be >= 1");
    if (n_traj < 2) throw config_error("config '/mc/n_trajectories': must be >= 2");
    out.trajectory.n_steps = static_cast<std::size_t>(n_steps);
    out.trajectory.n_trajectories = static_cast<std::size_t>(n_traj);
    if (const json* e = detail::find(j, "echo")) {
        const std::string epath = path + "/echo";
        detail::check_keys(*e, epath, {"tau_min", "tau_max", "n_tau", "spacing"});
        EchoSweep sweep;
        sweep.tau_min = detail::parse_quantity(*e, epath, "tau_min", parse_time);
        sweep.tau_max = detail::parse_quantity(*e, epath, "tau_max", parse_time);
        sweep.n_tau = static_cast<int>(detail::get_int(*e, epath, "n_tau", 10));
        if (sweep.n_tau < 1) throw config_error("config '/mc/echo/n_tau': must be >= 1");
        if (sweep.tau_max.s() < sweep.tau_min.s())
            throw config_error("config '/mc/echo': tau_max must be >= tau_min");
        const auto spacing = detail::get_string_opt(*e, epath, "spacing").value_or("log");
        if (spacing == "log") sweep.log_spacing = true;
        else if (spacing == "linear") sweep.log_spacing = false;
        else throw config_error("config '/mc/echo/spacing': must be 'log' or 'linear'");
        out.echo = sweep;
    }
    out.psd = detail::get_bool(j, path, "psd", false);
    const auto seg = detail::get_int(j, path, "psd_segment", 0);
    if (seg < 0) throw config_error("config '/mc/psd_segment': must be >= 0");
    out.psd_segment = static_cast<std::size_t>(seg);
    const auto dump = detail::get_int(j, path, "dump_trajectories", 0);
    if (dump < 0) throw config_error("config '/mc/dump_trajectories': must be >= 0");
    out.dump_trajectories = static_cast<int>(dump);
    try {
        out.trajectory.validate();
    } catch (const config_error& e) {
        throw config_error("config '/mc': " + std::string(e.what()));
    }
    return out;
}

struct GeometryBlock {
    geometry::SensingGeometry geom;
    double moment_bohr = geometry::default_moment_bohr();
    std::size_t n_samples = 100000;
    bool dipolar = false;
    std::optional<double> target_count;
};

inline GeometryBlock parse_geometry(const json& j) {
    const std::string path = "/geometry";
    detail::check_keys(j, path,
                       {"nv_depth_nm", "sensing_radius_nm", "cap_radius_nm", "cap_height_nm",
                        "concentration_mM", "moment_bohr", "n_samples", "dipolar",
                        "target_count"});
    GeometryBlock out;
    out.geom.nv_depth_m = detail::get_number(j, path, "nv_depth_nm") * 1e-9;
    out.geom.sensing_radius_m = detail::get_number(j, path, "sensing_radius_nm") * 1e-9;
    out.geom.cap_radius_m = detail::get_number(j, path, "cap_radius_nm") * 1e-9;
    out.geom.cap_height_m = detail::get_number(j, path, "cap_height_nm") * 1e-9;
    // 1 mM = 1 mol/m^3.
    out.geom.concentration_mol_m3 = detail::get_number(j, path, "concentration_mM");
    if (const auto m = detail::get_number_opt(j, path, "moment_bohr")) out.moment_bohr = *m;
    const auto n = detail::get_int(j, path, "n_samples", 100000);
    if (n < 1) throw config_error("config '/geometry/n_samples': must be >= 1");
    out.n_samples = static_cast<std::size_t>(n);
    out.dipolar = detail::get_bool(j, path, "dipolar", false);
    if (const auto t = detail::get_number_opt(j, path, "target_count")) out.target_count = *t;
    try {
        out.geom.validate();
    } catch (const domain_error& e) {
        throw config_error("config '/geometry': " + std::string(e.what()));
    }
    return out;
}

struct SweepBlock {
    Temperature t_min = Temperature::kelvin(2.0);
    Temperature t_max = Temperature::kelvin(300.0);
    int n_points = 20;
    bool log_spacing = true;

    std::vector<Temperature> grid() const {
        std::vector<Temperature> out;
        out.reserve(static_cast<std::size_t>(n_points));
        for (int i = 0; i < n_points; ++i) {
            const double f =
                n_points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n_points - 1);
            const double t = log_spacing
                                 ? t_min.k() * std::pow(t_max.k() / t_min.k(), f)
                                 : t_min.k() + f * (t_max.k() - t_min.k());
            out.push_back(Temperature::kelvin(t));
        }
        return out;
    }
};

inline SweepBlock parse_sweep(const json& j) {
    const std::string path = "/sweep";
    detail::check_keys(j, path, {"t_min", "t_max", "n_points", "spacing"});
    SweepBlock out;
    out.t_min = detail::parse_quantity(j, path, "t_min", parse_temperature);
    out.t_max = detail::parse_quantity(j, path, "t_max", parse_temperature);
    if (!(out.t_min.k() > 0.0) || out.t_max.k() < out.t_min.k())
        throw config_error("config '/sweep': need 0 < t_min <= t_max");
    out.n_points = static_cast<int>(detail::get_int(j, path, "n_points", 20));
    if (out.n_points < 1) throw config_error("config '/sweep/n_points': must be >= 1");
    const auto spacing = detail::get_string_opt(j, path, "spacing").value_or("log");
    if (spacing == "log") out.log_spacing = true;
    else if (spacing == "linear") out.log_spacing = false;
    else throw config_error("config '/sweep/spacing': must be 'log' or 'linear'");
    return out;
}

/// Optional measured reference values; when present, prediction output gains
/// a predicted-vs-measured comparison block.
struct MeasuredBlock {
    std::optional<MeasuredTime> t1;
    std::optional<MeasuredTime> t2;
};

inline MeasuredBlock parse_measured(const json& j) {
    const std::string path = "/measured";
    detail::check_keys(j, path, {"t1", "t1_err", "t2", "t2_err"});
    MeasuredBlock out;
    auto read_mt = [&](const char* key, const char* err_key) -> std::optional<MeasuredTime> {
        if (!detail::find(j, key)) {
            if (detail::find(j, err_key))
                throw config_error("config '" + path + "/" + err_key + "' without '" + key + "'");
            return std::nullopt;
        }
        MeasuredTime mt;
        mt.value = detail::parse_quantity(j, path, key, parse_time);
        if (detail::find(j, err_key)) mt.err = detail::parse_quantity(j, path, err_key, parse_time);
        return mt;
    };
    out.t1 = read_mt("t1", "t1_err");
    out.t2 = read_mt("t2", "t2_err");
    if (!out.t1 && !out.t2)
        throw config_error("config '/measured': at least one of 't1', 't2' is required");
    return out;
}

enum class FitMode { decay, extract_bath, rate_model, t2_table };

struct FitBlock {
    FitMode mode = FitMode::decay;
    FitOptions options;
    // extract_bath inputs; when the times are absent the curves in --data are
    // fitted first and classified via sidecar metadata.
    std::optional<MeasuredTime> t1_with, t1_without, t2_with, t2_without;
    std::optional<Time> echo_tau;
    // rate_model inputs
    std::vector<RatePoint> points;
    RateModelFitSpec rate_spec;
};

inline FitBlock parse_fit(const json& j) {
    const std::string path = "/fit";
    const auto mode = detail::get_string(j, path, "mode");
    FitBlock out;
    if (mode == "decay") {
        out.mode = FitMode::decay;
        detail::check_keys(j, path, {"mode", "beta_min", "beta_max"});
        if (const auto b = detail::get_number_opt(j, path, "beta_min")) out.options.beta_min = *b;
        if (const auto b = detail::get_number_opt(j, path, "beta_max")) out.options.beta_max = *b;
        if (!(out.options.beta_min > 0.0) || out.options.beta_max < out.options.beta_min)
            throw config_error("config '/fit': need 0 < beta_min <= beta_max");
    } else if (mode == "extract_bath") {
        out.mode = FitMode::extract_bath;
        detail::check_keys(j, path,
                           {"mode", "echo_tau", "t1_with", "t1_without", "t2_with", "t2_without",
                            "t1_with_err", "t1_without_err", "t2_with_err", "t2_without_err"});
        out.echo_tau = detail::parse_quantity(j, path, "echo_tau", parse_time);
        auto read_mt = [&](const char* key, const char* err_key) -> std::optional<MeasuredTime> {
            if (!detail::find(j, key)) {
                if (detail::find(j, err_key))
                    throw config_error("config '" + path + "/" + err_key + "' without '" + key +
                                       "'");
                return std::nullopt;
            }
            MeasuredTime mt;
            mt.value = detail::parse_quantity(j, path, key, parse_time);
            if (detail::find(j, err_key))
                mt.err = detail::parse_quantity(j, path, err_key, parse_time);
            return mt;
        };
        out.t1_with = read_mt("t1_with", "t1_with_err");
        out.t1_without = read_mt("t1_without", "t1_without_err");
        out.t2_with = read_mt("t2_with", "t2_with_err");
        out.t2_without = read_mt("t2_without", "t2_without_err");
        const int n_given = int(bool(out.t1_with)) + int(bool(out.t1_without)) +
                            int(bool(out.t2_with)) + int(bool(out.t2_without));
        if (n_given != 0 && n_given != 4)
            throw config_error("config '/fit': give all four relaxation times or none "
                               "(curves from --data are used when none are given)");
    } else if (mode == "rate_model") {
        out.mode = FitMode::rate_model;
        detail::check_keys(j, path, {"mode", "points", "fix"});
        const json* pts = detail::find(j, "points");
        if (!pts || !pts->is_array() || pts->empty())
            throw config_error("config '/fit/points': non-empty array required");
        for (std::size_t i = 0; i < pts->size(); ++i) {
            const std::string ppath = path + "/points/" + std::to_string(i);
            const json& p = (*pts)[i];
            detail::check_keys(p, ppath, {"temperature", "tau_c", "rel_err"});
            RatePoint rp;
            rp.temperature = detail::parse_quantity(p, ppath, "temperature", parse_temperature);
            rp.tau_c = detail::parse_quantity(p, ppath, "tau_c", parse_time);
            if (const auto r = detail::get_number_opt(p, ppath, "rel_err")) rp.tau_c_rel_err = *r;
            out.points.push_back(rp);
        }
        if (const json* fix = detail::find(j, "fix")) {
            const std::string fpath = path + "/fix";
            detail::check_keys(*fix, fpath, {"raman_c", "raman_n", "tau0_inv", "barrier"});
            if (const auto c = detail::get_number_opt(*fix, fpath, "raman_c"))
                out.rate_spec.fixed_raman_c = *c;
            if (const auto n = detail::get_number_opt(*fix, fpath, "raman_n"))
                out.rate_spec.fixed_raman_n = *n;
            if (detail::find(*fix, "tau0_inv"))
                out.rate_spec.fixed_tau0_inv =
                    detail::parse_quantity(*fix, fpath, "tau0_inv", detail::parse_rate);
            if (detail::find(*fix, "barrier"))
                out.rate_spec.fixed_barrier =
                    detail::parse_quantity(*fix, fpath, "barrier", parse_energy);
        }
    } else if (mode == "t2_table") {
        out.mode = FitMode::t2_table;
        detail::check_keys(j, path, {"mode", "beta_min", "beta_max"});
        if (const auto b = detail::get_number_opt(j, path, "beta_min")) out.options.beta_min = *b;
        if (const auto b = detail::get_number_opt(j, path, "beta_max")) out.options.beta_max = *b;
    } else {
        throw config_error("config '/fit/mode': unknown mode '" + mode +
                           "' (expected decay, extract_bath, rate_model or t2_table)");
    }
    return out;
}

struct RunConfig {
    json raw;
    std::uint64_t seed = 0;
    int verbosity = 1;
    std::optional<BathBlock> bath;
    std::optional<SensorBlock> sensor;
    std::optional<NsdBlock> nsd;
    std::optional<McBlock> mc_block;
    std::optional<GeometryBlock> geometry_block;
    std::optional<FitBlock> fit;
    std::optional<SweepBlock> sweep;
    std::optional<MeasuredBlock> measured;

    const BathBlock& require_bath() const {
        if (!bath) throw config_error("config: this command requires a '/bath' block");
        return *bath;
    }
    const SensorBlock& require_sensor() const {
        if (!sensor) throw config_error("config: this command requires a '/sensor' block");
        return *sensor;
    }
    const McBlock& require_mc() const {
        if (!mc_block) throw config_error("config: this command requires a '/mc' block");
        return *mc_block;
    }
    const GeometryBlock& require_geometry() const {
        if (!geometry_block)
            throw config_error("config: this command requires a '/geometry' block");
        return *geometry_block;
    }
    const FitBlock& require_fit() const {
        if (!fit) throw config_error("config: this command requires a '/fit' block");
        return *fit;
    }
};

/// Parse and validate a whole config document. Every present block is schema
/// checked here, so misspelled keys fail before any computation.
inline RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw config_error("config: top level must be an object");
    detail::check_keys(doc, "",
                       {"schema", "seed", "output", "bath", "sensor", "nsd", "mc", "geometry",
                        "fit", "sweep", "measured"});
    const json* schema = detail::find(doc, "schema");
    if (!schema || !schema->is_number_integer() || schema->get<int>() != 1)
        throw config_error("config: '/schema' must be the integer 1");

    RunConfig out;
    out.raw = doc;
    if (const json* s = detail::find(doc, "seed")) {
        if (!s->is_number_unsigned() && !s->is_number_integer())
            throw config_error("config: '/seed' must be a non-negative integer");
        const auto v = s->get<std::int64_t>();
        if (v < 0) throw config_error("config: '/seed' must be >= 0");
        out.seed = static_cast<std::uint64_t>(v);
    }
    if (const json* o = detail::find(doc, "output")) {
        detail::check_keys(*o, "/output", {"verbosity"});
        const auto v = detail::get_int(*o, "/output", "verbosity", 1);
        if (v < 0 || v > 2) throw config_error("config: '/output/verbosity' must be 0, 1 or 2");
        out.verbosity = static_cast<int>(v);
    }
    if (const json* b = detail::find(doc, "bath")) out.bath = parse_bath(*b);
    if (const json* s = detail::find(doc, "sensor")) out.sensor = parse_sensor(*s);
    if (const json* n = detail::find(doc, "nsd")) out.nsd = parse_nsd(*n);
    if (const json* m = detail::find(doc, "mc")) out.mc_block = parse_mc(*m);
    if (const json* g = detail::find(doc, "geometry")) out.geometry_block = parse_geometry(*g);
    if (const json* f = detail::find(doc, "fit")) out.fit = parse_fit(*f);
    if (const json* s = detail::find(doc, "sweep")) out.sweep = parse_sweep(*s);
    if (const json* m = detail::find(doc, "measured")) out.measured = parse_measured(*m);
    return out;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw config_error("config '" + path.string() + "': " + e.what());
    }
    return parse_config(doc);
}

} // namespace spinbath::config
