#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "spinbath/config.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/geometry.hpp"
#include "spinbath/inference.hpp"
#include "spinbath/io.hpp"
#include "spinbath/montecarlo.hpp"
#include "spinbath/noise_model.hpp"
#include "spinbath/relaxation.hpp"
#include "spinbath/version.hpp"

// Batch command implementations behind the CLI front end. Each command takes
// a parsed config and writes CSV/JSON files into the output directory;
// everything is deterministic given config + seed.

namespace spinbath::cli {

namespace fs = std::filesystem;
using nlohmann::json;

struct Context {
    config::RunConfig cfg;
    fs::path out_dir = ".";
    std::optional<fs::path> data_dir;
    std::uint64_t seed = 0;  ///< config seed unless overridden on the command line
    std::ostream* log = &std::cerr;

    void say(int level, const std::string& msg) const {
        if (cfg.verbosity >= level) *log << msg << "\n";
    }
};

namespace detail {

inline json envelope(const Context& ctx, const std::string& command) {
    json j = io::result_envelope(command, ctx.cfg.raw);
    j["effective_seed"] = ctx.seed;
    return j;
}

inline void ensure_out_dir(const Context& ctx) {
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec && !fs::is_directory(ctx.out_dir))
        throw data_error("cannot create output directory '" + ctx.out_dir.string() +
                         "': " + ec.message());
}

inline json fit_result_to_json(const FitResult& fit) {
    json j;
    j["amplitude"] = fit.amplitude;
    j["t_char_us"] = fit.t_char_s * 1e6;
    j["t_char_err_us"] = fit.t_char_err_s() * 1e6;
    j["beta"] = fit.beta;
    j["beta_err"] = fit.beta_err();
    j["baseline"] = fit.baseline;
    j["chi2_reduced"] = fit.chi2_reduced;
    j["converged"] = fit.converged;
    j["n_iter"] = fit.n_iter;
    j["n_starts_tried"] = fit.n_starts_tried;
    return j;
}

inline json extraction_to_json(const BathExtraction& ex) {
    json j;
    j["tau_c_us"] = ex.tau_c.as_us();
    j["tau_c_err_us"] = ex.tau_c_err.as_us();
    j["b_rms_sq_t2"] = ex.b_rms_sq;
    j["b_rms_sq_err_t2"] = ex.b_rms_sq_err;
    j["b_rms_ut"] = std::sqrt(ex.b_rms_sq) * 1e6;
    j["residual_norm"] = ex.residual_norm;
    j["echo_tau_us"] = ex.echo_tau.as_us();
    json roots = json::array();
    for (const auto& r : ex.all_roots) roots.push_back(r.as_us());
    j["all_roots_us"] = roots;
    return j;
}

inline json prediction_to_json(const RelaxationPrediction& p) {
    json j;
    j["t1_s"] = p.t1.s();
    j["t2_rate_convention_s"] = p.t2_rate.s();
    j["t2_coherence_s"] = p.t2_coherence.s();
    j["bath_t1_rate_hz"] = p.bath_t1_rate;
    j["bath_t2_rate_hz"] = p.bath_t2_rate;
    j["overlap_t1"] = p.overlap_1;
    j["overlap_echo"] = p.overlap_2;
    j["tau_c_us"] = p.tau_c.as_us();
    j["regime"] = regime_name(p.regime);
    return j;
}

} // namespace detail

/// NSD table over a log frequency grid plus a JSON summary.
inline int cmd_nsd(const Context& ctx) {
    const auto& bath = ctx.cfg.require_bath();
    detail::ensure_out_dir(ctx);
    const Time tau_c = bath.tau_c();
    const NoiseSpectrum spectrum(tau_c);
    const double corner = cutoff_frequency(spectrum).rad_s();

    config::NsdBlock grid = ctx.cfg.nsd.value_or(config::NsdBlock{});
    const double w_lo = grid.omega_min ? grid.omega_min->rad_s() : 1e-3 * corner;
    const double w_hi = grid.omega_max ? grid.omega_max->rad_s() : 1e3 * corner;
    if (!(w_lo > 0.0) || w_hi <= w_lo)
        throw config_error("config '/nsd': need 0 < omega_min < omega_max");

    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(grid.n_points) + 1);
    rows.push_back({0.0, spectrum(0.0)});
    for (int i = 0; i < grid.n_points; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(grid.n_points - 1);
        const double w = w_lo * std::pow(w_hi / w_lo, f);
        rows.push_back({w, spectrum(w)});
    }
    io::write_csv(ctx.out_dir / "nsd.csv", {"omega_rad_s", "nsd_s_per_rad"}, rows);

    json j = detail::envelope(ctx, "nsd");
    j["tau_c_us"] = tau_c.as_us();
    j["corner_rad_s"] = corner;
    j["nsd_at_zero_s_per_rad"] = spectrum(0.0);
    json flags = json::array();
    if (corner > 1e9) flags.push_back("GHz-range cutoff");
    j["flags"] = flags;
    if (bath.rate_model) {
        const auto temp = bath.temperature_or_default();
        j["temperature_k"] = temp.k();
    }
    io::write_json(ctx.out_dir / "nsd.json", j);
    ctx.say(1, "nsd: tau_c = " + std::to_string(tau_c.as_us()) + " us, corner = " +
                   std::to_string(corner) + " rad/s");
    return 0;
}

/// Forward T1/T2 prediction, optional temperature sweep, decay curves for
/// plotting, optional predicted-vs-measured comparison.
inline int cmd_predict(const Context& ctx) {
    const auto& bath_block = ctx.cfg.require_bath();
    const auto& sensor_block = ctx.cfg.require_sensor();
    detail::ensure_out_dir(ctx);

    const BathParams bath = bath_block.bath_params();
    const SensorParams sensor = sensor_block.sensor_params();
    const Temperature temp = bath_block.temperature_or_default();
    const auto prediction = predict_rates(bath, sensor, temp);

    json j = detail::envelope(ctx, "predict");
    j["prediction"] = detail::prediction_to_json(prediction);

    if (ctx.cfg.measured) {
        json cmp;
        if (ctx.cfg.measured->t1) {
            cmp["t1_measured_s"] = ctx.cfg.measured->t1->value.s();
            cmp["t1_predicted_s"] = prediction.t1.s();
            cmp["t1_ratio"] = prediction.t1.s() / ctx.cfg.measured->t1->value.s();
        }
        if (ctx.cfg.measured->t2) {
            cmp["t2_measured_s"] = ctx.cfg.measured->t2->value.s();
            cmp["t2_predicted_s"] = prediction.t2_coherence.s();
            cmp["t2_ratio"] = prediction.t2_coherence.s() / ctx.cfg.measured->t2->value.s();
        }
        j["comparison"] = cmp;
    }

    // Plot-ready decay curves out to ~3 coherence times.
    const double t_end = 3.0 * prediction.t2_coherence.s();
    const int n = 200;
    std::vector<std::vector<double>> rows;
    rows.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double t = t_end * static_cast<double>(i) / static_cast<double>(n);
        const double echo = echo_envelope(bath, sensor, temp, Time::seconds(t));
        const double pop = std::exp(-t / prediction.t1.s());
        rows.push_back({t * 1e6, echo, pop});
    }
    io::write_csv(ctx.out_dir / "predict_decay.csv", {"t_us", "echo_signal", "t1_signal"}, rows);

    if (ctx.cfg.sweep) {
        if (!bath_block.rate_model)
            throw config_error("config '/sweep': temperature sweep needs '/bath/rate_model'");
        std::vector<std::vector<double>> sweep_rows;
        json sweep_json = json::array();
        for (const auto& t_k : ctx.cfg.sweep->grid()) {
            const auto p = predict_rates(bath, sensor, t_k);
            sweep_rows.push_back({t_k.k(), p.tau_c.s(), p.t1.s(), p.t2_rate.s(),
                                  p.t2_coherence.s()});
            json row = detail::prediction_to_json(p);
            row["temperature_k"] = t_k.k();
            sweep_json.push_back(row);
        }
        io::write_csv(ctx.out_dir / "predict_sweep.csv",
                      {"temperature_k", "tau_c_s", "t1_s", "t2_rate_s", "t2_coherence_s"},
                      sweep_rows);
        j["sweep"] = sweep_json;
    }

    io::write_json(ctx.out_dir / "predict.json", j);
    ctx.say(1, "predict: T1 = " + std::to_string(prediction.t1.s()) + " s, T2(1/e) = " +
                   std::to_string(prediction.t2_coherence.s()) + " s [" +
                   regime_name(prediction.regime) + "]");
    return 0;
}

namespace detail {

/// Classify fitted curves into the four extract_bath inputs via sidecar
/// metadata (kind + smm_present).
inline MeasuredTime pick_curve_time(const std::vector<DecayCurve>& curves,
                                    const std::vector<FitResult>& fits, CurveKind kind,
                                    bool with_bath) {
    for (std::size_t i = 0; i < curves.size(); ++i) {
        if (curves[i].kind != kind) continue;
        if (!curves[i].meta.smm_present)
            throw data_error("curve '" + curves[i].meta.id +
                             "' lacks 'smm_present' metadata needed by extract_bath");
        if (*curves[i].meta.smm_present != with_bath) continue;
        return MeasuredTime{Time::seconds(fits[i].t_char_s),
                            Time::seconds(fits[i].t_char_err_s())};
    }
    throw data_error(std::string("extract_bath: no curve with kind=") +
                     (kind == CurveKind::t1 ? "t1" : "t2") +
                     " and smm_present=" + (with_bath ? "true" : "false") + " in the data set");
}

} // namespace detail

/// Decay fits / bath extraction / rate-model fit / T2 tables, per fit.mode.
inline int cmd_fit(const Context& ctx) {
    const auto& fit_block = ctx.cfg.require_fit();
    detail::ensure_out_dir(ctx);

    if (fit_block.mode == config::FitMode::rate_model) {
        const auto result = fit_rate_model(fit_block.points, fit_block.rate_spec);
        json j = detail::envelope(ctx, "fit");
        j["mode"] = "rate_model";
        json m;
        m["raman_c"] = result.model.raman_c;
        m["raman_n"] = result.model.raman_n;
        m["tau0_inv_hz"] = result.model.tau0_inv;
        m["barrier_wavenumber"] = result.model.barrier.as_wavenumber();
        j["model"] = m;
        j["chi2_reduced"] = result.chi2_reduced;
        j["converged"] = result.converged;
        j["free_parameters"] = result.free_names;
        j["singular_values"] = result.singular_values;
        io::write_json(ctx.out_dir / "rate_model.json", j);

        std::vector<std::vector<double>> rows;
        for (const auto& p : fit_block.points) {
            const double pred = 1.0 / correlation_time(result.model, p.temperature).s();
            rows.push_back({p.temperature.k(), 1.0 / p.tau_c.s(), pred});
        }
        io::write_csv(ctx.out_dir / "rate_model_fit.csv",
                      {"temperature_k", "rate_measured_hz", "rate_fit_hz"}, rows);
        ctx.say(1, "fit(rate_model): converged, chi2_reduced = " +
                       std::to_string(result.chi2_reduced));
        return 0;
    }

    if (fit_block.mode == config::FitMode::extract_bath) {
        MeasuredTime t1_with, t1_without, t2_with, t2_without;
        json curve_fits = json::array();
        if (fit_block.t1_with) {
            t1_with = *fit_block.t1_with;
            t1_without = *fit_block.t1_without;
            t2_with = *fit_block.t2_with;
            t2_without = *fit_block.t2_without;
        } else {
            if (!ctx.data_dir)
                throw config_error("fit mode extract_bath without explicit times needs --data");
            const auto curves = io::load_curves(*ctx.data_dir);
            std::vector<FitResult> fits;
            fits.reserve(curves.size());
            for (const auto& c : curves) {
                fits.push_back(fit_decay(c, fit_block.options));
                json cf = detail::fit_result_to_json(fits.back());
                cf["id"] = c.meta.id;
                curve_fits.push_back(cf);
            }
            t1_with = detail::pick_curve_time(curves, fits, CurveKind::t1, true);
            t1_without = detail::pick_curve_time(curves, fits, CurveKind::t1, false);
            t2_with = detail::pick_curve_time(curves, fits, CurveKind::t2, true);
            t2_without = detail::pick_curve_time(curves, fits, CurveKind::t2, false);
        }
        const auto& sensor = ctx.cfg.require_sensor();
        const auto extraction = extract_bath(t1_with, t1_without, t2_with, t2_without,
                                             *fit_block.echo_tau, sensor.filter());
        json j = detail::envelope(ctx, "fit");
        j["mode"] = "extract_bath";
        j["extraction"] = detail::extraction_to_json(extraction);
        json inputs;
        inputs["t1_with_s"] = t1_with.value.s();
        inputs["t1_without_s"] = t1_without.value.s();
        inputs["t2_with_s"] = t2_with.value.s();
        inputs["t2_without_s"] = t2_without.value.s();
        j["inputs"] = inputs;
        if (!curve_fits.empty()) j["curve_fits"] = curve_fits;
        io::write_json(ctx.out_dir / "extract_bath.json", j);
        ctx.say(1, "fit(extract_bath): tau_c = " + std::to_string(extraction.tau_c.as_us()) +
                       " us, B_rms = " + std::to_string(std::sqrt(extraction.b_rms_sq) * 1e6) +
                       " uT");
        return 0;
    }

    if (!ctx.data_dir) throw config_error("fit mode requires --data <dir>");
    const auto curves = io::load_curves(*ctx.data_dir);

    if (fit_block.mode == config::FitMode::t2_table) {
        const auto table = t2_vs_temperature_table(curves, fit_block.options);
        std::vector<std::vector<double>> rows;
        for (const auto& r : table.rows)
            rows.push_back({r.temperature_k, r.field_t * 1e4, r.t2_s * 1e6, r.t2_err_s * 1e6,
                            r.beta});
        io::write_csv(ctx.out_dir / "t2_table.csv",
                      {"temperature_k", "field_g", "t2_us", "t2_err_us", "beta"}, rows);
        json j = detail::envelope(ctx, "fit");
        j["mode"] = "t2_table";
        json jrows = json::array();
        for (const auto& r : table.rows) {
            json row;
            row["id"] = r.id;
            row["temperature_k"] = r.temperature_k;
            row["field_g"] = r.field_t * 1e4;
            row["t2_us"] = r.t2_s * 1e6;
            row["t2_err_us"] = r.t2_err_s * 1e6;
            row["beta"] = r.beta;
            jrows.push_back(row);
        }
        j["rows"] = jrows;
        if (table.comparison) {
            json c;
            c["temperature_k"] = table.comparison->temperature_k;
            c["field_low_g"] = table.comparison->field_low_t * 1e4;
            c["field_high_g"] = table.comparison->field_high_t * 1e4;
            c["t2_low_us"] = table.comparison->t2_low_s * 1e6;
            c["t2_high_us"] = table.comparison->t2_high_s * 1e6;
            c["relative_increase"] = table.comparison->relative_increase;
            j["field_comparison"] = c;
        }
        io::write_json(ctx.out_dir / "t2_table.json", j);
        ctx.say(1, "fit(t2_table): " + std::to_string(table.rows.size()) + " rows");
        return 0;
    }

    // Plain decay fitting; per-curve failures are collected, reported in the
    // JSON, and turn into a nonzero exit.
    json j = detail::envelope(ctx, "fit");
    j["mode"] = "decay";
    json results = json::array();
    json errors = json::array();
    for (const auto& c : curves) {
        try {
            const auto fit = fit_decay(c, fit_block.options);
            json r = detail::fit_result_to_json(fit);
            r["id"] = c.meta.id;
            results.push_back(r);
            std::vector<std::vector<double>> rows;
            rows.reserve(c.t_s.size());
            for (std::size_t i = 0; i < c.t_s.size(); ++i) {
                const double model =
                    stretched_exp(c.t_s[i], fit.amplitude, fit.t_char_s, fit.beta, fit.baseline);
                rows.push_back({c.t_s[i] * 1e6, c.signal[i], model, c.signal[i] - model});
            }
            io::write_csv(ctx.out_dir / ("residuals_" + c.meta.id + ".csv"),
                          {"t_us", "signal", "model", "residual"}, rows);
        } catch (const error& e) {
            json err;
            err["id"] = c.meta.id;
            err["error"] = e.what();
            errors.push_back(err);
        }
    }
    j["fits"] = results;
    j["errors"] = errors;
    io::write_json(ctx.out_dir / "fits.json", j);
    ctx.say(1, "fit(decay): " + std::to_string(results.size()) + " fit(s), " +
                   std::to_string(errors.size()) + " failure(s)");
    if (!errors.empty())
        throw fit_error("fit: " + std::to_string(errors.size()) +
                        " curve(s) failed; see fits.json for the per-curve error list");
    return 0;
}

/// MC ensemble: echo decay with analytic overlay, optional PSD and
/// trajectory dumps, ensemble statistics summary.
inline int cmd_simulate(const Context& ctx) {
    const auto& mc_block = ctx.cfg.require_mc();
    detail::ensure_out_dir(ctx);

    mc::TrajectoryConfig traj = mc_block.trajectory;
    traj.seed = ctx.seed;
    if (traj.coarse_dt())
        ctx.say(1, "simulate: warning, dt > tau_c/10; phase quadrature error grows as (dt/tau_c)^2");

    json j = detail::envelope(ctx, "simulate");
    json stats;
    stats["sigma_b_t"] = traj.sigma_b;
    stats["tau_c_us"] = traj.tau_c.as_us();
    stats["dt_us"] = traj.dt.as_us();
    stats["n_trajectories"] = traj.n_trajectories;
    stats["n_steps"] = traj.n_steps;
    j["ensemble"] = stats;

    if (mc_block.dump_trajectories > 0) {
        const int n_dump =
            std::min<int>(mc_block.dump_trajectories, static_cast<int>(traj.n_trajectories));
        for (int i = 0; i < n_dump; ++i) {
            const auto b = mc::generate_ou_trajectory(traj, static_cast<std::uint64_t>(i));
            std::vector<std::vector<double>> rows;
            rows.reserve(b.size());
            for (std::size_t k = 0; k < b.size(); ++k)
                rows.push_back({static_cast<double>(k) * traj.dt.s(), b[k]});
            io::write_csv(ctx.out_dir / ("trajectory_" + std::to_string(i) + ".csv"),
                          {"t_s", "B_T"}, rows);
        }
    }

    bool validation_passed = true;
    if (mc_block.echo) {
        const auto taus = mc_block.echo->grid();
        const auto ens = mc::simulate_echo_decay(traj, taus);
        const double delta_sq =
            constants::gamma_nv * constants::gamma_nv * traj.sigma_b * traj.sigma_b;
        std::vector<std::vector<double>> rows;
        double max_dev_sigma = 0.0;
        for (std::size_t k = 0; k < ens.times.size(); ++k) {
            const double analytic =
                std::exp(-closed_form_ou_echo(delta_sq, traj.tau_c, ens.times[k]));
            const double dev = ens.stderr_of[k] > 0.0
                                   ? std::abs(ens.mean_signal[k] - analytic) / ens.stderr_of[k]
                                   : (ens.mean_signal[k] == analytic ? 0.0 : 1e300);
            max_dev_sigma = std::max(max_dev_sigma, dev);
            rows.push_back({ens.times[k].as_us(), ens.mean_signal[k], ens.stderr_of[k], analytic,
                            dev});
        }
        io::write_csv(ctx.out_dir / "echo_decay.csv",
                      {"tau_us", "mc_signal", "mc_stderr", "analytic_signal", "deviation_sigma"},
                      rows);
        j["echo_max_deviation_sigma"] = max_dev_sigma;
        if (traj.sigma_b > 0.0 && max_dev_sigma > 3.0) validation_passed = false;
        ctx.say(1, "simulate: echo max deviation " + std::to_string(max_dev_sigma) +
                       " combined sigma over " + std::to_string(rows.size()) + " points");
    }

    if (mc_block.psd) {
        const auto psd = mc::estimate_psd(traj, mc_block.psd_segment);
        std::vector<std::vector<double>> rows;
        rows.reserve(psd.omega.size());
        for (std::size_t k = 0; k < psd.omega.size(); ++k)
            rows.push_back({psd.omega[k], psd.psd[k], psd.psd_normalized[k]});
        io::write_csv(ctx.out_dir / "psd.csv",
                      {"omega_rad_s", "psd_t2_s_per_rad", "psd_normalized"}, rows);
        json p;
        p["variance_t2"] = psd.variance;
        p["integral_t2"] = psd.integral;
        p["parseval_rel_err"] =
            psd.variance > 0.0 ? std::abs(psd.integral - psd.variance) / psd.variance : 0.0;
        p["n_segments"] = psd.n_segments;
        j["psd"] = p;
    }

    j["validation_passed"] = validation_passed;
    io::write_json(ctx.out_dir / "simulate.json", j);
    if (!validation_passed)
        throw numerical_error("simulate: MC echo deviates from the closed form by more than 3 "
                              "combined sigma; see echo_decay.csv");
    return 0;
}

/// Cap volume, molecule count, optional count inversion and dipolar field
/// estimate with explicit assumption flags.
inline int cmd_geometry(const Context& ctx) {
    const auto& block = ctx.cfg.require_geometry();
    detail::ensure_out_dir(ctx);

    const double volume = block.geom.volume_m3();
    const double count = block.geom.expected_molecules();

    json j = detail::envelope(ctx, "geometry");
    j["cap_volume_m3"] = volume;
    j["molecule_count"] = count;
    j["nv_depth_nm"] = block.geom.nv_depth_m * 1e9;
    j["sensing_radius_nm"] = block.geom.sensing_radius_m * 1e9;

    json assumptions = json::array();
    assumptions.push_back("molecules uniformly distributed in the cap");
    assumptions.push_back("isotropically oriented point dipoles");
    if (block.moment_bohr == geometry::default_moment_bohr())
        assumptions.push_back("default moment g=2, S=3/2 (3.873 Bohr magnetons)");
    j["assumptions"] = assumptions;

    if (block.target_count) {
        const double implied =
            geometry::implied_volume(*block.target_count, block.geom.concentration_mol_m3);
        json inv;
        inv["target_count"] = *block.target_count;
        inv["implied_volume_m3"] = implied;
        inv["volume_ratio"] = volume > 0.0 ? implied / volume : 0.0;
        j["inversion"] = inv;
        if (count < *block.target_count)
            j["note"] = "configured cap holds " + io::format_double(count) +
                        " molecules, below the target " + io::format_double(*block.target_count) +
                        "; the target implies a sensing volume of " + io::format_double(implied) +
                        " m^3";
    }

    if (block.dipolar) {
        const auto dip =
            geometry::dipolar_b_rms(block.geom, block.moment_bohr, block.n_samples, ctx.seed);
        json d;
        d["b_rms_t"] = dip.b_rms_t;
        d["b_rms_err_t"] = dip.b_rms_err_t;
        d["b_sq_mean_t2"] = dip.b_sq_mean_t2;
        d["b_sq_err_t2"] = dip.b_sq_err_t2;
        d["fraction_in_range"] = dip.fraction_in_range;
        d["molecules_used"] = dip.molecules_used;
        d["moment_bohr"] = block.moment_bohr;
        d["n_samples"] = block.n_samples;
        j["dipolar"] = d;
    }

    io::write_json(ctx.out_dir / "geometry.json", j);
    ctx.say(1, "geometry: volume = " + io::format_double(volume) + " m^3, count = " +
                   io::format_double(count));
    return 0;
}

inline int dispatch(const std::string& command, const Context& ctx) {
    if (command == "nsd") return cmd_nsd(ctx);
    if (command == "predict") return cmd_predict(ctx);
    if (command == "fit") return cmd_fit(ctx);
    if (command == "simulate") return cmd_simulate(ctx);
    if (command == "geometry") return cmd_geometry(ctx);
    throw config_error("unknown command '" + command + "'");
}

/// Maps the library's exception hierarchy onto the exit-code contract:
/// 0 ok, 2 config, 3 data, 4 numerical/fit, 1 unexpected.
inline int run_guarded(const std::string& command, const Context& ctx) {
    try {
        return dispatch(command, ctx);
    } catch (const config_error& e) {
        *ctx.log << "config error: " << e.what() << "\n";
        return 2;
    } catch (const data_error& e) {
        *ctx.log << "data error: " << e.what() << "\n";
        return 3;
    } catch (const numerical_error& e) {
        *ctx.log << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const error& e) {
        *ctx.log << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        *ctx.log << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace spinbath::cli
