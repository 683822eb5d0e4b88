#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "spinbath/constants.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/fft.hpp"
#include "spinbath/rng.hpp"
#include "spinbath/units.hpp"

// Stochastic oracle: OU field trajectories with the exact stationary
// discretization, sensor phase accumulation under an echo sequence, and
// ensemble spectral estimates. Everything is keyed by (seed, trajectory
// index), so results do not depend on scheduling or thread count.

namespace spinbath::mc {

struct TrajectoryConfig {
    Time tau_c = Time::us(1.0);
    double sigma_b = 0.0;  ///< rms field, T
    Time dt = Time::us(0.01);
    std::size_t n_steps = 1000;
    std::size_t n_trajectories = 100;
    std::uint64_t seed = 0;

    void validate() const {
        if (tau_c.s() <= 0.0) throw config_error("mc: tau_c must be > 0");
        if (dt.s() <= 0.0) throw config_error("mc: dt must be > 0");
        if (sigma_b < 0.0 || !std::isfinite(sigma_b))
            throw config_error("mc: sigma_b must be finite and >= 0");
        if (n_steps < 1) throw config_error("mc: n_steps must be >= 1");
        if (n_trajectories < 2) throw config_error("mc: n_trajectories must be >= 2");
        // The update rule stays stationary at any dt, but phase quadrature and
        // autocorrelation resolution degrade; dt > tau_c/2 is rejected.
        if (dt.s() > 0.5 * tau_c.s())
            throw config_error("mc: dt must be <= tau_c/2 (got dt/tau_c = " +
                               std::to_string(dt.s() / tau_c.s()) + ")");
    }

    /// True when dt exceeds tau_c/10; callers should surface a warning.
    bool coarse_dt() const { return dt.s() > 0.1 * tau_c.s(); }

    /// Decay factor per step and the matching stationary kick amplitude.
    double step_decay() const { return std::exp(-dt.s() / tau_c.s()); }
    double step_kick() const {
        const double a = step_decay();
        return sigma_b * std::sqrt(1.0 - a * a);
    }
};

/// Stateful single-trajectory walker. B0 ~ Normal(0, sigma_b^2), then
/// B_{k+1} = a B_k + sigma_b sqrt(1 - a^2) xi_k with a = exp(-dt/tau_c).
class OUWalker {
public:
    OUWalker(const TrajectoryConfig& cfg, std::uint64_t trajectory_index)
        : stream_(cfg.seed, trajectory_index), decay_(cfg.step_decay()), kick_(cfg.step_kick()) {
        b_ = cfg.sigma_b * stream_.normal();
    }

    double value() const { return b_; }
    double advance() {
        b_ = decay_ * b_ + kick_ * stream_.normal();
        return b_;
    }

private:
    rng::Stream stream_;
    double decay_;
    double kick_;
    double b_ = 0.0;
};

/// Full trajectory (n_steps + 1 samples including the initial value).
inline std::vector<double> generate_ou_trajectory(const TrajectoryConfig& cfg,
                                                  std::uint64_t trajectory_index) {
    cfg.validate();
    OUWalker walker(cfg, trajectory_index);
    std::vector<double> b(cfg.n_steps + 1);
    b[0] = walker.value();
    for (std::size_t k = 1; k <= cfg.n_steps; ++k) b[k] = walker.advance();
    return b;
}

namespace detail {

inline std::size_t resolve_threads(std::size_t requested, std::size_t jobs) {
    std::size_t n = requested;
    if (n == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        n = hw == 0 ? 1 : std::min<unsigned>(hw, 8);
    }
    return std::max<std::size_t>(1, std::min(n, jobs));
}

/// Runs fn(trajectory_index) for every index, any order. Results must be
/// written to per-index slots by the callable itself.
template <typename Fn>
void for_each_trajectory(std::size_t n_trajectories, std::size_t n_threads, Fn&& fn) {
    const std::size_t workers = resolve_threads(n_threads, n_trajectories);
    if (workers == 1) {
        for (std::size_t i = 0; i < n_trajectories; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n_trajectories + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n_trajectories, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

/// Mean and standard error of a per-trajectory sample vector, reduced in
/// index order with compensated summation.
struct MeanStderr {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
};

inline MeanStderr reduce(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    rng::KahanSum sum;
    for (double x : samples) sum.add(x);
    const double mean = sum.value() / static_cast<double>(n);
    rng::KahanSum sq;
    for (double x : samples) sq.add((x - mean) * (x - mean));
    const double var = n > 1 ? sq.value() / static_cast<double>(n - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

} // namespace detail

struct AutocorrelationResult {
    std::vector<Time> lags;
    std::vector<double> value;        ///< A(lag), T^2
    std::vector<double> stderr_of;    ///< per-lag standard error
    std::vector<double> cov_with_lag0;  ///< Cov(mean A_k, mean A_0), for ratio errors
    std::size_t n_used = 0;

    /// A(k)/A(0) with a delta-method standard error.
    std::pair<double, double> ratio_to_lag0(std::size_t k) const {
        const double a0 = value.at(0);
        const double ak = value.at(k);
        if (a0 == 0.0) throw statistics_error("autocorrelation ratio undefined: A(0) = 0");
        const double r = ak / a0;
        const double v = stderr_of[k] * stderr_of[k] / (a0 * a0) +
                         ak * ak * stderr_of[0] * stderr_of[0] / (a0 * a0 * a0 * a0) -
                         2.0 * ak * cov_with_lag0[k] / (a0 * a0 * a0);
        return {r, std::sqrt(std::max(0.0, v))};
    }
};

/// Across-trajectory lag-product estimator with standard errors. Requires
/// at least 100 trajectories (a single long trajectory should be chopped
/// into pseudo-trajectories by the caller before this point).
inline AutocorrelationResult estimate_autocorrelation(const TrajectoryConfig& cfg,
                                                      std::size_t max_lag,
                                                      std::size_t n_threads = 0) {
    cfg.validate();
    if (cfg.n_trajectories < 100)
        throw statistics_error("autocorrelation needs >= 100 trajectories, got " +
                               std::to_string(cfg.n_trajectories));
    if (max_lag >= cfg.n_steps)
        throw statistics_error("autocorrelation max_lag must be < n_steps");

    const std::size_t m = cfg.n_trajectories;
    const std::size_t n_lags = max_lag + 1;
    // per_traj[k][i]: trajectory i's unbiased estimate of A(k * dt)
    std::vector<std::vector<double>> per_traj(n_lags, std::vector<double>(m, 0.0));

    detail::for_each_trajectory(m, n_threads, [&](std::size_t i) {
        const auto b = generate_ou_trajectory(cfg, i);
        for (std::size_t k = 0; k < n_lags; ++k) {
            rng::KahanSum acc;
            const std::size_t n_prod = b.size() - k;
            for (std::size_t j = 0; j < n_prod; ++j) acc.add(b[j] * b[j + k]);
            per_traj[k][i] = acc.value() / static_cast<double>(n_prod);
        }
    });

    AutocorrelationResult out;
    out.n_used = m;
    out.lags.reserve(n_lags);
    out.value.reserve(n_lags);
    out.stderr_of.reserve(n_lags);
    out.cov_with_lag0.reserve(n_lags);
    const auto lag0 = detail::reduce(per_traj[0]);
    for (std::size_t k = 0; k < n_lags; ++k) {
        const auto r = detail::reduce(per_traj[k]);
        out.lags.push_back(Time::seconds(static_cast<double>(k) * cfg.dt.s()));
        out.value.push_back(r.mean);
        out.stderr_of.push_back(r.stderr_of_mean);
        rng::KahanSum cov;
        for (std::size_t i = 0; i < m; ++i)
            cov.add((per_traj[k][i] - r.mean) * (per_traj[0][i] - lag0.mean));
        const double c = m > 1 ? cov.value() / static_cast<double>(m - 1) : 0.0;
        out.cov_with_lag0.push_back(c / static_cast<double>(m));
    }
    return out;
}

struct PsdResult {
    std::vector<double> omega;       ///< rad/s, bins 0 .. n_seg/2
    std::vector<double> psd;         ///< one-sided, T^2 s/rad; int psd domega = variance
    std::vector<double> psd_normalized;  ///< psd / sigma_b^2; unit-normalized convention
    double variance = 0.0;           ///< time-domain sample variance across the ensemble
    double integral = 0.0;           ///< trapezoid of psd over omega (Parseval check)
    std::size_t n_segments = 0;
};

/// Welch estimate: Hann window, 50% overlap, power-of-two segments, averaged
/// over segments of every trajectory. One-sided angular-frequency convention.
inline PsdResult estimate_psd(const TrajectoryConfig& cfg, std::size_t segment_length = 0,
                              std::size_t n_threads = 0) {
    cfg.validate();
    const std::size_t n_samples = cfg.n_steps + 1;
    std::size_t seg = segment_length;
    if (seg == 0) {
        seg = 1;
        while (seg * 16 <= n_samples) seg *= 2;
    }
    if (!fft::is_power_of_two(seg) || seg < 8)
        throw statistics_error("psd segment length must be a power of two >= 8");
    if (seg > n_samples)
        throw statistics_error("psd segment length " + std::to_string(seg) +
                               " exceeds trajectory length " + std::to_string(n_samples));
    // The segment must span several correlation times or the corner is
    // unresolvable and the DC bin badly biased.
    if (static_cast<double>(seg) * cfg.dt.s() < 8.0 * cfg.tau_c.s())
        throw statistics_error("psd segment spans < 8 tau_c; increase n_steps or segment length");

    std::vector<double> window(seg);
    double u_sum = 0.0;
    for (std::size_t n = 0; n < seg; ++n) {
        window[n] = 0.5 * (1.0 - std::cos(2.0 * constants::pi * static_cast<double>(n) /
                                          static_cast<double>(seg - 1)));
        u_sum += window[n] * window[n];
    }

    const std::size_t hop = seg / 2;
    const std::size_t segs_per_traj = (n_samples - seg) / hop + 1;
    const std::size_t n_bins = seg / 2 + 1;
    const double fs = 1.0 / cfg.dt.s();

    const std::size_t m = cfg.n_trajectories;
    std::vector<std::vector<double>> per_traj_psd(m);
    std::vector<double> per_traj_var(m, 0.0);

    detail::for_each_trajectory(m, n_threads, [&](std::size_t i) {
        const auto b = generate_ou_trajectory(cfg, i);
        std::vector<double> acc(n_bins, 0.0);
        std::vector<double> chunk(seg);
        for (std::size_t s = 0; s < segs_per_traj; ++s) {
            const std::size_t off = s * hop;
            for (std::size_t n = 0; n < seg; ++n) chunk[n] = b[off + n] * window[n];
            const auto p = fft::power_spectrum(chunk);
            for (std::size_t j = 0; j < n_bins; ++j) acc[j] += p[j];
        }
        // One-sided linear-frequency periodogram, then to angular: /(2 pi).
        const double norm = 1.0 / (fs * u_sum * static_cast<double>(segs_per_traj));
        for (std::size_t j = 0; j < n_bins; ++j) {
            const double one_sided = (j == 0 || j == n_bins - 1) ? 1.0 : 2.0;
            acc[j] *= norm * one_sided / (2.0 * constants::pi);
        }
        per_traj_psd[i] = std::move(acc);
        rng::KahanSum mean_acc, sq_acc;
        for (double x : b) mean_acc.add(x);
        const double mu = mean_acc.value() / static_cast<double>(b.size());
        for (double x : b) sq_acc.add((x - mu) * (x - mu));
        per_traj_var[i] = sq_acc.value() / static_cast<double>(b.size() - 1);
    });

    PsdResult out;
    out.n_segments = segs_per_traj * m;
    out.omega.resize(n_bins);
    out.psd.assign(n_bins, 0.0);
    for (std::size_t j = 0; j < n_bins; ++j) {
        out.omega[j] = 2.0 * constants::pi * fs * static_cast<double>(j) / static_cast<double>(seg);
        rng::KahanSum acc;
        for (std::size_t i = 0; i < m; ++i) acc.add(per_traj_psd[i][j]);
        out.psd[j] = acc.value() / static_cast<double>(m);
    }
    out.variance = detail::reduce(per_traj_var).mean;

    out.psd_normalized.resize(n_bins);
    const double b2 = cfg.sigma_b * cfg.sigma_b;
    for (std::size_t j = 0; j < n_bins; ++j)
        out.psd_normalized[j] = b2 > 0.0 ? out.psd[j] / b2 : 0.0;

    rng::KahanSum trap;
    for (std::size_t j = 1; j < n_bins; ++j)
        trap.add(0.5 * (out.psd[j] + out.psd[j - 1]) * (out.omega[j] - out.omega[j - 1]));
    out.integral = trap.value();
    return out;
}

struct EnsembleResult {
    std::vector<Time> times;           ///< effective echo times (rounded to the step grid)
    std::vector<double> mean_signal;   ///< <cos phi> per time
    std::vector<double> stderr_of;     ///< standard error per time
    std::vector<double> mean_phi_sq;   ///< <phi^2>, for the Gaussianity cross-check
    std::size_t n_used = 0;
};

/// Echo ensemble decay. Per trajectory the phase is
///   phi = gamma [ int_0^{tau/2} B dt - int_{tau/2}^{tau} B dt ]
/// by trapezoid on the step grid (pi pulse = instantaneous sign flip), and the
/// signal is <cos phi>. Each tau must satisfy tau/dt >= 100 and is rounded to
/// the nearest even step count.
inline EnsembleResult simulate_echo_decay(const TrajectoryConfig& cfg,
                                          const std::vector<Time>& tau_list,
                                          double gamma = constants::gamma_nv,
                                          std::size_t n_threads = 0) {
    cfg.validate();
    if (tau_list.empty()) throw config_error("mc: echo tau list is empty");
    if (gamma <= 0.0) throw config_error("mc: gamma must be > 0");

    const double dt = cfg.dt.s();
    struct Slot {
        std::size_t half_step;
        std::size_t end_step;
    };
    std::vector<Slot> slots;
    slots.reserve(tau_list.size());
    std::size_t max_step = 0;
    for (const auto& tau : tau_list) {
        const double ratio = tau.s() / dt;
        if (ratio < 100.0)
            throw config_error("mc: echo tau " + std::to_string(tau.s()) +
                               " s not resolvable: tau/dt = " + std::to_string(ratio) +
                               " < 100");
        std::size_t n = static_cast<std::size_t>(std::llround(ratio));
        if (n % 2 == 1) ++n;
        slots.push_back({n / 2, n});
        max_step = std::max(max_step, n);
    }

    const std::size_t m = cfg.n_trajectories;
    const std::size_t n_tau = slots.size();

    // Event list: at which steps the running integral must be sampled.
    struct Event {
        std::size_t step;
        std::size_t slot;
        bool is_half;
    };
    std::vector<Event> events;
    events.reserve(2 * n_tau);
    for (std::size_t k = 0; k < n_tau; ++k) {
        events.push_back({slots[k].half_step, k, true});
        events.push_back({slots[k].end_step, k, false});
    }
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.step < b.step; });

    // cos_phi[k][i]: trajectory i, echo time k. Filled by index, reduced in order.
    std::vector<std::vector<double>> cos_phi(n_tau, std::vector<double>(m, 0.0));
    std::vector<std::vector<double>> phi_sq(n_tau, std::vector<double>(m, 0.0));

    detail::for_each_trajectory(m, n_threads, [&](std::size_t i) {
        OUWalker walker(cfg, i);
        double prev = walker.value();
        double integral = 0.0;  // running trapezoid of B from 0 to step*dt
        std::vector<double> at_half(n_tau, 0.0), at_end(n_tau, 0.0);
        std::size_t next_event = 0;
        for (std::size_t step = 1; step <= max_step; ++step) {
            const double cur = walker.advance();
            integral += 0.5 * dt * (prev + cur);
            prev = cur;
            while (next_event < events.size() && events[next_event].step == step) {
                const Event& e = events[next_event++];
                (e.is_half ? at_half[e.slot] : at_end[e.slot]) = integral;
            }
        }
        for (std::size_t k = 0; k < n_tau; ++k) {
            const double phi = gamma * (2.0 * at_half[k] - at_end[k]);
            cos_phi[k][i] = std::cos(phi);
            phi_sq[k][i] = phi * phi;
        }
    });

    EnsembleResult out;
    out.n_used = m;
    out.times.reserve(n_tau);
    for (std::size_t k = 0; k < n_tau; ++k) {
        out.times.push_back(Time::seconds(static_cast<double>(slots[k].end_step) * dt));
        const auto r = detail::reduce(cos_phi[k]);
        out.mean_signal.push_back(r.mean);
        out.stderr_of.push_back(r.stderr_of_mean);
        out.mean_phi_sq.push_back(detail::reduce(phi_sq[k]).mean);
    }
    return out;
}

} // namespace spinbath::mc
