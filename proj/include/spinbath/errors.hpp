#pragma once

#include <stdexcept>
#include <string>

namespace spinbath {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent configuration (unknown keys, bad unit tokens,
/// parameter values outside their physical domain). CLI exit code 2.
class config_error : public error {
public:
    using error::error;
};

/// Physical-domain violation in a direct API call (negative time, T <= 0, ...).
/// The CLI maps these to exit code 2 since they originate from config values.
class domain_error : public config_error {
public:
    using config_error::config_error;
};

/// Bad or insufficient input data (empty curve sets, constant signals,
/// too few samples for the requested statistic). CLI exit code 3.
class data_error : public error {
public:
    using error::error;
};

/// Too few data points or degenerate geometry for a statistical estimate.
class statistics_error : public data_error {
public:
    using data_error::data_error;
};

/// Under-determined fit; message lists the deficient parameter directions.
class identifiability_error : public data_error {
public:
    using data_error::data_error;
};

/// Numerical failure: quadrature non-convergence, overflow, root not bracketed.
/// CLI exit code 4.
class numerical_error : public error {
public:
    using error::error;
};

/// Nonlinear fit failed to converge; message carries per-start diagnostics.
class fit_error : public numerical_error {
public:
    using numerical_error::numerical_error;
};

} // namespace spinbath
