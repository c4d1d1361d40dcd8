#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace qvlasov {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An invalid field, grid, solver or scan description.
///
/// Carries the offending key so the config reader can point at the line that
/// set it.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what);

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Quadrature or table construction failed to meet its accuracy contract.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The adaptive integrator gave up on a momentum mode.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& reason, double P3, double t, std::array<double, 3> state);

    double momentum() const noexcept { return P3_; }
    double time() const noexcept { return t_; }
    /// (f, g, w) at the point of failure.
    const std::array<double, 3>& state() const noexcept { return state_; }

private:
    double P3_;
    double t_;
    std::array<double, 3> state_;
};

/// Malformed or inconsistent data handed to an observable or a scan.
class DataError : public Error {
public:
    using Error::Error;
};

/// A request exceeds a hard resource budget (the quadratic-cost oracle).
class ResourceError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    IoError(std::filesystem::path path, const std::string& what);

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

/// Resuming a scan against a checkpoint written for a different scan.
class CheckpointMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace qvlasov
