#pragma once

#include <stdexcept>
#include <string>

namespace fracrd {

/// Configuration file rejected (unknown key, type mismatch, range violation).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Iterative solver failed to reach its tolerance within the iteration cap.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite values appeared during time integration.
class BlowUpError : public std::runtime_error {
public:
    explicit BlowUpError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Solution mass reached the guard band: the periodic box is too small for the run.
class DomainTooSmallError : public std::runtime_error {
public:
    explicit DomainTooSmallError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A runtime certificate (residual sign, bound inequality, consistency check) failed.
class CertificateError : public std::runtime_error {
public:
    explicit CertificateError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace fracrd
