#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace illss {

// Base of every failure raised by the library. Each subclass names one
// contract that was violated so callers (and the CLI summary) can report it.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GeometryError : public Error {
public:
    GeometryError(const std::string& what, std::size_t marker)
        : Error(what + " (marker " + std::to_string(marker) + ")"), marker_(marker) {}
    explicit GeometryError(const std::string& what) : Error(what) {}

    std::size_t marker() const noexcept { return marker_; }

private:
    std::size_t marker_ = static_cast<std::size_t>(-1);
};

// Inverse half-Laplacian asked to act on a field with a non-zero mean.
class ZeroModeError : public Error {
public:
    using Error::Error;
};

// Curve (or marker) too close to the periodic box boundary.
class DomainFitError : public Error {
public:
    using Error::Error;
};

// Discretization too coarse for the requested operation.
class ResolutionError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class NumericFailure : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class AuditInsufficient : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace illss
