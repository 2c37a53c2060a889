#pragma once

#include <stdexcept>
#include <string>

namespace protmeas {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An index or parameter lies outside its admissible range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// The truncated Fock basis is too small for the requested object.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, std::size_t required_dim)
        : Error(what), required_dim_(required_dim) {}

    std::size_t required_dim() const noexcept { return required_dim_; }

private:
    std::size_t required_dim_;
};

/// Adaptive quadrature failed to reach its tolerance.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}

    double achieved_tolerance() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// A precondition on an argument was violated (e.g. a non-Hermitian observable).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Pre- and post-selected states are (nearly) orthogonal; the weak value is unreliable.
class OrthogonalPostSelectionError : public Error {
public:
    OrthogonalPostSelectionError(const std::string& what, double overlap)
        : Error(what), overlap_(overlap) {}

    double overlap() const noexcept { return overlap_; }

private:
    double overlap_;
};

/// A time-stepping result did not settle under step refinement.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Invalid experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure while writing results.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace protmeas
