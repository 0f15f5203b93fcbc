#pragma once

#include <stdexcept>
#include <string>

namespace fracvol {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside its mathematical domain (H outside (0,1], negative k, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// The input series is too short for the requested statistic.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// A sample generator could not produce the requested series.
class GenerationError : public Error {
public:
    using Error::Error;
};

/// Simulation grid and observation scale are incompatible.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// Tail formula evaluated outside its asymptotic regime.
class OutOfRegimeError : public Error {
public:
    using Error::Error;
};

/// Integrand of the M-function cannot be integrated as requested.
class SingularIntegrandError : public Error {
public:
    using Error::Error;
};

/// Root-finding target lies outside the attainable range.
class NoSolutionError : public Error {
public:
    using Error::Error;
};

/// Malformed input file.
class IngestionError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ParameterError(what);
}

}  // namespace detail
}  // namespace fracvol
