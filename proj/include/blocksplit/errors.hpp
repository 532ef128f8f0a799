#pragma once

#include <stdexcept>
#include <string>

namespace blocksplit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid (B, r), strategy/parameter mismatch, bad flag values.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Operation on a histogram that cannot support it (empty, missing size).
class StateError : public Error {
public:
    using Error::Error;
};

/// Caller broke a documented precondition (mass mismatch, short batch).
class ContractError : public Error {
public:
    using Error::Error;
};

/// A strategy observed a block size its invariant rules out.
class InvariantError : public Error {
public:
    using Error::Error;
};

/// Numerical evidence contradicts a spectral assumption (rank, positivity).
class SpectralError : public Error {
public:
    using Error::Error;
};

/// Closed form or bound requested outside the range where it is defined.
class OutOfRangeError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed input file; the message names the offending line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace blocksplit
