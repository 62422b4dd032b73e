#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside an operation's mathematical domain (bad probability, fidelity, shape, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class InvalidContraction : public Error {
public:
    using Error::Error;
};

class InvalidNetwork : public Error {
public:
    using Error::Error;
};

class InvalidPlan : public Error {
public:
    using Error::Error;
};

/// A value type's invariant does not hold (norm, Hermiticity, PSD, unitarity, ...).
class InvariantViolation : public Error {
public:
    using Error::Error;
};

/// Refusal to allocate a dense object beyond the configured guard.
class ResourceLimit : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line), message_(message) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t line_;
    std::string message_;
};

}  // namespace qdq
