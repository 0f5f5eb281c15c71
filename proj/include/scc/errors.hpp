#pragma once

#include <stdexcept>
#include <string>

namespace scc {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input contained NaN or Inf, or a computation overflowed.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

/// Shifted system H + sigma*I is singular or indefinite at the requested shift.
class SingularShiftError : public Error {
public:
    using Error::Error;
};

/// Scalar iteration budget exhausted; signals tolerance misconfiguration.
class MaxIterError : public Error {
public:
    using Error::Error;
};

/// Malformed input text. Carries the 1-based line number (0 = whole stream).
class ParseError : public Error {
public:
    ParseError(int line, const std::string& reason)
        : Error("parse error at line " + std::to_string(line) + ": " + reason), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Bad magic bytes, truncated payload, or invalid header in a container file.
class FormatError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class InvalidParamsError : public Error {
public:
    using Error::Error;
};

/// The background curvature worker threw; the run must abort.
class WorkerError : public Error {
public:
    using Error::Error;
};

}  // namespace scc
