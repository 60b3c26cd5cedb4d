#pragma once

#include <stdexcept>
#include <string>

namespace sumcap {

// An argument violated a documented precondition: bad dimensions, unsorted
// input, negative power, malformed flags.
class InvalidInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numeric routine could not produce a trustworthy result: eigensolver
// non-convergence, a singular log-det argument, non-finite intermediates.
// Carries the residual norm of the failed computation when one is available.
class NumericFailureError : public std::runtime_error {
public:
    explicit NumericFailureError(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Raised by deflect() when a previous gradient norm is zero and no reset was
// requested. The solver catches this and restarts from the plain gradient.
class DegenerateDeflectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Channel-document errors name the path of the offending element, e.g.
// "H[2][0][3]".
class ParseError : public InvalidInputError {
public:
    ParseError(const std::string& path, const std::string& what)
        : InvalidInputError(path + ": " + what), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// A reference oracle failed to reach its tolerance. This signals broken test
// infrastructure, not a product failure.
class OracleFailureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sumcap
