#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace envtool {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Expression text could not be parsed. offset is a byte position into the
// source; expected lists the token classes that would have been accepted.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t offset, std::string expected)
        : Error(msg), offset(offset), expected(std::move(expected)) {}
    std::size_t offset;
    std::string expected;
};

// Evaluation hit a primitive outside its real domain (sqrt of a negative,
// log of a non-positive, division by zero, tan at a pole).
struct EvalDomainError : Error {
    EvalDomainError(const std::string& msg, std::size_t offset, double u, double v)
        : Error(msg), offset(offset), u(u), v(v) {}
    std::size_t offset;
    double u, v;
};

struct ConfigError : Error {
    using Error::Error;
};

struct SingularPointError : Error {
    SingularPointError(const std::string& msg, double u, double v) : Error(msg), u(u), v(v) {}
    double u, v;
};

struct FramedAxiomError : Error {
    using Error::Error;
};

struct DegenerateJacobianError : Error {
    using Error::Error;
};

struct NotCreativeError : Error {
    using Error::Error;
};

struct BranchUnavailableError : Error {
    using Error::Error;
};

struct HypothesisNotMetError : Error {
    using Error::Error;
};

struct NoOpenNeighborhoodError : Error {
    using Error::Error;
};

struct IllDefinedOmegaError : Error {
    using Error::Error;
};

struct NotApplicableError : Error {
    using Error::Error;
};

}  // namespace envtool
