#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace noether
{

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Malformed expression or scenario text. `position` is a 0-based offset into
// the offending string when known.
class ParseError : public Error
{
public:
    ParseError(const std::string &msg, std::size_t position)
        : Error(msg + " (at position " + std::to_string(position) + ")"), position_(position)
    {
    }
    explicit ParseError(const std::string &msg) : Error(msg), position_(std::string::npos) {}

    std::size_t position() const noexcept
    {
        return position_;
    }

private:
    std::size_t position_;
};

// Mathematical failure: degenerate Lagrangian, singular system, unsupported
// expression class, Newton non-convergence, integration blow-up.
class MathError : public Error
{
public:
    using Error::Error;
};

// Numeric evaluation failure: missing assignment.
class EvalError : public Error
{
public:
    using Error::Error;
};

// Evaluation outside the real domain (log of non-positive value, division by
// zero, non-finite result).
class DomainError : public EvalError
{
public:
    using EvalError::EvalError;
};

} // namespace noether
