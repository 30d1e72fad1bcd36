#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace motif {

/// Base of every error thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `line` is 1-based; 0 means "no particular line".
class ParseError : public Error
{
public:
    ParseError(std::string source, std::size_t line, const std::string & what);

    const std::string & source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

/// Well-formed input that violates a domain invariant. Carries every
/// violated invariant, not just the first one found.
class ValidationError : public Error
{
public:
    explicit ValidationError(std::vector<std::string> problems);
    explicit ValidationError(const std::string & problem);

    const std::vector<std::string> & problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// The instance is too large for the requested engine (oracle caps,
/// symbolic term caps, sieve word width).
class CapacityError : public Error
{
public:
    using Error::Error;
};

} // namespace motif
