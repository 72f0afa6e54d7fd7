#pragma once

#include <stdexcept>
#include <string>

namespace gyule {

// Argument outside the region where a function or model is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Gauss hypergeometric evaluated at a non-positive integer lower parameter.
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A numerical method stopped before reaching its tolerance. Carries the best
// value obtained so far and its error estimate.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double partial, double abs_error)
        : std::runtime_error(what), partial_(partial), abs_error_(abs_error) {}

    double partial_value() const noexcept { return partial_; }
    double abs_error_estimate() const noexcept { return abs_error_; }

private:
    double partial_;
    double abs_error_;
};

// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed record in a text input; line is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long line) : std::runtime_error(what), line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

}  // namespace gyule
