#ifndef Q3_ERRORS_HPP
#define Q3_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace q3 {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller passed arguments outside an operation's domain.
class UsageError : public Error {
public:
    using Error::Error;
};

// A requested coefficient lies beyond the known horizon, or a horizon cap was hit.
class PrecisionError : public Error {
public:
    using Error::Error;
};

// A result would leave the integers (e.g. inverting a series with non-unit lead).
class IntegralityError : public Error {
public:
    using Error::Error;
};

// An input does not satisfy a documented precondition (e.g. a table too short).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// A structural fact the construction relies on did not hold.
class StructuralError : public Error {
public:
    using Error::Error;
};

// Two independently computed series disagreed.
class CertificationError : public Error {
public:
    CertificationError(const std::string& what, std::int64_t exponent, std::string expected,
                       std::string actual)
        : Error(what + " (first difference at exponent " + std::to_string(exponent) + ")"),
          exponent_(exponent), expected_(std::move(expected)), actual_(std::move(actual)) {}

    std::int64_t exponent() const noexcept { return exponent_; }
    const std::string& expected() const noexcept { return expected_; }
    const std::string& actual() const noexcept { return actual_; }

private:
    std::int64_t exponent_;
    std::string expected_;
    std::string actual_;
};

}  // namespace q3

#endif
