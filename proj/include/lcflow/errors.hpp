#pragma once

#include <stdexcept>
#include <string>

namespace lcflow {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A director sample is too short to be projected onto the sphere.
class DegenerateDirector : public Error {
public:
    using Error::Error;
};

/// A ratio or inequality is undefined because a denominator vanishes.
class DegenerateInput : public Error {
public:
    using Error::Error;
};

/// The step-size controller asked for dt below dt_min.
class StepCollapse : public Error {
public:
    StepCollapse(const std::string& what, double dt_required)
        : Error(what), dt_required_(dt_required) {}
    double dt_required() const noexcept { return dt_required_; }

private:
    double dt_required_;
};

class NonFinite : public Error {
public:
    using Error::Error;
};

class Infeasible : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line) : Error(what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class ValidationError : public Error {
public:
    ValidationError(const std::string& what, std::string key)
        : Error(what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class BadMagic : public Error {
public:
    using Error::Error;
};

class VersionMismatch : public Error {
public:
    using Error::Error;
};

class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace lcflow
