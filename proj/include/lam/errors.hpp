#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lam {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

// A menu or alternative required by an operation is absent from the data.
class MissingData : public Error {
public:
    using Error::Error;
};

// The data does not cover enough menus for the requested procedure.
class InsufficientData : public Error {
public:
    using Error::Error;
};

class NotALuceRule : public Error {
public:
    using Error::Error;
};

// rho_AI satisfies IIA but differs from rho_H: compliance is not pinned by
// instability ratios (either alpha in {0,1} or v proportional to u).
class NotIdentified : public Error {
public:
    explicit NotIdentified(const std::string& what,
                           std::string regimes = "alpha in {0,1} or v = lambda*u")
        : Error(what), regimes_(std::move(regimes)) {}
    const std::string& possible_regimes() const { return regimes_; }

private:
    std::string regimes_;
};

// rho_AI equals rho_H: alpha and v cannot be separated.
class PartiallyIdentified : public Error {
public:
    using Error::Error;
};

class DegenerateDivision : public Error {
public:
    using Error::Error;
};

class InconsistentInputs : public Error {
public:
    using Error::Error;
};

class NonGenericFailure : public Error {
public:
    using Error::Error;
};

class UndefinedGap : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace lam
