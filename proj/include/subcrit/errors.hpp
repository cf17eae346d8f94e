#ifndef SUBCRIT_ERRORS_HPP
#define SUBCRIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace subcrit {

// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- type-space construction ---

class EmptySpace : public Error {
public:
    EmptySpace() : Error("type space must contain at least one atom") {}
};

class NonPositiveWeight : public Error {
public:
    explicit NonPositiveWeight(double w)
        : Error("atom weight must be positive, got " + std::to_string(w)) {}
};

class NonPositiveActivity : public Error {
public:
    explicit NonPositiveActivity(double a)
        : Error("atom activity must be positive, got " + std::to_string(a)) {}
};

class DuplicateLabel : public Error {
public:
    explicit DuplicateLabel(double label)
        : Error("duplicate atom label " + std::to_string(label)) {}
};

class TailTooHeavy : public Error {
public:
    explicit TailTooHeavy(const std::string& family)
        : Error("family '" + family + "' has no exponential tail certificate") {}
};

class TolOutOfRange : public Error {
public:
    explicit TolOutOfRange(double tol)
        : Error("tail tolerance must lie in (0, 1), got " + std::to_string(tol)) {}
};

// --- solvers ---

class ExponentOverflow : public Error {
public:
    ExponentOverflow(double exponent, double cap)
        : Error("exponent " + std::to_string(exponent) + " exceeds overflow guard " +
                std::to_string(cap)) {}
};

class NotSubcritical : public Error {
public:
    NotSubcritical(double c, double c_cr)
        : Error("c = " + std::to_string(c) + " is not below the critical constant " +
                std::to_string(c_cr)) {}
};

// Carries the state of the failed bracket search so callers can report it.
class BracketNotFound : public Error {
public:
    BracketNotFound(const std::string& detail) : Error("bracket not found: " + detail) {}
};

// --- sampling / misc ---

class UnknownRootLabel : public Error {
public:
    explicit UnknownRootLabel(double label)
        : Error("root label " + std::to_string(label) + " is not an atom of the space") {}
};

class OutOfRange : public Error {
public:
    explicit OutOfRange(const std::string& what) : Error(what) {}
};

} // namespace subcrit

#endif
