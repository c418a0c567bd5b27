#pragma once

#include <stdexcept>
#include <string>

namespace quasifree {

/// Invalid input: wrong dimensions, parameters outside their domain,
/// malformed configuration.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a trustworthy result
/// (singular system, eigensolver failure, bound violation, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ground-state construction hit a mode with vanishing gap.
class DegenerateModeError : public NumericalError {
public:
    DegenerateModeError(int mode, const std::string& what)
        : NumericalError(what), mode_(mode) {}
    int mode() const noexcept { return mode_; }

private:
    int mode_;
};

/// Steady-state solve on a superoperator with a nontrivial kernel.
class SingularSuperoperatorError : public NumericalError {
public:
    SingularSuperoperatorError(int nullity, const std::string& what)
        : NumericalError(what), nullity_(nullity) {}
    int nullity() const noexcept { return nullity_; }

private:
    int nullity_;
};

}  // namespace quasifree
