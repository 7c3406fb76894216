#pragma once

#include <stdexcept>
#include <string>

namespace pdm {

/// Base of every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

    /// Validation errors map to exit status 1, everything else to 2.
    virtual bool is_validation() const noexcept { return false; }

private:
    std::string kind_;
};

class InvalidParameter : public Error {
public:
    explicit InvalidParameter(const std::string& what) : Error("invalid_parameter", what) {}
    bool is_validation() const noexcept override { return true; }
};

class InvalidAmplitude : public Error {
public:
    explicit InvalidAmplitude(const std::string& what) : Error("invalid_amplitude", what) {}
    bool is_validation() const noexcept override { return true; }
};

class DomainViolation : public Error {
public:
    explicit DomainViolation(const std::string& what) : Error("domain_violation", what) {}
};

class EmptyDomain : public Error {
public:
    explicit EmptyDomain(const std::string& what) : Error("empty_domain", what) {}
};

class DivisionByZero : public Error {
public:
    explicit DivisionByZero(const std::string& what) : Error("division_by_zero", what) {}
};

class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double achieved)
        : Error("quadrature_nonconvergence", what), achieved_(achieved) {}
    double achieved_error() const noexcept { return achieved_; }

private:
    double achieved_;
};

class NoBracket : public Error {
public:
    explicit NoBracket(const std::string& what) : Error("no_bracket", what) {}
};

class NonMonotone : public Error {
public:
    explicit NonMonotone(const std::string& what) : Error("non_monotone", what) {}
};

class NonMonotoneTau : public Error {
public:
    explicit NonMonotoneTau(const std::string& what) : Error("non_monotone_tau", what) {}
};

class DomainEscape : public Error {
public:
    DomainEscape(const std::string& what, double t) : Error("domain_escape", what), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

class StepUnderflow : public Error {
public:
    StepUnderflow(const std::string& what, double t) : Error("step_underflow", what), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

class InsufficientCycles : public Error {
public:
    explicit InsufficientCycles(const std::string& what) : Error("insufficient_cycles", what) {}
};

}  // namespace pdm
