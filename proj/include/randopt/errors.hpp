#pragma once

#include <stdexcept>
#include <string>

namespace randopt {

/// Argument outside the mathematical domain of an operation (u outside (0,1), q < 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid construction parameters for a model object.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Bad search / simulation / scenario configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Caller violated a documented precondition (e.g. E[Q] != Q-hat for the moment check).
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Requested construction exceeds a documented size cap.
class ComplexityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Two analytic routes to the same quantity disagree beyond tolerance.
class NumericalIntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace randopt
