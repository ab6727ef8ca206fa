#pragma once

#include <stdexcept>
#include <string>

namespace dbar {

// Base of every error thrown by the library. The CLI maps `Refusal` to exit
// status 2 and everything else to 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, int coordinate)
        : Error(what + " (coordinate " + std::to_string(coordinate) + ")"), coordinate_(coordinate) {}
    int coordinate() const noexcept { return coordinate_; }

private:
    int coordinate_;
};

class DegenerateBoundaryError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ResolutionError : public Error {
public:
    using Error::Error;
};

class ConstraintViolation : public Error {
public:
    ConstraintViolation(const std::string& what, int worst_node, double worst_value)
        : Error(what + " (worst node " + std::to_string(worst_node) + ", value " + std::to_string(worst_value) + ")"),
          worst_node_(worst_node), worst_value_(worst_value) {}
    int worst_node() const noexcept { return worst_node_; }
    double worst_value() const noexcept { return worst_value_; }

private:
    int worst_node_;
    double worst_value_;
};

class InvalidVariation : public Error {
public:
    InvalidVariation(const std::string& what, double measured)
        : Error(what + " (measured " + std::to_string(measured) + ")"), measured_(measured) {}
    double measured() const noexcept { return measured_; }

private:
    double measured_;
};

class ParseError : public Error {
public:
    using Error::Error;
};

// The mathematical preconditions of a request are not met (the certificate does
// not apply). Distinct from a failure.
class Refusal : public Error {
public:
    using Error::Error;
};

class VacuousCertificate : public Refusal {
public:
    using Refusal::Refusal;
};

class DegeneratePivot : public Refusal {
public:
    using Refusal::Refusal;
};

}  // namespace dbar
