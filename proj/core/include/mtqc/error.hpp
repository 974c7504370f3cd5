#pragma once

#include <stdexcept>
#include <string>

namespace mtqc {

/// A configuration value violates an invariant. `field()` names the offending
/// parameter so the CLI can point at it.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& constraint)
        : std::invalid_argument(field + ": " + constraint), field_(std::move(field)) {}

    [[nodiscard]] const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// The requested round does not fit in the configured cycle time.
class ScheduleInfeasible : public std::runtime_error {
public:
    ScheduleInfeasible(double min_cycle_s, const std::string& what)
        : std::runtime_error(what), min_cycle_s_(min_cycle_s) {}

    [[nodiscard]] double minimal_cycle_seconds() const { return min_cycle_s_; }

private:
    double min_cycle_s_;
};

/// Loss-handling step requested in a state where the protocol forbids it.
class ProtocolError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Exhaustive decoder refused an instance above its size bound.
class TractabilityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// No code distance meets the error budget (physical rate at or above threshold).
class NoDistanceSuffices : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Boundary-element system could not be solved reliably.
class SolverError : public std::runtime_error {
public:
    SolverError(double condition_estimate, const std::string& what)
        : std::runtime_error(what), condition_(condition_estimate) {}

    [[nodiscard]] double condition_estimate() const { return condition_; }

private:
    double condition_;
};

/// The pseudopotential has no interior minimum at some axial slice.
class NilLostError : public std::runtime_error {
public:
    NilLostError(double axial_position_m, const std::string& what)
        : std::runtime_error(what), axial_(axial_position_m) {}

    [[nodiscard]] double axial_position() const { return axial_; }

private:
    double axial_;
};

}  // namespace mtqc
