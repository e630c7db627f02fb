#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace ionmem {

// Covariance matrix that is not a legal quantum state (asymmetric, or
// negative beyond tolerance when sampled).
class InvalidState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A physical quantity left its allowed range after evaluation, e.g. a loss
// fraction above one. Carries the offending values for reporting.
class PhysicsViolation : public std::runtime_error {
public:
    PhysicsViolation(const std::string& what, std::map<std::string, double> values = {})
        : std::runtime_error(what), values_(std::move(values)) {}

    const std::map<std::string, double>& values() const noexcept { return values_; }

private:
    std::map<std::string, double> values_;
};

// The feedback gain cannot cancel the initial atomic noise (no coupling, or
// the measured light never reaches the detector).
class NoCancellation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Figure of merit undefined because the memory has zero gain.
class MemoryErased : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& constraint)
        : std::runtime_error(field + ": " + constraint), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace ionmem
