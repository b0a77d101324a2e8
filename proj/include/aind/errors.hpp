#pragma once

#include <stdexcept>
#include <string>

namespace aind {

// Malformed or invalid caller-supplied data (maps to CLI exit code 1).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A request that exceeds an enumeration or solver cutoff (exit code 2).
class CapabilityError : public std::runtime_error {
public:
    explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure inside an optimization kernel.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace aind
