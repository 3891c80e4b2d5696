#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chaoscope {

// Base of every library error. Callers that only care about "something in
// chaoscope failed" can catch this; the CLI maps the concrete types onto
// exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Both homogeneous output components vanished (common root slipped through).
class DegenerateResult : public Error {
public:
    using Error::Error;
};

// Numerator and denominator share a root, or the map is otherwise unusable.
class DegenerateMap : public Error {
public:
    using Error::Error;
};

class SolverFailure : public Error {
public:
    using Error::Error;
};

// Post-selected branch has zero amplitude.
class ZeroBranch : public Error {
public:
    using Error::Error;
};

class ZeroParameter : public Error {
public:
    using Error::Error;
};

class GateOrderMismatch : public Error {
public:
    using Error::Error;
};

class ToleranceNotMet : public Error {
public:
    using Error::Error;
};

class PoleInput : public Error {
public:
    using Error::Error;
};

class PoleEncountered : public Error {
public:
    PoleEncountered(std::size_t step, const std::string& what)
        : Error(what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class IoFailure : public Error {
public:
    IoFailure(std::string path, const std::string& cause)
        : Error("cannot access '" + path + "': " + cause), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace chaoscope
