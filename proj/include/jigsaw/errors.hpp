#pragma once

#include <stdexcept>
#include <string>

namespace jigsaw {

// Argument outside the valid domain (bad piece id, bad threshold, mixed configs).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An operation was invoked in a state its precondition forbids.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Exact enumeration requested for a grid whose state space is too large.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

class UnsupportedModeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A sweep cell failed (strict mode cap hit, or no completed trials to aggregate).
class SweepError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    IoError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace jigsaw
