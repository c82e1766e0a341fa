#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace climb {

// Numerical / domain precondition failures (exit code 3 at the CLI).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent input data (exit code 2 at the CLI).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// advance_cut refuses to resolve a tie that straddles the cut boundary.
class AmbiguousCutError : public DomainError {
public:
    AmbiguousCutError(const std::string& msg, std::vector<std::string> tied)
        : DomainError(msg), tied_ids(std::move(tied)) {}
    std::vector<std::string> tied_ids;
};

} // namespace climb
