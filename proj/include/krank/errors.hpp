#pragma once

#include <stdexcept>
#include <string>

namespace krank {

// Argument lies outside a precomputed table or a formula's stated range.
class RangeError : public std::out_of_range {
public:
    explicit RangeError(const std::string& msg) : std::out_of_range(msg) {}
};

// Argument outside the mathematical domain of an expression (log of a
// nonpositive number, p-hat of n < 1, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// A requested computation exceeds the configured memory or enumeration budget.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

class LengthError : public std::length_error {
public:
    explicit LengthError(const std::string& msg) : std::length_error(msg) {}
};

class CorruptFileError : public std::runtime_error {
public:
    explicit CorruptFileError(const std::string& msg) : std::runtime_error(msg) {}
};

class RecurrenceMismatchError : public std::runtime_error {
public:
    explicit RecurrenceMismatchError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent sweep specification.
class SpecError : public std::invalid_argument {
public:
    explicit SpecError(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace krank
