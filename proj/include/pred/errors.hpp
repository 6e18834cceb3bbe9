#pragma once

#include <stdexcept>
#include <string>

namespace pred {

// Raised when an operation's stated precondition is violated
// (bad parameter ranges, non-prefix-free sets, non-dyadic values, ...).
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an input file or spec string is malformed.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an enumeration or refinement loop exceeds its step cap.
// Distinguishes "gave up" from "impossible"; callers may retry with a
// larger budget.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pred
