#pragma once

#include <stdexcept>
#include <string>

namespace klein {

enum class ErrorKind {
    invalid_argument,
    invalid_face,
    invalid_map,
    degenerate,
    out_of_range,
    singular,
    unbounded_region,
    insufficient_depth,
    unsupported,
    budget_exceeded,
    no_samples,
    parse_error,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised when an iterative numerical method runs out of budget; carries the
/// best estimate reached so far.
class BudgetExceeded : public Error {
public:
    BudgetExceeded(const std::string& message, double best_value, double best_error)
        : Error(ErrorKind::budget_exceeded, message),
          best_value_(best_value),
          best_error_(best_error) {}

    double best_value() const noexcept { return best_value_; }
    double best_error() const noexcept { return best_error_; }

private:
    double best_value_;
    double best_error_;
};

}  // namespace klein
