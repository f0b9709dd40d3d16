#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tqp {

/// Failure categories surfaced by the library. The CLI maps each one to an exit code.
enum class ErrorKind {
    InvalidArgument,
    NonClassicForm,
    NotPositiveDefinite,
    OutOfScope,
    AssumptionViolated,
    FactorizationLimit,
    EnumerationBudgetExceeded,
    PreconditionViolated,
    GiveUp,
    Parse,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::NonClassicForm: return "NonClassicForm";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::OutOfScope: return "OutOfScope";
        case ErrorKind::AssumptionViolated: return "AssumptionViolated";
        case ErrorKind::FactorizationLimit: return "FactorizationLimit";
        case ErrorKind::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
        case ErrorKind::PreconditionViolated: return "PreconditionViolated";
        case ErrorKind::GiveUp: return "GiveUp";
        case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace tqp
