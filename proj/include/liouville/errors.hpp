#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liouville {

enum class ErrorKind {
    order_limit_exceeded,
    dimension_mismatch,
    insufficient_arguments,
    insufficient_jet_order,
    basepoint_mismatch,
    order_mismatch,
    zero_order_jet,
    domain_violation,
    non_square,
    syntax_error,
    non_integer_exponent,
    smoothness_budget_exceeded,
    vanishing_wronskian,
    ill_conditioned_sample,
    validation_failure,
    schema_error,
    io_error,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::order_limit_exceeded:       return "order-limit-exceeded";
        case ErrorKind::dimension_mismatch:         return "dimension-mismatch";
        case ErrorKind::insufficient_arguments:     return "insufficient-arguments";
        case ErrorKind::insufficient_jet_order:     return "insufficient-jet-order";
        case ErrorKind::basepoint_mismatch:         return "basepoint-mismatch";
        case ErrorKind::order_mismatch:             return "order-mismatch";
        case ErrorKind::zero_order_jet:             return "zero-order-jet";
        case ErrorKind::domain_violation:           return "domain-violation";
        case ErrorKind::non_square:                 return "non-square";
        case ErrorKind::syntax_error:               return "syntax-error";
        case ErrorKind::non_integer_exponent:       return "non-integer-exponent";
        case ErrorKind::smoothness_budget_exceeded: return "smoothness-budget-exceeded";
        case ErrorKind::vanishing_wronskian:        return "vanishing-wronskian";
        case ErrorKind::ill_conditioned_sample:     return "ill-conditioned-sample";
        case ErrorKind::validation_failure:         return "validation-failure";
        case ErrorKind::schema_error:               return "schema-error";
        case ErrorKind::io_error:                   return "io-error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

/// Parse error carrying the byte offset of the offending token.
class SyntaxError : public Error {
  public:
    SyntaxError(std::size_t offset, const std::string& message)
        : Error(ErrorKind::syntax_error, message + " (at offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

  private:
    std::size_t offset_;
};

}  // namespace liouville
