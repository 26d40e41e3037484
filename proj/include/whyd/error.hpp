#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace whyd {

enum class ErrorKind {
    // model / frontend
    UnsafeRule,
    HeadExtensional,
    ArityMismatch,
    NegationUnsupported,
    SyntaxError,
    DuplicateFactAcrossPartitions,
    DuplicateLabel,
    NonConjunctiveBody,
    // evaluation and query targets
    UnknownPredicate,
    NotAnAnswer,
    NotEndogenous,
    NotACause,
    // abduction
    EmptyObservation,
    ObservationNotEntailable,
    ObservationBoundExceeded,
    UnknownHypothesis,
    NotBoolean,
    NotEntailed,
    NonHornClause,
    // view update / constraints
    NotSubinstance,
    NotConjunctive,
    SchemaMismatch,
    InstanceViolatesSigma,
    SearchLimitExceeded,
};

std::string_view to_string(ErrorKind kind);

/// Every library failure is reported as an Error carrying a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, std::string(to_string(kind)) + ": " + message);
}

}  // namespace whyd
