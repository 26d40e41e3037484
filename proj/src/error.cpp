#include "whyd/error.hpp"

namespace whyd {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::UnsafeRule: return "UnsafeRule";
        case ErrorKind::HeadExtensional: return "HeadExtensional";
        case ErrorKind::ArityMismatch: return "ArityMismatch";
        case ErrorKind::NegationUnsupported: return "NegationUnsupported";
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::DuplicateFactAcrossPartitions: return "DuplicateFactAcrossPartitions";
        case ErrorKind::DuplicateLabel: return "DuplicateLabel";
        case ErrorKind::NonConjunctiveBody: return "NonConjunctiveBody";
        case ErrorKind::UnknownPredicate: return "UnknownPredicate";
        case ErrorKind::NotAnAnswer: return "NotAnAnswer";
        case ErrorKind::NotEndogenous: return "NotEndogenous";
        case ErrorKind::NotACause: return "NotACause";
        case ErrorKind::EmptyObservation: return "EmptyObservation";
        case ErrorKind::ObservationNotEntailable: return "ObservationNotEntailable";
        case ErrorKind::ObservationBoundExceeded: return "ObservationBoundExceeded";
        case ErrorKind::UnknownHypothesis: return "UnknownHypothesis";
        case ErrorKind::NotBoolean: return "NotBoolean";
        case ErrorKind::NotEntailed: return "NotEntailed";
        case ErrorKind::NonHornClause: return "NonHornClause";
        case ErrorKind::NotSubinstance: return "NotSubinstance";
        case ErrorKind::NotConjunctive: return "NotConjunctive";
        case ErrorKind::SchemaMismatch: return "SchemaMismatch";
        case ErrorKind::InstanceViolatesSigma: return "InstanceViolatesSigma";
        case ErrorKind::SearchLimitExceeded: return "SearchLimitExceeded";
    }
    return "Unknown";
}

}  // namespace whyd
