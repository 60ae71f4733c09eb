#include "opquot/errors.hpp"

namespace opquot {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorKind::RangeInclusionViolated: return "RangeInclusionViolated";
    case ErrorKind::KernelInclusionViolated: return "KernelInclusionViolated";
    case ErrorKind::RangesNotEqual: return "RangesNotEqual";
    case ErrorKind::KernelsNotEqual: return "KernelsNotEqual";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::DenominatorMismatch: return "DenominatorMismatch";
    case ErrorKind::ReverseOrderConditionViolated: return "ReverseOrderConditionViolated";
    case ErrorKind::InvalidWitness: return "InvalidWitness";
    case ErrorKind::SimplificationConditionViolated: return "SimplificationConditionViolated";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

bool Error::is_precondition() const noexcept {
    switch (kind_) {
    case ErrorKind::RangeInclusionViolated:
    case ErrorKind::KernelInclusionViolated:
    case ErrorKind::RangesNotEqual:
    case ErrorKind::KernelsNotEqual:
    case ErrorKind::OutOfDomain:
    case ErrorKind::DenominatorMismatch:
    case ErrorKind::ReverseOrderConditionViolated:
    case ErrorKind::InvalidWitness:
    case ErrorKind::SimplificationConditionViolated:
    case ErrorKind::NotHermitian:
    case ErrorKind::NotPositiveSemidefinite:
    case ErrorKind::DimensionMismatch:
        return true;
    default:
        return false;
    }
}

} // namespace opquot
