#include "col/error.hpp"

namespace col {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SeedError: return "SeedError";
    case ErrorCode::DuplicateConcept: return "DuplicateConcept";
    case ErrorCode::UnknownConcept: return "UnknownConcept";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::DuplicateFeature: return "DuplicateFeature";
    case ErrorCode::DuplicateValue: return "DuplicateValue";
    case ErrorCode::DuplicateFrame: return "DuplicateFrame";
    case ErrorCode::UnknownFrame: return "UnknownFrame";
    case ErrorCode::UnknownReference: return "UnknownReference";
    case ErrorCode::ReciprocityConflict: return "ReciprocityConflict";
    case ErrorCode::UnguardedDivision: return "UnguardedDivision";
    case ErrorCode::InUse: return "InUse";
    case ErrorCode::MissingExternal: return "MissingExternal";
    case ErrorCode::GuardError: return "GuardError";
    case ErrorCode::Inconsistent: return "Inconsistent";
    case ErrorCode::NonInvertible: return "NonInvertible";
    case ErrorCode::Unbound: return "Unbound";
    case ErrorCode::NoCause: return "NoCause";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ProtocolError: return "ProtocolError";
    case ErrorCode::UnknownValue: return "UnknownValue";
    case ErrorCode::MissingLabel: return "MissingLabel";
    case ErrorCode::ModeError: return "ModeError";
    case ErrorCode::NoEvidence: return "NoEvidence";
    case ErrorCode::ClassSetMismatch: return "ClassSetMismatch";
    case ErrorCode::NotOrdinal: return "NotOrdinal";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::InvalidKb: return "InvalidKb";
    case ErrorCode::IoError: return "IoError";
  }
  return "Error";
}

}  // namespace col
