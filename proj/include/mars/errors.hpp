#pragma once
// Error taxonomy shared by all modules. Every recoverable failure maps to a
// code so callers (and the CLI exit-code mapping) can dispatch without string
// matching.

#include <stdexcept>
#include <string>

namespace mars {

enum class ErrorCode {
  UnknownParent,
  InvalidSensitivity,
  NonPositiveWeight,
  UnknownId,
  UnknownAnchor,
  InvalidFilter,
  MalformedDocument,
  UnknownPredicate,
  DanglingReference,
  BudgetUnsatisfiable,
  EmptyCandidates,
  PrivacyBudgetExhausted,
  NotAdjacent,
  UnknownUser,
  NeverSeen,
  MemberNotLive,
  TooLarge,
  NoGoals,
  ZeroOpportunities,
  UnpairedCells,
  ComponentOutOfRange,
  ScriptFailure,
  InvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnknownParent: return "UnknownParent";
    case ErrorCode::InvalidSensitivity: return "InvalidSensitivity";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::UnknownAnchor: return "UnknownAnchor";
    case ErrorCode::InvalidFilter: return "InvalidFilter";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::UnknownPredicate: return "UnknownPredicate";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::BudgetUnsatisfiable: return "BudgetUnsatisfiable";
    case ErrorCode::EmptyCandidates: return "EmptyCandidates";
    case ErrorCode::PrivacyBudgetExhausted: return "PrivacyBudgetExhausted";
    case ErrorCode::NotAdjacent: return "NotAdjacent";
    case ErrorCode::UnknownUser: return "UnknownUser";
    case ErrorCode::NeverSeen: return "NeverSeen";
    case ErrorCode::MemberNotLive: return "MemberNotLive";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NoGoals: return "NoGoals";
    case ErrorCode::ZeroOpportunities: return "ZeroOpportunities";
    case ErrorCode::UnpairedCells: return "UnpairedCells";
    case ErrorCode::ComponentOutOfRange: return "ComponentOutOfRange";
    case ErrorCode::ScriptFailure: return "ScriptFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace mars
