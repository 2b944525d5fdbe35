#pragma once

#include <stdexcept>

namespace kcopt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input files / wire formats.
struct FormatError : Error { using Error::Error; };

// Circuit-side preconditions.
struct NotDecomposable : Error { using Error::Error; };
struct NotSmooth : Error { using Error::Error; };
struct Inconsistent : Error { using Error::Error; };
struct InconsistentTerm : Error { using Error::Error; };
struct NotDnfShape : Error { using Error::Error; };

// OBDD engine.
struct FreshVarOccurs : Error { using Error::Error; };
struct OrderMismatch : Error { using Error::Error; };

// Objectives and scores.
struct OwaArityMismatch : Error { using Error::Error; };
struct IncomparableScores : Error { using Error::Error; };
struct FamilyMismatch : Error { using Error::Error; };

// Optimizer routing.
struct NExceedsCap : Error { using Error::Error; };
struct TooManyVars : Error { using Error::Error; };
struct IntractableCombination : Error { using Error::Error; };

// Instance generators.
struct BadSetSize : Error { using Error::Error; };
struct ClausePolarityViolation : Error { using Error::Error; };

}  // namespace kcopt
