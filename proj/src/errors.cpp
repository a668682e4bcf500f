#include "cmspace/errors.hpp"

namespace cmspace {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::DegenerateSpectrum: return "DegenerateSpectrum";
    case Errc::NonConvergent: return "NonConvergent";
    case Errc::Singular: return "Singular";
    case Errc::NonzeroCorner: return "NonzeroCorner";
    case Errc::InfeasibleRow: return "InfeasibleRow";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DegenerateA: return "DegenerateA";
    case Errc::ZeroLastRowEntry: return "ZeroLastRowEntry";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::NotStronglySemisimple: return "NotStronglySemisimple";
    case Errc::Eq4Violated: return "Eq4Violated";
    case Errc::EigenMismatch: return "EigenMismatch";
    case Errc::MSystemSingular: return "MSystemSingular";
    case Errc::DegenerateConstraint: return "DegenerateConstraint";
    case Errc::ZeroPair: return "ZeroPair";
    case Errc::RootFindingFailure: return "RootFindingFailure";
    case Errc::BranchAmbiguity: return "BranchAmbiguity";
    case Errc::SearchExhausted: return "SearchExhausted";
    case Errc::IllConditionedFit: return "IllConditionedFit";
    case Errc::WitnessFailsNonvanishing: return "WitnessFailsNonvanishing";
  }
  return "Unknown";
}

}  // namespace cmspace
