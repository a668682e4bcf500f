#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace cmspace {

enum class Errc {
  ShapeMismatch,
  DegenerateSpectrum,
  NonConvergent,
  Singular,
  NonzeroCorner,
  InfeasibleRow,
  InvalidArgument,
  DegenerateA,
  ZeroLastRowEntry,
  NotNormalized,
  NotStronglySemisimple,
  Eq4Violated,
  EigenMismatch,
  MSystemSingular,
  DegenerateConstraint,
  ZeroPair,
  RootFindingFailure,
  BranchAmbiguity,
  SearchExhausted,
  IllConditionedFit,
  WitnessFailsNonvanishing,
};

std::string_view to_string(Errc code) noexcept;

/// Numerical or contract failure raised by the library. `op` names the
/// operation that failed so CLI reports can point at it.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string op, const std::string& detail)
      : std::runtime_error(std::string(op) + ": " + std::string(to_string(code)) +
                           (detail.empty() ? "" : " (" + detail + ")")),
        code_(code),
        op_(std::move(op)) {}

  Errc code() const noexcept { return code_; }
  const std::string& op() const noexcept { return op_; }

 private:
  Errc code_;
  std::string op_;
};

}  // namespace cmspace
