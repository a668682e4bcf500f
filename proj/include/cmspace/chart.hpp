#pragma once

#include <optional>
#include <utility>

#include "cmspace/canonical.hpp"
#include "cmspace/linalg.hpp"
#include "cmspace/variety.hpp"

namespace cmspace {

/// diag(τ, …, τ, −nτ); traceless by construction.
struct TauHat {
  int n = 1;
  Cx tau{1.0, 0.0};

  CMat matrix() const { return tau_hat(n, tau); }
};

/// Components of an (n+1)×(n+1) matrix along m⁺ (last column without the
/// corner), m⁻ (last row without the corner) and everything else.
struct MSplit {
  CMat plus, minus, rest;
};

CMat project_mplus(const CMat& m);
CMat project_mminus(const CMat& m);
MSplit split_m(const CMat& m);
/// The m⁺ element whose last column is (x; 0).
CMat embed_mplus(const CVec& x);

/// B̂ = B1 + B2 with B1 = diag(μ, 0), [A, B1] = 0 and [Â, B2] = τ̂ + m⁺(m).
/// g diagonalizes Â; g·B2·g⁻¹ = D_μ̂ + S with S off-diagonal.
struct Decomposition {
  CMat B1, B2;
  CVec mu;
  CVec m;
  CVec lambdahat;
  CMat g, g_inv;
  CMat D_muhat;
  CMat S;
  Cx tau;

  CVec muhat() const { return D_muhat.diagonal(); }
};

/// Local coordinates (λ, λ̂, μ, μ̂; τ) of a strongly semisimple pair.
struct ChartPoint {
  CVec lambda;     // n
  CVec lambdahat;  // n + 1
  CVec mu;         // n
  CVec muhat;      // n + 1
  Cx tau{1.0, 0.0};

  int n() const { return static_cast<int>(lambda.size()); }
  void validate(const char* op, double tol = kDefaultTol) const;
};

/// Requires Â normalized, strongly semisimple, and [Â, B̂] ∈ τ̂ + m.
/// `lambdahat_order` fixes which eigenvalue of Â is the j-th; by default
/// they are sorted lexicographically.
Decomposition decompose(const AugmentedPair& p, Cx tau, double tol = kDefaultTol,
                        const std::optional<CVec>& lambdahat_order = std::nullopt);

/// τ read off the upper-left block of [Â, B̂].
Cx infer_tau(const AugmentedPair& p);

ChartPoint to_chart(const AugmentedPair& p, double tol = kDefaultTol);

/// Chart coordinates with λ and λ̂ listed in the order nearest to those of
/// `reference`; used to follow coordinates continuously along a path.
ChartPoint to_chart_tracked(const AugmentedPair& p, const ChartPoint& reference,
                            double tol = kDefaultTol);

struct ChartReconstruction {
  AugmentedPair pair;
  Decomposition decomposition;
};

/// Builds the pair in normal form from chart coordinates. The j-th
/// eigenvalue of Â is lambdahat[j] and carries muhat[j].
ChartReconstruction from_chart_detail(const ChartPoint& c, double tol = kDefaultTol);
AugmentedPair from_chart(const ChartPoint& c, double tol = kDefaultTol);

/// (tr Â − tr A, corner of B̂). Both vanish on N × {0}.
std::pair<Cx, Cx> slice_residual(const AugmentedPair& p);

/// corner(B̂) as an affine function of μ̂ at fixed (λ, λ̂, μ, τ):
/// corner = coefficients·μ̂ + offset.
struct CornerAffine {
  CVec coefficients;
  Cx offset;
};

CornerAffine corner_affine(const ChartPoint& c, double tol = kDefaultTol);

/// Minimal-norm change of μ̂ that zeroes corner(B̂).
ChartPoint solve_slice_muhat(const ChartPoint& c, double tol = kDefaultTol);

/// (λ, λ̂, μ, μ̂) stacked into one vector of length 4n + 2.
CVec flatten(const ChartPoint& c);
ChartPoint unflatten(const CVec& coords, int n, Cx tau);

/// Largest coordinate difference after matching b's eigenvalue labels to a's.
double chart_distance(const ChartPoint& a, const ChartPoint& b);

/// Central-difference Jacobian of to_chart ∘ from_chart at c.
CMat chart_jacobian(const ChartPoint& c, double step = 1e-6, double tol = kDefaultTol);

}  // namespace cmspace
