#pragma once

#include "cmspace/linalg.hpp"
#include "cmspace/variety.hpp"

namespace cmspace {

struct RegularityReport {
  bool is_regular_semisimple_A = false;
  bool is_regular_semisimple_Ahat = false;
  bool in_g0hat = false;
  bool g_regular = false;
  int orbit_dim = 0;
  double min_gap = 0.0;  // smallest eigenvalue gap over A and Â

  bool is_strongly_semisimple() const {
    return in_g0hat && is_regular_semisimple_A && is_regular_semisimple_Ahat;
  }
};

/// Simple spectrum: min pairwise eigenvalue gap > tol·max(1, ‖M‖_F).
bool is_regular_semisimple(const CMat& m, double tol = kDefaultTol);

/// Rank of ξ ↦ [diag(ξ, 0), Â] on 𝔤𝔩_n. Equals n² exactly when the
/// stabilizer of Â in G is trivial.
int orbit_dimension(const AugmentedPair& p, double tol = kDefaultTol);

bool is_g_regular(const AugmentedPair& p, double tol = kDefaultTol);

/// Â ∈ ĝ⁰. Requires A to be regular semisimple; throws DegenerateA otherwise.
bool in_g0hat(const AugmentedPair& p, double tol = kDefaultTol);

RegularityReport regularity(const AugmentedPair& p, double tol = kDefaultTol);

struct NormalizedPair {
  AugmentedPair pair;
  GaugeElement gauge;
};

/// G-conjugates Â into the form with diagonal upper-left block (sorted
/// eigenvalues) and a last row of ones. B̂ is carried along.
NormalizedPair normalize(const AugmentedPair& p, double tol = kDefaultTol);

/// Same, keeping the diagonal of A in the order nearest `lambda_order`.
NormalizedPair normalize_ordered(const AugmentedPair& p, const CVec& lambda_order,
                                 double tol = kDefaultTol);

/// Â already has diagonal A and unit last row, to tol·max(1, ‖Â‖).
bool is_normalized(const AugmentedPair& p, double tol = kDefaultTol);

}  // namespace cmspace
