#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cmspace {

using Cx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-9;

/// Diagonalization g·M·g⁻¹ = diag(values).
///
/// Columns of `g_inv` are the right eigenvectors, each with unit 2-norm and
/// its first entry of non-negligible modulus rotated onto the positive real
/// axis. Values are ordered by (Re, Im) lexicographically unless an explicit
/// order was requested.
struct Eigendecomposition {
  CVec values;
  CMat g;
  CMat g_inv;
  double condition = 1.0;  // σ_max/σ_min of g_inv
};

bool lex_less(Cx a, Cx b) noexcept;

/// Eigenvalues only, sorted lexicographically; never throws on degeneracy.
CVec eigenvalues(const CMat& m);

/// Smallest pairwise distance; +inf for fewer than two values.
double min_gap(const CVec& values) noexcept;

Eigendecomposition eig(const CMat& m, double tol = kDefaultTol);

/// Same as `eig`, but the i-th eigenvalue is the one nearest `order[i]`.
Eigendecomposition eig_ordered(const CMat& m, const CVec& order, double tol = kDefaultTol);

CMat solve(const CMat& m, const CMat& rhs, double tol = kDefaultTol);

Eigen::VectorXd singular_values(const CMat& m);

/// Number of singular values above tol·σ_max.
int numeric_rank(const CMat& m, double tol = kDefaultTol);

CMat comm(const CMat& a, const CMat& b);

/// tr(letters[word[0]] · letters[word[1]] · …).
Cx trace_word(std::span<const CMat> letters, std::span<const int> word);

/// Assigns each entry of `reference` to a distinct entry of `values` by
/// greedy nearest matching. Returns perm with values[perm[i]] ≈ reference[i],
/// or nullopt when some match is not clearly closer than half the reference
/// separation.
std::optional<std::vector<int>> track(const CVec& reference, const CVec& values);

/// Least-squares solution of an overdetermined system via complete
/// orthogonal decomposition.
CVec least_squares(const CMat& m, const CVec& rhs);

}  // namespace cmspace
