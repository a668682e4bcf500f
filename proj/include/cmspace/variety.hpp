#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cmspace/linalg.hpp"

namespace cmspace {

using Rng = std::mt19937_64;

/// A quadruple (A, B, v, w) with [A, B] − v·w = τ·I_n when on shell.
/// Columns of v are v₁, v₂ and rows of w are w₁, w₂.
struct Representation {
  int n = 1;
  int k = 2;
  Cx tau{1.0, 0.0};
  CMat A, B, v, w;

  void check_shapes(const char* op) const;
};

/// (n+1)×(n+1) pair read blockwise as (A x; y Λ).
struct AugmentedPair {
  CMat Ahat, Bhat;

  int n() const { return static_cast<int>(Ahat.rows()) - 1; }
  Cx corner_A() const { return Ahat(n(), n()); }
  Cx corner_B() const { return Bhat(n(), n()); }
  void check_shapes(const char* op) const;
};

/// Gauge element L ∈ GL_n, acting on augmented pairs through diag(L, 1).
struct GaugeElement {
  CMat g;

  CMat embedded() const;
};

/// Trace words over a fixed alphabet, one entry per necklace class.
/// `scales[i]` is the product of the Frobenius norms of the letters in word i
/// and bounds |values[i]|; comparisons are made relative to it.
struct Fingerprint {
  std::vector<Cx> values;
  std::vector<double> scales;
  std::vector<std::string> words;
};

CMat moment_map(const Representation& r);
CMat moment_real(const Representation& r);

/// ‖[A,B] − vw − τI‖_F.
double on_shell_residual(const Representation& r);
/// max(1, ‖A‖_F·‖B‖_F), the reference magnitude for level-set residuals.
double level_scale(const Representation& r);

Representation gauge_act(const GaugeElement& g, const Representation& r, double tol = kDefaultTol);
AugmentedPair gauge_act(const GaugeElement& g, const AugmentedPair& p, double tol = kDefaultTol);

AugmentedPair augment(const Representation& r);
/// Inverse of `augment`; the level τ is not recoverable from the pair and is
/// supplied by the caller.
Representation project(const AugmentedPair& p, Cx tau, double tol = kDefaultTol);

double pair_scale(const AugmentedPair& p);

/// Largest discrepancy between the three explicit blocks of [Â, B̂] and their
/// closed forms in (A, B, v, w).
double block_commutator_check(const AugmentedPair& p);

CMat moment_G(const AugmentedPair& p);
CMat tau_hat(int n, Cx tau);
/// [Â, B̂] − τ̂ supported on the last row and column with zero corner, to
/// tol·max(1, ‖Â‖‖B̂‖).
bool eq4_predicate(const AugmentedPair& p, Cx tau, double tol = kDefaultTol);

/// ν = ([A,B] + X₁Y₂ − X₂Y₁, Y₁X₂ − Y₂X₁).
std::pair<CMat, Cx> quiver_nu(const CMat& A, const CMat& B, const CMat& X1, const CMat& X2,
                              const CMat& Y1, const CMat& Y2);

/// One of the 16 sign/index variants of the dictionary (v, w) → (X, Y):
/// X₁ = sign_x1·v_{a}, X₂ = sign_x2·v_{b} with (a,b) = (1,2) or (2,1) when
/// swap_x, and Y₁ = w_{c}, Y₂ = w_{d} likewise under swap_y.
struct DictionaryVariant {
  int sign_x1 = -1;
  int sign_x2 = 1;
  bool swap_x = false;
  bool swap_y = false;

  static DictionaryVariant literal() { return {}; }
  std::string name() const;
  bool operator==(const DictionaryVariant&) const = default;
};

struct QuiverData {
  CMat X1, X2, Y1, Y2;
};

QuiverData apply_dictionary(const DictionaryVariant& d, const Representation& r);

struct CalibrationResult {
  std::vector<DictionaryVariant> admissible;
  bool literal_admissible = false;
  bool found() const { return !admissible.empty(); }
};

/// Variants that send every given on-shell representation into ν⁻¹(O) with
/// O = diag(τ·I_n, −nτ).
CalibrationResult dictionary_calibrate(const std::vector<Representation>& points,
                                       double tol = kDefaultTol);
CalibrationResult dictionary_calibrate(const Representation& r, double tol = kDefaultTol);

/// On-shell point with diagonal A whose eigenvalues are at least 0.5 apart.
Representation random_point(int n, int k, Cx tau, Rng& rng);
Representation random_point(int n, int k, Cx tau, std::uint64_t seed);

/// Random gauge element with moderate condition number.
GaugeElement random_gauge(int n, Rng& rng);

Fingerprint fingerprint(const std::vector<CMat>& letters, const std::string& alphabet, int max_len);
/// Words in (A, B, v·w) up to length max_len (default 2n).
Fingerprint fingerprint(const Representation& r, int max_len = 0);
/// Words in (Â, B̂) up to length max_len (default 2(n+1)).
Fingerprint fingerprint(const AugmentedPair& p, int max_len = 0);

/// max_i |a_i − b_i| / max(s_a,i, s_b,i).
double fingerprint_distance(const Fingerprint& a, const Fingerprint& b);

}  // namespace cmspace
