#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cmspace/chart.hpp"
#include "cmspace/linalg.hpp"
#include "cmspace/variety.hpp"

namespace cmspace {

using Mat2 = Eigen::Matrix2cd;

/// (a b; c d) acting on pairs by (Â, B̂) ↦ (aÂ + bB̂, cÂ + dB̂).
struct SL2Element {
  Cx a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};

  static SL2Element identity() { return {}; }
  static SL2Element from_matrix(const Mat2& m) { return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)}; }
  Mat2 matrix() const;
  Cx det() const { return a * d - b * c; }
  SL2Element inverse() const { return {d, -b, -c, a}; }
  SL2Element operator*(const SL2Element& o) const { return from_matrix(matrix() * o.matrix()); }
};

/// E is lower-left (flow (1 0; t 1)), F upper-right (flow (1 t; 0 1)),
/// H diagonal (flow diag(eᵗ, e⁻ᵗ)).
enum class Sl2Kind { E, F, H };

struct SL2Generator {
  Sl2Kind kind = Sl2Kind::E;
  Cx coeff{1.0, 0.0};

  Mat2 matrix() const;
  /// exp(t·coeff·X) in closed form.
  SL2Element exp(Cx t) const;
};

/// exp of a traceless 2×2 matrix: cosh(δ)·I + sinh(δ)/δ·X with δ² = −det X.
SL2Element sl2_exp(const Mat2& x);

AugmentedPair act_pair(const SL2Element& g, const AugmentedPair& p);
/// The same action written on (A, B, v, w); requires k = 2.
Representation act_components(const SL2Element& g, const Representation& r);

/// ‖μ(g·r) − τ·I_n‖_F.
double check_moment_preserved(const SL2Element& g, const Representation& r);

struct FixedPointProbe {
  Fingerprint before, after;
  double separation = 0.0;
};

/// Compares r with its image under diag(eᵗ, e⁻ᵗ).
FixedPointProbe fixed_point_probe(const Representation& r, Cx t, int max_len = 0);

/// s_k = tr Âᵏ, k = 1..n+1.
struct TraceCoords {
  CVec s;
};

TraceCoords trace_coords(const CMat& ahat);
CVec lambdahat_to_s(const CVec& lambdahat);
/// Inverts the power sums by Newton's identities and a companion-matrix solve.
CVec s_to_lambdahat(const CVec& s, double tol = kDefaultTol);
/// ∂s_k/∂λ̂_j = k·λ̂_jᵏ⁻¹.
CMat newton_jacobian(const CVec& lambdahat);

/// Tangent vector at a chart point. `ds` holds the trace-basis components
/// and `dslice` the derivative of the two slice residuals along the field.
struct ChartTangent {
  CVec dlambda, dlambdahat, dmu, dmuhat;
  CVec ds;
  Cx dslice_trace{0.0, 0.0};
  Cx dslice_corner{0.0, 0.0};

  CVec flat() const;
};

struct FieldOptions {
  double step = 1e-5;
  bool richardson = false;
  double tol = kDefaultTol;
};

/// Central difference of t ↦ to_chart(exp(t·gen)·from_chart(c)) at t = 0,
/// following eigenvalues continuously from c.
ChartTangent induced_field_numeric(const SL2Generator& gen, const ChartPoint& c,
                                   const FieldOptions& opts = {});

/// Components known in closed form; everything else stays empty.
struct PartialTangent {
  std::vector<std::optional<Cx>> dlambda, dlambdahat, dmu, dmuhat, ds;
};

PartialTangent analytic_field(const SL2Generator& gen, const ChartPoint& c, double tol = kDefaultTol);

/// (tr D_μ̂)·s₂ − (tr D_λ̂D_μ̂)·s₁ at c.
Cx independence_determinant(const ChartPoint& c);

struct SlicePointOptions {
  int max_retries = 200;
  double threshold = 0.1;
};

/// Chart point with μ = 0 on the slice N × {0} where the (s₁, s₂)
/// projections of the F- and H-fields are linearly independent.
ChartPoint find_lemma45_point(int n, Cx tau, std::uint64_t seed, const SlicePointOptions& opts = {},
                              double tol = kDefaultTol);

struct IndependenceCertificate {
  int rank = 0;
  double sigma_ratio = 0.0;  // σ₃/σ₁
  CMat fields;               // rows: E-, F-, H-fields
};

IndependenceCertificate independence_rank(const ChartPoint& c, const FieldOptions& opts = {});

}  // namespace cmspace
