#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cmspace/chart.hpp"
#include "cmspace/sl2flows.hpp"
#include "cmspace/variety.hpp"

namespace cmspace {

struct FlowSpec {
  SL2Generator generator;
  Cx time{0.0, 0.0};
};

AugmentedPair flow_exact(const FlowSpec& spec, const AugmentedPair& p);
Representation flow_exact(const FlowSpec& spec, const Representation& r);
/// Flow read back in chart coordinates, eigenvalues followed from c.
ChartPoint flow_exact(const FlowSpec& spec, const ChartPoint& c, double tol = kDefaultTol);
/// Flow of the field induced by an arbitrary traceless generator.
AugmentedPair flow_exact(const Mat2& generator, Cx time, const AugmentedPair& p);

/// (φ_{t/n} ∘ ψ_{t/n})ⁿ(p), φ and ψ the flows of theta and xi.
AugmentedPair trotter_flow(const SL2Generator& theta, const SL2Generator& xi, Cx t, int n_steps,
                           const AugmentedPair& p);

/// (ψ_{−s} ∘ φ_{−s} ∘ ψ_s ∘ φ_s)ⁿ(p) with s = √(t/n).
AugmentedPair bracket_flow(const SL2Generator& theta, const SL2Generator& xi, double t, int n_steps,
                           const AugmentedPair& p);

/// The generator map X ↦ (field of X) reverses brackets: the field bracket
/// [Θ_X, Θ_Y] is the field of kBracketSign·[X, Y]. Fixed after calibration
/// against bracket_flow; see detect_bracket_sign.
inline constexpr int kBracketSign = -1;

/// Sign σ for which bracket_flow is closest to the flow of σ·[X_θ, X_ξ].
int detect_bracket_sign(const SL2Generator& theta, const SL2Generator& xi, const AugmentedPair& p,
                        double t = 0.25, int n_steps = 1024);

/// Flow whose generator is kBracketSign·[X_θ, X_ξ].
AugmentedPair bracket_target(const SL2Generator& theta, const SL2Generator& xi, double t,
                             const AugmentedPair& p);

/// Slope of log(error) against log(n) by least squares.
double loglog_slope(const std::vector<double>& ns, const std::vector<double>& errors);

using PairFunction = std::function<Cx(const AugmentedPair&)>;

/// tr of a word in 'A' (Â) and 'B' (B̂), e.g. "AAB".
PairFunction trace_word_fn(const std::string& word);

struct PolynomialFit {
  CVec coefficients;  // c₀ + c₁t + …
  double residual = 0.0;
  double scale = 1.0;
};

/// Least-squares polynomial of the given degree through t ↦ f(flow_t(p)),
/// sampled at `nodes` Chebyshev points on [−1, 1].
PolynomialFit fit_along_flow(const SL2Generator& gen, const PairFunction& f, const AugmentedPair& p,
                             int degree, int nodes);

/// Least d with t ↦ f(flow_t(p)) a polynomial of degree d (to 1e−8·scale);
/// nullopt when no degree up to d_max fits.
std::optional<int> lnd_degree(const SL2Generator& gen, const PairFunction& f, const AugmentedPair& p,
                              int d_max);

struct WitnessReport {
  Cx xi_h, theta_h, theta2_h, trace_ahat;
  double xi_residual = 0.0;      // |Ξ(h)|
  double theta_residual = 0.0;   // |Θ(h) − tr Â|
  double theta2_residual = 0.0;  // |Θ²(h)|
  double scale = 1.0;
  int theta_degree = -1;
  bool nonvanishing = false;
};

/// Θ = E-field, Ξ = F-field, h = tr B̂. Throws WitnessFailsNonvanishing
/// where tr Â vanishes (to tol·scale).
WitnessReport compatible_witness(const AugmentedPair& p, double tol = kDefaultTol);

}  // namespace cmspace
