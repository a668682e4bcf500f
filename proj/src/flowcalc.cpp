#include "cmspace/flowcalc.hpp"

#include <cmath>
#include <numbers>

#include "cmspace/errors.hpp"

namespace cmspace {

AugmentedPair flow_exact(const FlowSpec& spec, const AugmentedPair& p) {
  return act_pair(spec.generator.exp(spec.time), p);
}

Representation flow_exact(const FlowSpec& spec, const Representation& r) {
  return act_components(spec.generator.exp(spec.time), r);
}

ChartPoint flow_exact(const FlowSpec& spec, const ChartPoint& c, double tol) {
  return to_chart_tracked(flow_exact(spec, from_chart(c, tol)), c, tol);
}

AugmentedPair flow_exact(const Mat2& generator, Cx time, const AugmentedPair& p) {
  return act_pair(sl2_exp(time * generator), p);
}

AugmentedPair trotter_flow(const SL2Generator& theta, const SL2Generator& xi, Cx t, int n_steps,
                           const AugmentedPair& p) {
  if (n_steps < 1) throw Error(Errc::InvalidArgument, "trotter_flow", "n_steps must be positive");
  const Cx dt = t / static_cast<double>(n_steps);
  const SL2Element phi = theta.exp(dt);
  const SL2Element psi = xi.exp(dt);
  AugmentedPair q = p;
  for (int i = 0; i < n_steps; ++i) q = act_pair(phi, act_pair(psi, q));
  return q;
}

AugmentedPair bracket_flow(const SL2Generator& theta, const SL2Generator& xi, double t, int n_steps,
                           const AugmentedPair& p) {
  if (n_steps < 1) throw Error(Errc::InvalidArgument, "bracket_flow", "n_steps must be positive");
  if (t < 0.0) throw Error(Errc::InvalidArgument, "bracket_flow", "t must be non-negative");
  const double s = std::sqrt(t / static_cast<double>(n_steps));
  const SL2Element phi = theta.exp(s);
  const SL2Element psi = xi.exp(s);
  const SL2Element phi_back = theta.exp(-s);
  const SL2Element psi_back = xi.exp(-s);
  AugmentedPair q = p;
  for (int i = 0; i < n_steps; ++i) {
    q = act_pair(phi, q);
    q = act_pair(psi, q);
    q = act_pair(phi_back, q);
    q = act_pair(psi_back, q);
  }
  return q;
}

namespace {

Mat2 lie_bracket(const SL2Generator& theta, const SL2Generator& xi) {
  const Mat2 x = theta.matrix();
  const Mat2 y = xi.matrix();
  return x * y - y * x;
}

}  // namespace

int detect_bracket_sign(const SL2Generator& theta, const SL2Generator& xi, const AugmentedPair& p,
                        double t, int n_steps) {
  const AugmentedPair composed = bracket_flow(theta, xi, t, n_steps, p);
  const Mat2 br = lie_bracket(theta, xi);
  const Fingerprint fc = fingerprint(composed);
  const double plus = fingerprint_distance(fc, fingerprint(flow_exact(br, t, p)));
  const double minus = fingerprint_distance(fc, fingerprint(flow_exact(Mat2(-br), t, p)));
  return plus <= minus ? 1 : -1;
}

AugmentedPair bracket_target(const SL2Generator& theta, const SL2Generator& xi, double t,
                             const AugmentedPair& p) {
  return flow_exact(Mat2(static_cast<double>(kBracketSign) * lie_bracket(theta, xi)), t, p);
}

double loglog_slope(const std::vector<double>& ns, const std::vector<double>& errors) {
  if (ns.size() != errors.size() || ns.size() < 2) {
    throw Error(Errc::InvalidArgument, "loglog_slope", "need at least two samples");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    mx += std::log(ns[i]);
    my += std::log(errors[i]);
  }
  mx /= static_cast<double>(ns.size());
  my /= static_cast<double>(ns.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double dx = std::log(ns[i]) - mx;
    sxy += dx * (std::log(errors[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

PairFunction trace_word_fn(const std::string& word) {
  if (word.empty() || word.find_first_not_of("AB") != std::string::npos) {
    throw Error(Errc::InvalidArgument, "trace_word_fn", "word must be over {A, B}");
  }
  return [word](const AugmentedPair& p) {
    CMat acc = word[0] == 'A' ? p.Ahat : p.Bhat;
    for (std::size_t i = 1; i < word.size(); ++i) acc = acc * (word[i] == 'A' ? p.Ahat : p.Bhat);
    return acc.trace();
  };
}

PolynomialFit fit_along_flow(const SL2Generator& gen, const PairFunction& f, const AugmentedPair& p,
                             int degree, int nodes) {
  if (degree < 0 || nodes < degree + 1) throw Error(Errc::InvalidArgument, "fit_along_flow", "");
  if (degree > 24) throw Error(Errc::IllConditionedFit, "fit_along_flow", "degree too large");
  CMat vander(nodes, degree + 1);
  CVec values(nodes);
  PolynomialFit fit;
  fit.scale = 1.0;
  for (int j = 0; j < nodes; ++j) {
    const double t = std::cos(std::numbers::pi * (2.0 * j + 1.0) / (2.0 * nodes));
    values(j) = f(act_pair(gen.exp(t), p));
    fit.scale = std::max(fit.scale, std::abs(values(j)));
    Cx power = 1.0;
    for (int k = 0; k <= degree; ++k) {
      vander(j, k) = power;
      power *= t;
    }
  }
  fit.coefficients = least_squares(vander, values);
  fit.residual = (vander * fit.coefficients - values).cwiseAbs().maxCoeff();
  return fit;
}

std::optional<int> lnd_degree(const SL2Generator& gen, const PairFunction& f, const AugmentedPair& p,
                              int d_max) {
  if (gen.kind == Sl2Kind::H) throw Error(Errc::InvalidArgument, "lnd_degree", "H does not generate a unipotent flow");
  if (d_max < 0) throw Error(Errc::InvalidArgument, "lnd_degree", "");
  if (d_max > 24) throw Error(Errc::IllConditionedFit, "lnd_degree", "d_max too large");
  const int nodes = d_max + 2;
  for (int d = 0; d <= d_max; ++d) {
    const PolynomialFit fit = fit_along_flow(gen, f, p, d, nodes);
    if (fit.residual <= 1e-8 * fit.scale) return d;
  }
  return std::nullopt;
}

WitnessReport compatible_witness(const AugmentedPair& p, double tol) {
  p.check_shapes("compatible_witness");
  const PairFunction h = trace_word_fn("B");
  WitnessReport rep;
  rep.trace_ahat = p.Ahat.trace();
  rep.scale = std::max({1.0, p.Ahat.norm(), p.Bhat.norm()}) * std::sqrt(static_cast<double>(p.n() + 1));
  if (!(std::abs(rep.trace_ahat) > tol * rep.scale)) {
    throw Error(Errc::WitnessFailsNonvanishing, "compatible_witness", "tr Â vanishes at this point");
  }
  rep.nonvanishing = true;

  // Fits of degree 3 recover the exact polynomial pullbacks (degree ≤ 1 here).
  const PolynomialFit along_xi = fit_along_flow({Sl2Kind::F}, h, p, 3, 6);
  const PolynomialFit along_theta = fit_along_flow({Sl2Kind::E}, h, p, 3, 6);
  rep.xi_h = along_xi.coefficients(1);
  rep.theta_h = along_theta.coefficients(1);
  rep.theta2_h = 2.0 * along_theta.coefficients(2);
  rep.xi_residual = std::abs(rep.xi_h);
  rep.theta_residual = std::abs(rep.theta_h - rep.trace_ahat);
  rep.theta2_residual = std::abs(rep.theta2_h);
  rep.theta_degree = lnd_degree({Sl2Kind::E}, h, p, 4).value_or(-1);
  return rep;
}

}  // namespace cmspace
