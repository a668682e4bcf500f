#include "cmspace/sl2flows.hpp"

#include <algorithm>
#include <cmath>

#include "cmspace/errors.hpp"

namespace cmspace {

Mat2 SL2Element::matrix() const {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

Mat2 SL2Generator::matrix() const {
  Mat2 m = Mat2::Zero();
  switch (kind) {
    case Sl2Kind::E: m(1, 0) = 1.0; break;
    case Sl2Kind::F: m(0, 1) = 1.0; break;
    case Sl2Kind::H: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
  }
  return coeff * m;
}

SL2Element SL2Generator::exp(Cx t) const {
  const Cx u = coeff * t;
  switch (kind) {
    case Sl2Kind::E: return {1.0, 0.0, u, 1.0};
    case Sl2Kind::F: return {1.0, u, 0.0, 1.0};
    case Sl2Kind::H: return {std::exp(u), 0.0, 0.0, std::exp(-u)};
  }
  return SL2Element::identity();
}

SL2Element sl2_exp(const Mat2& x) {
  const Cx delta = std::sqrt(-x.determinant());
  Cx ch, sh_over;
  if (std::abs(delta) < 1e-4) {
    const Cx d2 = delta * delta;
    ch = 1.0 + d2 / 2.0 + d2 * d2 / 24.0;
    sh_over = 1.0 + d2 / 6.0 + d2 * d2 / 120.0;
  } else {
    ch = std::cosh(delta);
    sh_over = std::sinh(delta) / delta;
  }
  return SL2Element::from_matrix(ch * Mat2::Identity() + sh_over * x);
}

AugmentedPair act_pair(const SL2Element& g, const AugmentedPair& p) {
  p.check_shapes("act_pair");
  return {g.a * p.Ahat + g.b * p.Bhat, g.c * p.Ahat + g.d * p.Bhat};
}

Representation act_components(const SL2Element& g, const Representation& r) {
  r.check_shapes("act_components");
  if (r.k != 2) throw Error(Errc::InvalidArgument, "act_components", "needs k = 2");
  Representation out = r;
  out.A = g.a * r.A + g.b * r.B;
  out.B = g.c * r.A + g.d * r.B;
  out.v.col(0) = g.a * r.v.col(0) + g.b * r.v.col(1);
  out.v.col(1) = g.c * r.v.col(0) + g.d * r.v.col(1);
  out.w.row(0) = g.d * r.w.row(0) - g.c * r.w.row(1);
  out.w.row(1) = -g.b * r.w.row(0) + g.a * r.w.row(1);
  return out;
}

double check_moment_preserved(const SL2Element& g, const Representation& r) {
  return on_shell_residual(act_components(g, r));
}

FixedPointProbe fixed_point_probe(const Representation& r, Cx t, int max_len) {
  r.check_shapes("fixed_point_probe");
  if (r.A.norm() == 0.0 && r.B.norm() == 0.0) {
    throw Error(Errc::ZeroPair, "fixed_point_probe", "A = B = 0");
  }
  if (t == Cx(0.0, 0.0)) throw Error(Errc::InvalidArgument, "fixed_point_probe", "t must be nonzero");
  const SL2Element h = SL2Generator{Sl2Kind::H}.exp(t);
  FixedPointProbe out;
  out.before = fingerprint(r, max_len);
  out.after = fingerprint(act_components(h, r), max_len);
  out.separation = fingerprint_distance(out.before, out.after);
  return out;
}

TraceCoords trace_coords(const CMat& ahat) {
  if (ahat.rows() != ahat.cols()) throw Error(Errc::ShapeMismatch, "trace_coords", "");
  const auto size = ahat.rows();
  TraceCoords tc;
  tc.s.resize(size);
  CMat power = ahat;
  for (Eigen::Index k = 0; k < size; ++k) {
    tc.s(k) = power.trace();
    if (k + 1 < size) power = power * ahat;
  }
  return tc;
}

CVec lambdahat_to_s(const CVec& lambdahat) {
  const auto size = lambdahat.size();
  CVec s(size);
  CVec power = lambdahat;
  for (Eigen::Index k = 0; k < size; ++k) {
    s(k) = power.sum();
    power = power.cwiseProduct(lambdahat);
  }
  return s;
}

CVec s_to_lambdahat(const CVec& s, double tol) {
  const auto size = s.size();
  if (size < 1) throw Error(Errc::InvalidArgument, "s_to_lambdahat", "empty power sums");
  // k·e_k = Σ_{i=1..k} (−1)^{i−1} e_{k−i} p_i
  CVec e = CVec::Zero(size + 1);
  e(0) = 1.0;
  for (Eigen::Index k = 1; k <= size; ++k) {
    Cx acc = 0.0;
    for (Eigen::Index i = 1; i <= k; ++i) {
      const double sign = (i % 2 == 1) ? 1.0 : -1.0;
      acc += sign * e(k - i) * s(i - 1);
    }
    e(k) = acc / static_cast<double>(k);
  }
  // Companion matrix of zᴺ − e₁zᴺ⁻¹ + e₂zᴺ⁻² − …
  CMat companion = CMat::Zero(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    companion(0, j) = sign * e(j + 1);
  }
  for (Eigen::Index i = 1; i < size; ++i) companion(i, i - 1) = 1.0;
  const CVec roots = eigenvalues(companion);
  const double scale = std::max(1.0, roots.cwiseAbs().maxCoeff());
  if (!(min_gap(roots) > std::sqrt(tol) * scale)) {
    throw Error(Errc::RootFindingFailure, "s_to_lambdahat", "power sums of a degenerate spectrum");
  }
  return roots;
}

CMat newton_jacobian(const CVec& lambdahat) {
  const auto size = lambdahat.size();
  CMat jac(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    Cx power = 1.0;
    for (Eigen::Index k = 0; k < size; ++k) {
      jac(k, j) = static_cast<double>(k + 1) * power;
      power *= lambdahat(j);
    }
  }
  return jac;
}

CVec ChartTangent::flat() const {
  CVec out(dlambda.size() + dlambdahat.size() + dmu.size() + dmuhat.size());
  out << dlambda, dlambdahat, dmu, dmuhat;
  return out;
}

namespace {

struct Sample {
  CVec coords;
  CVec s;
  Cx slice_trace, slice_corner;
};

Sample sample_flow(const SL2Generator& gen, const AugmentedPair& base, const ChartPoint& c, double t,
                   double tol) {
  const AugmentedPair moved = act_pair(gen.exp(t), base);
  const ChartPoint cp = to_chart_tracked(moved, c, tol);
  const auto [tr, corner] = slice_residual(from_chart(cp, tol));
  return {flatten(cp), trace_coords(moved.Ahat).s, tr, corner};
}

ChartTangent central_difference(const SL2Generator& gen, const AugmentedPair& base, const ChartPoint& c,
                                double h, double tol) {
  const Sample plus = sample_flow(gen, base, c, h, tol);
  const Sample minus = sample_flow(gen, base, c, -h, tol);
  const int n = c.n();
  const CVec d = (plus.coords - minus.coords) / (2.0 * h);
  ChartTangent out;
  out.dlambda = d.segment(0, n);
  out.dlambdahat = d.segment(n, n + 1);
  out.dmu = d.segment(2 * n + 1, n);
  out.dmuhat = d.segment(3 * n + 1, n + 1);
  out.ds = (plus.s - minus.s) / (2.0 * h);
  out.dslice_trace = (plus.slice_trace - minus.slice_trace) / (2.0 * h);
  out.dslice_corner = (plus.slice_corner - minus.slice_corner) / (2.0 * h);
  return out;
}

ChartTangent combine(const ChartTangent& coarse, const ChartTangent& fine) {
  auto r = [](const CVec& a, const CVec& b) -> CVec { return (4.0 * b - a) / 3.0; };
  ChartTangent out;
  out.dlambda = r(coarse.dlambda, fine.dlambda);
  out.dlambdahat = r(coarse.dlambdahat, fine.dlambdahat);
  out.dmu = r(coarse.dmu, fine.dmu);
  out.dmuhat = r(coarse.dmuhat, fine.dmuhat);
  out.ds = r(coarse.ds, fine.ds);
  out.dslice_trace = (4.0 * fine.dslice_trace - coarse.dslice_trace) / 3.0;
  out.dslice_corner = (4.0 * fine.dslice_corner - coarse.dslice_corner) / 3.0;
  return out;
}

}  // namespace

ChartTangent induced_field_numeric(const SL2Generator& gen, const ChartPoint& c, const FieldOptions& opts) {
  const AugmentedPair base = from_chart(c, opts.tol);
  const ChartTangent coarse = central_difference(gen, base, c, opts.step, opts.tol);
  if (!opts.richardson) return coarse;
  return combine(coarse, central_difference(gen, base, c, 0.5 * opts.step, opts.tol));
}

PartialTangent analytic_field(const SL2Generator& gen, const ChartPoint& c, double) {
  const int n = c.n();
  const auto un = static_cast<std::size_t>(n);
  PartialTangent out;
  out.dlambda.assign(un, std::nullopt);
  out.dlambdahat.assign(un + 1, std::nullopt);
  out.dmu.assign(un, std::nullopt);
  out.dmuhat.assign(un + 1, std::nullopt);
  out.ds.assign(un + 1, std::nullopt);
  const CVec s = lambdahat_to_s(c.lambdahat);
  switch (gen.kind) {
    case Sl2Kind::E:
      // Â is untouched; only μ̂ moves, along λ̂.
      for (std::size_t i = 0; i < un; ++i) {
        out.dlambda[i] = Cx(0.0, 0.0);
        out.dmu[i] = Cx(0.0, 0.0);
      }
      for (std::size_t j = 0; j <= un; ++j) {
        out.dlambdahat[j] = Cx(0.0, 0.0);
        out.ds[j] = Cx(0.0, 0.0);
        out.dmuhat[j] = gen.coeff * c.lambdahat(static_cast<Eigen::Index>(j));
      }
      break;
    case Sl2Kind::H:
      out.ds[0] = gen.coeff * s(0);
      out.ds[1] = gen.coeff * 2.0 * s(1);
      break;
    case Sl2Kind::F: {
      // d/dt tr(Â + tB̂)ᵏ at t = 0 for k = 1, 2, with B̂ = diag(μ, 0) + B₂
      // and tr(D_λ̂ S) = 0.
      const Cx tr_muhat = c.muhat.sum();
      const Cx tr_lm = (c.lambdahat.array() * c.muhat.array()).sum();
      const Cx mu_sum = c.mu.sum();
      const Cx lambda_mu = (c.lambda.array() * c.mu.array()).sum();
      out.ds[0] = gen.coeff * (tr_muhat + mu_sum);
      out.ds[1] = gen.coeff * 2.0 * (tr_lm + lambda_mu);
      break;
    }
  }
  return out;
}

Cx independence_determinant(const ChartPoint& c) {
  const CVec s = lambdahat_to_s(c.lambdahat);
  const Cx tr_muhat = c.muhat.sum();
  const Cx tr_lm = (c.lambdahat.array() * c.muhat.array()).sum();
  return tr_muhat * s(1) - tr_lm * s(0);
}

namespace {

double determinant_scale(const ChartPoint& c) {
  const CVec s = lambdahat_to_s(c.lambdahat);
  const double lam = c.lambdahat.cwiseAbs().maxCoeff();
  return std::max(1.0, c.muhat.norm() * (std::abs(s(1)) + lam * std::abs(s(0))));
}

bool well_separated(const CVec& lambda, const CVec& lambdahat, double gap) {
  if (min_gap(lambda) < gap || min_gap(lambdahat) < gap) return false;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    for (Eigen::Index j = 0; j < lambdahat.size(); ++j) {
      if (std::abs(lambda(i) - lambdahat(j)) < 0.5 * gap) return false;
    }
  }
  return true;
}

}  // namespace

ChartPoint find_lemma45_point(int n, Cx tau, std::uint64_t seed, const SlicePointOptions& opts, double tol) {
  if (n < 1) throw Error(Errc::InvalidArgument, "find_lemma45_point", "n must be positive");
  if (tau == Cx(0.0, 0.0)) throw Error(Errc::InvalidArgument, "find_lemma45_point", "tau must be nonzero");
  Rng rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto draw = [&](double width) { return Cx(width * uni(rng), 0.5 * width * uni(rng)); };

  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    ChartPoint c;
    c.tau = tau;
    c.lambda.resize(n);
    c.lambdahat.resize(n + 1);
    const double width = 1.0 + 0.5 * static_cast<double>(n);
    for (int i = 0; i < n; ++i) c.lambda(i) = draw(width);
    for (int j = 0; j <= n; ++j) c.lambdahat(j) = draw(width);
    // Σλ̂ = Σλ puts the corner of Â at zero.
    const Cx shift = (c.lambda.sum() - c.lambdahat.sum()) / static_cast<double>(n + 1);
    c.lambdahat.array() += shift;
    if (!well_separated(c.lambda, c.lambdahat, 0.3) || std::abs(c.lambda.sum()) < 0.5) continue;
    c.mu = CVec::Zero(n);
    c.muhat.resize(n + 1);
    for (int j = 0; j <= n; ++j) c.muhat(j) = draw(1.0);

    try {
      c = solve_slice_muhat(c, tol);
      const CornerAffine aff = corner_affine(c, tol);
      const CVec conj_coeff = aff.coefficients.conjugate();
      const double cn2 = aff.coefficients.squaredNorm();
      for (int inner = 0; inner < 8; ++inner) {
        if (std::abs(independence_determinant(c)) > opts.threshold * determinant_scale(c)) {
          const AugmentedPair p = from_chart(c, tol);
          const auto [tr_res, corner] = slice_residual(p);
          const double bound = 1e-9 * pair_scale(p);
          if (std::abs(tr_res) < bound && std::abs(corner) < bound) return c;
        }
        // Resample μ̂ inside the kernel of the corner constraint.
        CVec r(n + 1);
        for (int j = 0; j <= n; ++j) r(j) = draw(1.0);
        const Cx along = (aff.coefficients.array() * r.array()).sum();
        c.muhat += r - conj_coeff * (along / cn2);
      }
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(Errc::SearchExhausted, "find_lemma45_point", "retry bound reached");
}

IndependenceCertificate independence_rank(const ChartPoint& c, const FieldOptions& opts) {
  const CVec v1 = induced_field_numeric({Sl2Kind::E}, c, opts).flat();
  const CVec v2 = induced_field_numeric({Sl2Kind::F}, c, opts).flat();
  const CVec v = induced_field_numeric({Sl2Kind::H}, c, opts).flat();
  IndependenceCertificate cert;
  cert.fields.resize(3, v1.size());
  cert.fields.row(0) = v1.transpose();
  cert.fields.row(1) = v2.transpose();
  cert.fields.row(2) = v.transpose();
  const Eigen::VectorXd sv = singular_values(cert.fields);
  cert.sigma_ratio = sv(0) > 0.0 ? sv(2) / sv(0) : 0.0;
  cert.rank = numeric_rank(cert.fields, 1e-6);
  return cert;
}

}  // namespace cmspace
