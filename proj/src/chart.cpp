#include "cmspace/chart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cmspace/errors.hpp"

namespace cmspace {

CMat project_mplus(const CMat& m) {
  const auto last = m.rows() - 1;
  CMat out = CMat::Zero(m.rows(), m.cols());
  out.col(last).head(last) = m.col(last).head(last);
  return out;
}

CMat project_mminus(const CMat& m) {
  const auto last = m.rows() - 1;
  CMat out = CMat::Zero(m.rows(), m.cols());
  out.row(last).head(last) = m.row(last).head(last);
  return out;
}

MSplit split_m(const CMat& m) {
  if (m.rows() != m.cols() || m.rows() < 2) throw Error(Errc::ShapeMismatch, "split_m", "");
  MSplit s{project_mplus(m), project_mminus(m), {}};
  s.rest = m - s.plus - s.minus;
  return s;
}

CMat embed_mplus(const CVec& x) {
  const auto n = x.size();
  CMat out = CMat::Zero(n + 1, n + 1);
  out.col(n).head(n) = x;
  return out;
}

void ChartPoint::validate(const char* op, double tol) const {
  const auto sz = lambda.size();
  if (sz < 1 || lambdahat.size() != sz + 1 || mu.size() != sz || muhat.size() != sz + 1) {
    throw Error(Errc::ShapeMismatch, op, "chart point sizes must be (n, n+1, n, n+1)");
  }
  if (tau == Cx(0.0, 0.0)) throw Error(Errc::InvalidArgument, op, "tau must be nonzero");
  const double scale = std::max({1.0, lambda.cwiseAbs().maxCoeff(), lambdahat.cwiseAbs().maxCoeff()});
  if (!(min_gap(lambda) > tol * scale) || !(min_gap(lambdahat) > tol * scale)) {
    throw Error(Errc::InvalidArgument, op, "eigenvalues must be pairwise distinct");
  }
}

Cx infer_tau(const AugmentedPair& p) {
  const int n = p.n();
  return moment_G(p).trace() / static_cast<double>(n);
}

Decomposition decompose(const AugmentedPair& p, Cx tau, double tol,
                        const std::optional<CVec>& lambdahat_order) {
  p.check_shapes("decompose");
  const int n = p.n();
  if (!is_normalized(p, tol)) throw Error(Errc::NotNormalized, "decompose", "Â must have diagonal A and unit last row");
  const RegularityReport rep = regularity(p, tol);
  if (!rep.is_strongly_semisimple()) {
    throw Error(Errc::NotStronglySemisimple, "decompose", "");
  }
  if (!eq4_predicate(p, tau, tol)) throw Error(Errc::Eq4Violated, "decompose", "");

  const CMat c = comm(p.Ahat, p.Bhat);
  Decomposition d;
  d.tau = tau;
  d.mu = c.row(n).head(n).transpose();
  d.B1 = CMat::Zero(n + 1, n + 1);
  for (int i = 0; i < n; ++i) d.B1(i, i) = d.mu(i);
  d.B2 = p.Bhat - d.B1;
  const CMat c2 = comm(p.Ahat, d.B2);
  d.m = c2.col(n).head(n);

  const Eigendecomposition ed =
      lambdahat_order ? eig_ordered(p.Ahat, *lambdahat_order, tol) : eig(p.Ahat, tol);
  d.lambdahat = ed.values;
  d.g = ed.g;
  d.g_inv = ed.g_inv;
  const CMat rotated = d.g * d.B2 * d.g_inv;
  d.D_muhat = rotated.diagonal().asDiagonal();
  d.S = rotated - d.D_muhat;
  return d;
}

namespace {

ChartPoint chart_from(const AugmentedPair& normal, const Decomposition& d) {
  ChartPoint c;
  c.lambda = normal.Ahat.diagonal().head(normal.n());
  c.lambdahat = d.lambdahat;
  c.mu = d.mu;
  c.muhat = d.muhat();
  c.tau = d.tau;
  return c;
}

void require_level(const AugmentedPair& p, Cx tau, double tol, const char* op) {
  if (!(std::abs(tau) > tol * pair_scale(p))) throw Error(Errc::Eq4Violated, op, "tau = 0 is outside the chart");
  if (!eq4_predicate(p, tau, tol)) throw Error(Errc::Eq4Violated, op, "");
}

}  // namespace

ChartPoint to_chart(const AugmentedPair& p, double tol) {
  p.check_shapes("to_chart");
  const Cx tau = infer_tau(p);
  require_level(p, tau, tol, "to_chart");
  const NormalizedPair np = normalize(p, tol);
  return chart_from(np.pair, decompose(np.pair, tau, tol));
}

ChartPoint to_chart_tracked(const AugmentedPair& p, const ChartPoint& reference, double tol) {
  p.check_shapes("to_chart_tracked");
  const Cx tau = infer_tau(p);
  require_level(p, tau, tol, "to_chart_tracked");
  const NormalizedPair np = normalize_ordered(p, reference.lambda, tol);
  return chart_from(np.pair, decompose(np.pair, tau, tol, reference.lambdahat));
}

ChartReconstruction from_chart_detail(const ChartPoint& c, double tol) {
  c.validate("from_chart", tol);
  const int n = c.n();

  // Â in normal form; x and Λ make det(z − Â) = ∏(z − λ̂_j).
  CMat ahat = CMat::Zero(n + 1, n + 1);
  for (int i = 0; i < n; ++i) {
    Cx num = 1.0;
    for (int j = 0; j <= n; ++j) num *= c.lambda(i) - c.lambdahat(j);
    Cx den = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) den *= c.lambda(i) - c.lambda(j);
    }
    ahat(i, i) = c.lambda(i);
    ahat(i, n) = -num / den;
    ahat(n, i) = 1.0;
  }
  ahat(n, n) = c.lambdahat.sum() - c.lambda.sum();

  const Eigendecomposition ed = eig_ordered(ahat, c.lambdahat, tol);
  const double spec_scale = std::max(1.0, c.lambdahat.cwiseAbs().maxCoeff());
  if ((ed.values - c.lambdahat).cwiseAbs().maxCoeff() > 1e2 * tol * spec_scale * std::max(1.0, ed.condition)) {
    throw Error(Errc::EigenMismatch, "from_chart", "reconstructed spectrum deviates from lambdahat");
  }

  // Diagonal of g(τ̂ + m⁺(m))g⁻¹ must vanish: n+1 equations, one redundant by trace.
  const CMat rot_tau = ed.g * tau_hat(n, c.tau) * ed.g_inv;
  CMat system(n + 1, n);
  CVec rhs(n + 1);
  for (int j = 0; j <= n; ++j) {
    rhs(j) = -rot_tau(j, j);
    for (int i = 0; i < n; ++i) system(j, i) = ed.g(j, i) * ed.g_inv(n, j);
  }
  if (numeric_rank(system, tol) < n) {
    throw Error(Errc::MSystemSingular, "from_chart", "m-system is rank deficient");
  }
  const CVec m = least_squares(system, rhs);
  const double m_residual = (system * m - rhs).norm();
  const double m_bound = 1e2 * tol * std::max(1.0, rhs.norm()) * std::max(1.0, ed.condition);
  if (m_residual > m_bound) {
    throw Error(Errc::MSystemSingular, "from_chart",
                "m-system inconsistent, residual " + std::to_string(m_residual));
  }

  const CMat rhs_mat = rot_tau + ed.g * embed_mplus(m) * ed.g_inv;
  CMat s = CMat::Zero(n + 1, n + 1);
  for (int j = 0; j <= n; ++j) {
    for (int k = 0; k <= n; ++k) {
      if (j != k) s(j, k) = rhs_mat(j, k) / (c.lambdahat(j) - c.lambdahat(k));
    }
  }

  ChartReconstruction out;
  Decomposition& d = out.decomposition;
  d.tau = c.tau;
  d.mu = c.mu;
  d.m = m;
  d.lambdahat = ed.values;
  d.g = ed.g;
  d.g_inv = ed.g_inv;
  d.D_muhat = c.muhat.asDiagonal();
  d.S = s;
  d.B1 = CMat::Zero(n + 1, n + 1);
  for (int i = 0; i < n; ++i) d.B1(i, i) = c.mu(i);
  d.B2 = ed.g_inv * (d.D_muhat + s) * ed.g;

  out.pair = AugmentedPair{ahat, d.B1 + d.B2};
  if (!in_g0hat(out.pair, tol)) {
    throw Error(Errc::NotStronglySemisimple, "from_chart", "reconstructed Â is outside ĝ⁰");
  }
  return out;
}

AugmentedPair from_chart(const ChartPoint& c, double tol) { return from_chart_detail(c, tol).pair; }

std::pair<Cx, Cx> slice_residual(const AugmentedPair& p) {
  p.check_shapes("slice_residual");
  const int n = p.n();
  return {p.Ahat.trace() - p.Ahat.topLeftCorner(n, n).trace(), p.corner_B()};
}

CornerAffine corner_affine(const ChartPoint& c, double tol) {
  const ChartReconstruction rec = from_chart_detail(c, tol);
  const Decomposition& d = rec.decomposition;
  const int n = c.n();
  CornerAffine out;
  out.coefficients.resize(n + 1);
  for (int j = 0; j <= n; ++j) out.coefficients(j) = d.g_inv(n, j) * d.g(j, n);
  out.offset = (d.g_inv * d.S * d.g)(n, n);
  return out;
}

ChartPoint solve_slice_muhat(const ChartPoint& c, double tol) {
  const CornerAffine aff = corner_affine(c, tol);
  const double cn2 = aff.coefficients.squaredNorm();
  if (!(std::sqrt(cn2) > tol)) {
    throw Error(Errc::DegenerateConstraint, "solve_slice_muhat", "corner does not depend on muhat");
  }
  const Cx corner = (aff.coefficients.array() * c.muhat.array()).sum() + aff.offset;
  ChartPoint out = c;
  out.muhat = c.muhat - aff.coefficients.conjugate() * (corner / cn2);
  return out;
}

CVec flatten(const ChartPoint& c) {
  const int n = c.n();
  CVec out(4 * n + 2);
  out << c.lambda, c.lambdahat, c.mu, c.muhat;
  return out;
}

ChartPoint unflatten(const CVec& coords, int n, Cx tau) {
  if (coords.size() != 4 * n + 2) throw Error(Errc::ShapeMismatch, "unflatten", "");
  ChartPoint c;
  c.lambda = coords.segment(0, n);
  c.lambdahat = coords.segment(n, n + 1);
  c.mu = coords.segment(2 * n + 1, n);
  c.muhat = coords.segment(3 * n + 1, n + 1);
  c.tau = tau;
  return c;
}

double chart_distance(const ChartPoint& a, const ChartPoint& b) {
  if (a.n() != b.n()) return std::numeric_limits<double>::infinity();
  const auto pl = track(a.lambda, b.lambda);
  const auto ph = track(a.lambdahat, b.lambdahat);
  if (!pl || !ph) return std::numeric_limits<double>::infinity();
  double dist = std::abs(a.tau - b.tau);
  for (int i = 0; i < a.n(); ++i) {
    const int j = (*pl)[static_cast<std::size_t>(i)];
    dist = std::max({dist, std::abs(a.lambda(i) - b.lambda(j)), std::abs(a.mu(i) - b.mu(j))});
  }
  for (int i = 0; i <= a.n(); ++i) {
    const int j = (*ph)[static_cast<std::size_t>(i)];
    dist = std::max({dist, std::abs(a.lambdahat(i) - b.lambdahat(j)), std::abs(a.muhat(i) - b.muhat(j))});
  }
  return dist;
}

CMat chart_jacobian(const ChartPoint& c, double step, double tol) {
  const int n = c.n();
  const CVec base = flatten(c);
  const auto dim = base.size();
  CMat jac(dim, dim);
  for (Eigen::Index q = 0; q < dim; ++q) {
    CVec plus = base;
    CVec minus = base;
    plus(q) += step;
    minus(q) -= step;
    const CVec fp = flatten(to_chart_tracked(from_chart(unflatten(plus, n, c.tau), tol), c, tol));
    const CVec fm = flatten(to_chart_tracked(from_chart(unflatten(minus, n, c.tau), tol), c, tol));
    jac.col(q) = (fp - fm) / (2.0 * step);
  }
  return jac;
}

}  // namespace cmspace
