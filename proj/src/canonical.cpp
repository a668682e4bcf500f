#include "cmspace/canonical.hpp"

#include <algorithm>
#include <cmath>

#include "cmspace/errors.hpp"

namespace cmspace {

namespace {

CMat upper_left(const AugmentedPair& p) { return p.Ahat.topLeftCorner(p.n(), p.n()); }

NormalizedPair normalize_with(const AugmentedPair& p, const Eigendecomposition& diag_a, double tol) {
  const int n = p.n();
  const CMat y = p.Ahat.bottomLeftCorner(1, n) * diag_a.g_inv;
  const double scale = std::max(1.0, p.Ahat.norm());
  CMat g0 = diag_a.g;
  for (int i = 0; i < n; ++i) {
    if (std::abs(y(0, i)) <= tol * scale) {
      throw Error(Errc::ZeroLastRowEntry, "normalize", "last-row entry vanishes after diagonalization");
    }
    g0.row(i) *= y(0, i);
  }
  NormalizedPair out;
  out.gauge = GaugeElement{g0};
  out.pair = gauge_act(out.gauge, p, tol);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.pair.Ahat(i, j) = (i == j) ? diag_a.values(i) : Cx(0.0, 0.0);
    out.pair.Ahat(n, i) = Cx(1.0, 0.0);
  }
  return out;
}

}  // namespace

bool is_regular_semisimple(const CMat& m, double tol) {
  if (m.rows() != m.cols()) throw Error(Errc::ShapeMismatch, "is_regular_semisimple", "");
  if (m.rows() <= 1) return true;
  return min_gap(eigenvalues(m)) > tol * std::max(1.0, m.norm());
}

int orbit_dimension(const AugmentedPair& p, double tol) {
  p.check_shapes("orbit_dimension");
  const int n = p.n();
  const int dim = n + 1;
  CMat map(dim * dim, n * n);
  for (int col = 0; col < n * n; ++col) {
    CMat xi = CMat::Zero(dim, dim);
    xi(col % n, col / n) = 1.0;
    const CMat image = comm(xi, p.Ahat);
    map.col(col) = Eigen::Map<const CVec>(image.data(), image.size());
  }
  if (map.norm() == 0.0) return 0;
  return numeric_rank(map, tol);
}

bool is_g_regular(const AugmentedPair& p, double tol) {
  return orbit_dimension(p, tol) == p.n() * p.n();
}

bool in_g0hat(const AugmentedPair& p, double tol) {
  p.check_shapes("in_g0hat");
  const CMat a = upper_left(p);
  if (!is_regular_semisimple(a, tol)) {
    throw Error(Errc::DegenerateA, "in_g0hat", "A is not regular semisimple");
  }
  if (!is_g_regular(p, tol)) return false;
  const int n = p.n();
  const Eigendecomposition ed = eig(a, tol);
  for (int i = 0; i < n; ++i) {
    CVec z = CVec::Zero(n + 1);
    z.head(n) = ed.g_inv.col(i);
    const double defect = (p.Ahat * z - ed.values(i) * z).norm();
    if (!(defect > tol * z.norm() * std::max(1.0, p.Ahat.norm()))) return false;
  }
  return true;
}

RegularityReport regularity(const AugmentedPair& p, double tol) {
  p.check_shapes("regularity");
  RegularityReport rep;
  const CMat a = upper_left(p);
  rep.is_regular_semisimple_A = is_regular_semisimple(a, tol);
  rep.is_regular_semisimple_Ahat = is_regular_semisimple(p.Ahat, tol);
  rep.orbit_dim = orbit_dimension(p, tol);
  rep.g_regular = rep.orbit_dim == p.n() * p.n();
  rep.in_g0hat = rep.is_regular_semisimple_A && in_g0hat(p, tol);
  rep.min_gap = std::min(min_gap(eigenvalues(a)), min_gap(eigenvalues(p.Ahat)));
  return rep;
}

NormalizedPair normalize(const AugmentedPair& p, double tol) {
  p.check_shapes("normalize");
  const CMat a = upper_left(p);
  if (!is_regular_semisimple(a, tol)) throw Error(Errc::DegenerateA, "normalize", "A is not regular semisimple");
  return normalize_with(p, eig(a, tol), tol);
}

NormalizedPair normalize_ordered(const AugmentedPair& p, const CVec& lambda_order, double tol) {
  p.check_shapes("normalize_ordered");
  const CMat a = upper_left(p);
  if (!is_regular_semisimple(a, tol)) {
    throw Error(Errc::DegenerateA, "normalize_ordered", "A is not regular semisimple");
  }
  return normalize_with(p, eig_ordered(a, lambda_order, tol), tol);
}

bool is_normalized(const AugmentedPair& p, double tol) {
  p.check_shapes("is_normalized");
  const int n = p.n();
  const double bound = tol * std::max(1.0, p.Ahat.norm());
  for (int i = 0; i < n; ++i) {
    if (std::abs(p.Ahat(n, i) - Cx(1.0, 0.0)) > bound) return false;
    for (int j = 0; j < n; ++j) {
      if (i != j && std::abs(p.Ahat(i, j)) > bound) return false;
    }
  }
  return true;
}

}  // namespace cmspace
