#include "cmspace/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cmspace/errors.hpp"

namespace cmspace {

namespace {

// Entries below this fraction of the column norm do not pick the phase.
constexpr double kPhaseFloor = 1e-8;

void normalize_columns(CMat& vecs) {
  for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
    auto col = vecs.col(j);
    const double nrm = col.norm();
    if (nrm == 0.0) continue;
    col /= nrm;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      const double mag = std::abs(col(i));
      if (mag > kPhaseFloor) {
        col *= std::conj(col(i)) / mag;
        col(i) = Cx(mag, 0.0);
        break;
      }
    }
  }
}

Eigendecomposition assemble(const CMat& m, const CVec& values, const CMat& vectors,
                            const std::vector<int>& order, double tol) {
  const auto size = static_cast<Eigen::Index>(order.size());
  Eigendecomposition out;
  out.values.resize(size);
  out.g_inv.resize(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    out.values(i) = values(order[static_cast<std::size_t>(i)]);
    out.g_inv.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
  }
  normalize_columns(out.g_inv);

  Eigen::PartialPivLU<CMat> lu(out.g_inv);
  out.g = lu.inverse();
  const Eigen::VectorXd sv = singular_values(out.g_inv);
  out.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                          : std::numeric_limits<double>::infinity();

  const double mnorm = m.norm();
  const CMat diag = out.values.asDiagonal();
  const double residual = (out.g * m * out.g_inv - diag).norm();
  if (!std::isfinite(residual) || residual > 1e2 * tol * std::max(mnorm, 1e-300)) {
    if (mnorm > 0.0 || residual > 0.0) {
      throw Error(Errc::NonConvergent, "eig",
                  "diagonalization residual " + std::to_string(residual));
    }
  }
  return out;
}

}  // namespace

bool lex_less(Cx a, Cx b) noexcept {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

CVec eigenvalues(const CMat& m) {
  if (m.rows() != m.cols()) throw Error(Errc::ShapeMismatch, "eigenvalues", "matrix not square");
  Eigen::ComplexEigenSolver<CMat> solver(m, false);
  if (solver.info() != Eigen::Success) throw Error(Errc::NonConvergent, "eigenvalues", "");
  CVec values = solver.eigenvalues();
  std::sort(values.data(), values.data() + values.size(), lex_less);
  return values;
}

double min_gap(const CVec& values) noexcept {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    for (Eigen::Index j = i + 1; j < values.size(); ++j) {
      gap = std::min(gap, std::abs(values(i) - values(j)));
    }
  }
  return gap;
}

Eigendecomposition eig(const CMat& m, double tol) {
  if (m.rows() != m.cols()) throw Error(Errc::ShapeMismatch, "eig", "matrix not square");
  Eigen::ComplexEigenSolver<CMat> solver(m, true);
  if (solver.info() != Eigen::Success) throw Error(Errc::NonConvergent, "eig", "");
  const CVec& values = solver.eigenvalues();
  if (!(min_gap(values) > tol * m.norm())) {
    throw Error(Errc::DegenerateSpectrum, "eig", "minimum eigenvalue gap below tolerance");
  }
  std::vector<int> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return lex_less(values(a), values(b)); });
  return assemble(m, values, solver.eigenvectors(), order, tol);
}

Eigendecomposition eig_ordered(const CMat& m, const CVec& order, double tol) {
  if (m.rows() != m.cols() || order.size() != m.rows()) {
    throw Error(Errc::ShapeMismatch, "eig_ordered", "order length must match matrix size");
  }
  Eigen::ComplexEigenSolver<CMat> solver(m, true);
  if (solver.info() != Eigen::Success) throw Error(Errc::NonConvergent, "eig_ordered", "");
  const CVec& values = solver.eigenvalues();
  if (!(min_gap(values) > tol * m.norm())) {
    throw Error(Errc::DegenerateSpectrum, "eig_ordered", "minimum eigenvalue gap below tolerance");
  }
  auto perm = track(order, values);
  if (!perm) throw Error(Errc::BranchAmbiguity, "eig_ordered", "requested order does not match spectrum");
  return assemble(m, values, solver.eigenvectors(), *perm, tol);
}

CMat solve(const CMat& m, const CMat& rhs, double tol) {
  if (m.rows() != m.cols() || rhs.rows() != m.rows()) {
    throw Error(Errc::ShapeMismatch, "solve", "incompatible shapes");
  }
  if (numeric_rank(m, tol) < m.rows()) throw Error(Errc::Singular, "solve", "rank deficient");
  Eigen::FullPivLU<CMat> lu(m);
  return lu.solve(rhs);
}

Eigen::VectorXd singular_values(const CMat& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues();
}

int numeric_rank(const CMat& m, double tol) {
  const Eigen::VectorXd sv = singular_values(m);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * sv(0)) ++rank;
  }
  return rank;
}

CMat comm(const CMat& a, const CMat& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw Error(Errc::ShapeMismatch, "comm", "operands must be square and equal size");
  }
  return a * b - b * a;
}

Cx trace_word(std::span<const CMat> letters, std::span<const int> word) {
  if (word.empty()) throw Error(Errc::InvalidArgument, "trace_word", "empty word");
  CMat acc = letters[static_cast<std::size_t>(word[0])];
  for (std::size_t i = 1; i < word.size(); ++i) {
    const CMat& next = letters[static_cast<std::size_t>(word[i])];
    if (acc.cols() != next.rows()) throw Error(Errc::ShapeMismatch, "trace_word", "");
    acc = acc * next;
  }
  if (acc.rows() != acc.cols()) throw Error(Errc::ShapeMismatch, "trace_word", "product not square");
  return acc.trace();
}

std::optional<std::vector<int>> track(const CVec& reference, const CVec& values) {
  const auto size = reference.size();
  if (values.size() != size) return std::nullopt;
  struct Candidate {
    double dist;
    int ref;
    int val;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(size * size));
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) candidates.push_back({std::abs(reference(i) - values(j)), i, j});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.dist < b.dist; });
  std::vector<int> perm(static_cast<std::size_t>(size), -1);
  std::vector<bool> used(static_cast<std::size_t>(size), false);
  for (const auto& c : candidates) {
    if (perm[static_cast<std::size_t>(c.ref)] >= 0 || used[static_cast<std::size_t>(c.val)]) continue;
    perm[static_cast<std::size_t>(c.ref)] = c.val;
    used[static_cast<std::size_t>(c.val)] = true;
  }
  const double sep = min_gap(reference);
  for (int i = 0; i < size; ++i) {
    if (std::abs(reference(i) - values(perm[static_cast<std::size_t>(i)])) >= 0.5 * sep) {
      return std::nullopt;
    }
  }
  return perm;
}

CVec least_squares(const CMat& m, const CVec& rhs) {
  return m.completeOrthogonalDecomposition().solve(rhs);
}

}  // namespace cmspace
