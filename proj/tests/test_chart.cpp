#include <doctest.h>

#include <cstring>

#include "cmspace/chart.hpp"
#include "cmspace/errors.hpp"

using namespace cmspace;

namespace {

ChartPoint seeded_chart(int n, std::uint64_t seed) {
  return to_chart(augment(random_point(n, 2, Cx(1.0, 0.0), seed)));
}

ChartPoint hand_chart(Cx mu1) {
  ChartPoint c;
  c.lambda = CVec::Zero(1);
  c.lambdahat.resize(2);
  c.lambdahat << 1.0, -1.0;
  c.mu.resize(1);
  c.mu << mu1;
  c.muhat = CVec::Zero(2);
  c.tau = 1.0;
  return c;
}

// Characteristic polynomial coefficients c_0..c_{N} of det(xI − M), c_N = 1,
// by Faddeev–LeVerrier.
CVec char_poly(const CMat& m) {
  const auto N = m.rows();
  CVec c = CVec::Zero(N + 1);
  c(N) = 1.0;
  CMat mk = CMat::Zero(N, N);
  for (Eigen::Index k = 1; k <= N; ++k) {
    mk = m * mk + c(N - k + 1) * CMat::Identity(N, N);
    c(N - k) = -(m * mk).trace() / static_cast<double>(k);
  }
  return c;
}

CVec poly_from_roots(const CVec& roots) {
  CVec c = CVec::Zero(roots.size() + 1);
  c(0) = 1.0;
  for (Eigen::Index r = 0; r < roots.size(); ++r) {
    CVec next = CVec::Zero(c.size());
    for (Eigen::Index i = 0; i <= r; ++i) {
      next(i + 1) += c(i);
      next(i) -= roots(r) * c(i);
    }
    c = next;
  }
  return c;
}

}  // namespace

TEST_CASE("tau hat is traceless") {
  for (int n = 1; n <= 6; ++n) {
    const TauHat t{n, Cx(0.3, -2.0)};
    CHECK(t.matrix().trace() == Cx(0.0, 0.0));
    CHECK(std::abs(t.matrix()(n, n) + static_cast<double>(n) * Cx(0.3, -2.0)) < 1e-14);
  }
}

TEST_CASE("m projections") {
  const int N = 4;
  CMat e = CMat::Zero(N, N);
  e(0, N - 1) = 1.0;
  CHECK((project_mplus(e) - e).norm() == 0.0);
  CHECK(project_mminus(e).norm() == 0.0);

  CMat corner = CMat::Zero(N, N);
  corner(N - 1, N - 1) = 1.0;
  CHECK(project_mplus(corner).norm() == 0.0);
  CHECK(project_mminus(corner).norm() == 0.0);

  const CMat m = CMat::Random(N, N);
  const MSplit s = split_m(m);
  CHECK((s.plus + s.minus + s.rest - m).norm() == 0.0);
  CHECK((project_mplus(s.plus) - s.plus).norm() == 0.0);
  CHECK((project_mminus(s.minus) - s.minus).norm() == 0.0);
  CHECK(project_mplus(s.rest).norm() == 0.0);

  CVec x(3);
  x << 1.0, 2.0, 3.0;
  CHECK((embed_mplus(x).col(3).head(3) - x).norm() == 0.0);
  CHECK(embed_mplus(x)(3, 3) == Cx(0.0));
}

TEST_CASE("hand computed n = 1 case") {
  const Cx mu1(0.7, -0.3);
  const AugmentedPair p = from_chart(hand_chart(mu1));
  CMat a(2, 2), b(2, 2);
  a << 0.0, 1.0, 1.0, 0.0;
  b << mu1, -0.5, 0.5, 0.0;
  CHECK((p.Ahat - a).norm() < 1e-12);
  CHECK((p.Bhat - b).norm() < 1e-12);

  const Decomposition d = decompose(p, 1.0);
  CHECK((d.B1 - CMat(CVec((CVec(2) << mu1, 0.0).finished()).asDiagonal())).norm() < 1e-12);
  CMat b2(2, 2);
  b2 << 0.0, -0.5, 0.5, 0.0;
  CHECK((d.B2 - b2).norm() < 1e-12);
  CHECK(d.m.norm() < 1e-12);
  CHECK(d.D_muhat.norm() < 1e-12);
  // Ascending order λ̂ = (−1, 1) transposes S.
  CHECK(std::abs(d.lambdahat(0) - Cx(-1.0)) < 1e-12);
  CHECK(std::abs(d.S(0, 1) - Cx(-0.5)) < 1e-12);
  CHECK(std::abs(d.S(1, 0) - Cx(0.5)) < 1e-12);

  CVec order(2);
  order << 1.0, -1.0;
  const Decomposition o = decompose(p, 1.0, kDefaultTol, order);
  CHECK(std::abs(o.S(0, 1) - Cx(0.5)) < 1e-12);
  CHECK(std::abs(o.S(1, 0) - Cx(-0.5)) < 1e-12);

  const ChartPoint c = to_chart(p);
  CHECK(std::abs(c.lambda(0)) < 1e-12);
  CHECK(std::abs(c.lambdahat(0) + 1.0) < 1e-12);
  CHECK(std::abs(c.lambdahat(1) - 1.0) < 1e-12);
  CHECK(std::abs(c.mu(0) - mu1) < 1e-12);
  CHECK(c.muhat.norm() < 1e-12);
  CHECK(std::abs(c.tau - 1.0) < 1e-12);
}

TEST_CASE("decompose with B1 = 0") {
  AugmentedPair p = from_chart(hand_chart(0.0));
  const Decomposition d = decompose(p, 1.0);
  CHECK(d.B1.norm() < 1e-14);
  CHECK((d.B2 - p.Bhat).norm() < 1e-14);
}

TEST_CASE("decomposition invariants on seeded points") {
  for (int n = 1; n <= 5; ++n) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const AugmentedPair raw = augment(random_point(n, 2, Cx(1.0, 0.5), seed));
      const AugmentedPair p = normalize(raw).pair;
      const Decomposition d = decompose(p, Cx(1.0, 0.5));
      const double scale = pair_scale(p);
      CHECK((d.B1 + d.B2 - p.Bhat).norm() <= 1e-10 * scale);
      CHECK(d.B1(n, n) == Cx(0.0));
      CHECK((comm(p.Ahat, d.B2) - TauHat{n, Cx(1.0, 0.5)}.matrix() - embed_mplus(d.m)).norm() <= 1e-9 * scale);
      CHECK((d.g * d.B2 * d.g_inv - d.D_muhat - d.S).norm() <= 1e-9 * scale);
      CHECK(d.S.diagonal().norm() == 0.0);
    }
  }
}

TEST_CASE("decompose errors") {
  const AugmentedPair raw = augment(random_point(3, 2, Cx(1.0, 0.0), 1));
  try {
    decompose(raw, 1.0);
    FAIL("expected NotNormalized");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotNormalized);
  }
  AugmentedPair p = normalize(raw).pair;
  try {
    decompose(p, 2.0);
    FAIL("expected Eq4Violated");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Eq4Violated);
  }
  AugmentedPair degenerate = p;
  degenerate.Ahat(1, 1) = degenerate.Ahat(0, 0);
  CHECK_THROWS_AS(decompose(degenerate, 1.0), Error);
}

TEST_CASE("uniqueness: moving weight between B1 and B2 breaks the constraint linearly") {
  const AugmentedPair p = normalize(augment(random_point(3, 2, Cx(1.0, 0.0), 9))).pair;
  const Decomposition d = decompose(p, 1.0);
  const CMat target = TauHat{3, 1.0}.matrix() + embed_mplus(d.m);
  double prev = 0.0;
  for (double eps : {1e-4, 1e-3, 1e-2}) {
    CMat shift = CMat::Zero(4, 4);
    shift(0, 0) = eps;
    const CMat b2 = d.B2 - shift;
    const double viol = project_mminus(comm(p.Ahat, b2) - target).norm();
    CHECK(viol > prev);
    CHECK(std::abs(viol / eps - 1.0) < 1e-6);  // last row of Â is ones
    prev = viol;
  }
}

TEST_CASE("from_chart reproduces the spectrum") {
  for (int n = 1; n <= 5; ++n) {
    const ChartPoint c = seeded_chart(n, 100 + n);
    const AugmentedPair p = from_chart(c);
    const CVec cp = char_poly(p.Ahat);
    const CVec expected = poly_from_roots(c.lambdahat);
    CHECK((cp - expected).norm() <= 1e-9 * std::max(1.0, expected.norm()));
    CHECK(eq4_predicate(p, c.tau));
    CHECK(is_normalized(p));
    const CVec diag = p.Ahat.diagonal().head(n);
    CHECK((diag - c.lambda).norm() < 1e-14);
  }
}

TEST_CASE("from_chart rebuilds a normalized Ahat from its spectrum") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const AugmentedPair p = normalize(augment(random_point(3, 2, Cx(1.0, 0.0), seed))).pair;
    const ChartPoint c = to_chart(p);
    const AugmentedPair q = from_chart(c);
    CHECK((q.Ahat - p.Ahat).norm() <= 1e-9 * std::max(1.0, p.Ahat.norm()));
    CHECK((q.Bhat - p.Bhat).norm() <= 1e-8 * pair_scale(p));
  }
}

TEST_CASE("S depends only on tau, lambda, lambdahat") {
  const ChartPoint base = seeded_chart(3, 41);
  const CMat s0 = from_chart_detail(base).decomposition.S;
  Rng rng(3);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    ChartPoint c = base;
    for (int i = 0; i < c.n(); ++i) c.mu(i) = Cx(nd(rng), nd(rng));
    for (int j = 0; j <= c.n(); ++j) c.muhat(j) = Cx(nd(rng), nd(rng));
    CHECK((from_chart_detail(c).decomposition.S - s0).norm() < 1e-10);
  }
}

TEST_CASE("chart round trips") {
  for (int n = 1; n <= 5; ++n) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const AugmentedPair p = augment(random_point(n, 2, Cx(1.0, 0.0), seed));
      const ChartPoint c = to_chart(p);
      const ChartPoint back = to_chart(from_chart(c));
      CHECK(chart_distance(c, back) < 1e-8);
      const AugmentedPair q = from_chart(c);
      CHECK(fingerprint_distance(fingerprint(p), fingerprint(q)) < 1e-8);
    }
  }
}

TEST_CASE("chart is gauge invariant") {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial % 4;
    const AugmentedPair p = augment(random_point(n, 2, Cx(1.0, 0.0), rng));
    const AugmentedPair gp = gauge_act(random_gauge(n, rng), p);
    CHECK(chart_distance(to_chart(p), to_chart(gp)) < 1e-8);
  }
}

TEST_CASE("chart Jacobian has full rank") {
  for (int n = 1; n <= 4; ++n) {
    const ChartPoint c = seeded_chart(n, 7);
    CHECK(numeric_rank(chart_jacobian(c), 1e-6) == 4 * n + 2);
  }
}

TEST_CASE("from_chart errors") {
  ChartPoint c = hand_chart(0.0);
  c.lambdahat << 1.0, 1.0;
  CHECK_THROWS_AS(from_chart(c), Error);
  ChartPoint shape = hand_chart(0.0);
  shape.muhat = CVec::Zero(3);
  CHECK_THROWS_AS(from_chart(shape), Error);
}

TEST_CASE("slice residual and the corner solve") {
  const AugmentedPair p = augment(random_point(3, 2, Cx(1.0, 0.0), 2));
  const auto [tr, corner] = slice_residual(p);
  CHECK(std::abs(tr) < 1e-14);
  CHECK(std::abs(corner) < 1e-14);

  ChartPoint c = seeded_chart(3, 5);
  const Cx shift = c.lambdahat.sum() - c.lambda.sum();
  for (int j = 0; j <= c.n(); ++j) c.lambdahat(j) -= shift / 4.0;
  CHECK(std::abs(slice_residual(from_chart(c)).first) < 1e-12);

  Rng rng(6);
  std::normal_distribution<double> nd;
  for (int j = 0; j <= c.n(); ++j) c.muhat(j) = Cx(nd(rng), nd(rng));
  const ChartPoint fixed = solve_slice_muhat(c);
  const AugmentedPair q = from_chart(fixed);
  CHECK(std::abs(slice_residual(q).second) < 1e-10 * pair_scale(q));
  CHECK((fixed.lambda - c.lambda).norm() == 0.0);
  CHECK((fixed.mu - c.mu).norm() == 0.0);

  const CornerAffine aff = corner_affine(c);
  CHECK(std::abs(aff.coefficients.sum() - 1.0) < 1e-10);
}

TEST_CASE("corner is affine in muhat") {
  const ChartPoint c = seeded_chart(3, 12);
  Rng rng(1);
  std::normal_distribution<double> nd;
  CVec dir(4);
  for (int j = 0; j < 4; ++j) dir(j) = Cx(nd(rng), nd(rng));
  auto corner_at = [&](double h) {
    ChartPoint x = c;
    x.muhat += h * dir;
    return from_chart(x).Bhat(3, 3);
  };
  for (double h : {0.1, 1.0, 3.0}) {
    const Cx second = corner_at(h) - 2.0 * corner_at(0.0) + corner_at(-h);
    CHECK(std::abs(second) < 1e-9 * std::max(1.0, h * h * dir.norm()));
  }
}

TEST_CASE("flatten and unflatten") {
  const ChartPoint c = seeded_chart(4, 3);
  const CVec f = flatten(c);
  CHECK(f.size() == 18);
  const ChartPoint back = unflatten(f, 4, c.tau);
  CHECK((flatten(back) - f).norm() == 0.0);
  CHECK_THROWS_AS(unflatten(CVec::Zero(17), 4, c.tau), Error);
}
