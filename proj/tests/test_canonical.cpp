#include <doctest.h>

#include "cmspace/canonical.hpp"
#include "cmspace/errors.hpp"

using namespace cmspace;

namespace {

CMat diag(std::initializer_list<Cx> values) {
  CVec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (Cx x : values) v(i++) = x;
  return v.asDiagonal();
}

// Form with diagonal A, last column x, last row y and corner 0.
AugmentedPair bordered(const CVec& lambda, const CVec& x, const CVec& y) {
  const auto n = lambda.size();
  CMat a = CMat::Zero(n + 1, n + 1);
  a.topLeftCorner(n, n) = lambda.asDiagonal();
  a.col(n).head(n) = x;
  a.row(n).head(n) = y.transpose();
  return {a, CMat::Zero(n + 1, n + 1)};
}

}  // namespace

TEST_CASE("regular semisimple predicate") {
  CHECK(is_regular_semisimple(diag({1.0, 2.0, 3.0})));
  CMat e12 = CMat::Zero(2, 2);
  e12(0, 1) = 1.0;
  CHECK_FALSE(is_regular_semisimple(e12));
  CMat swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  CHECK(is_regular_semisimple(swap));
}

TEST_CASE("orbit dimension") {
  // Diagonal Â: the diagonal ξ stabilize it, rank n² − n.
  for (int n = 1; n <= 4; ++n) {
    CVec d(n + 1);
    for (int i = 0; i <= n; ++i) d(i) = static_cast<double>(i + 1);
    const AugmentedPair p{d.asDiagonal(), CMat::Zero(n + 1, n + 1)};
    CHECK(orbit_dimension(p) == n * n - n);
    CHECK_FALSE(is_g_regular(p));
  }
  // Normal form with unit last row: trivial stabilizer.
  for (int n = 1; n <= 3; ++n) {
    CVec lambda(n), x(n), y = CVec::Ones(n);
    for (int i = 0; i < n; ++i) {
      lambda(i) = static_cast<double>(i);
      x(i) = Cx(0.5, static_cast<double>(i));
    }
    CHECK(orbit_dimension(bordered(lambda, x, y)) == n * n);
  }
  CHECK(orbit_dimension(AugmentedPair{CMat::Zero(3, 3), CMat::Zero(3, 3)}) == 0);
}

TEST_CASE("membership in g0hat") {
  CVec lambda(3), x(3), y(3);
  lambda << 0.0, 1.0, 2.0;
  x << 1.0, 1.0, 1.0;
  y << 1.0, 1.0, 1.0;
  CHECK(in_g0hat(bordered(lambda, x, y)));
  y << 1.0, 0.0, 1.0;
  CHECK_FALSE(in_g0hat(bordered(lambda, x, y)));

  CMat swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  CHECK(in_g0hat(AugmentedPair{swap, CMat::Zero(2, 2)}));

  CMat degenerate = CMat::Zero(3, 3);
  degenerate(2, 0) = 1.0;
  degenerate(2, 1) = 1.0;
  try {
    in_g0hat(AugmentedPair{degenerate, CMat::Zero(3, 3)});
    FAIL("expected DegenerateA");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateA);
  }
}

TEST_CASE("membership in g0hat is gauge invariant") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    AugmentedPair p = augment(random_point(n, 2, Cx(1.0, 0.0), rng));
    if (trial % 3 == 0) p.Ahat(n, trial % n) = 0.0;  // force some points outside
    const GaugeElement g = random_gauge(n, rng);
    CHECK(in_g0hat(p) == in_g0hat(gauge_act(g, p)));
  }
}

TEST_CASE("normalize scales the last row to ones") {
  CMat a(2, 2);
  a << 0.0, 1.0, 2.0, 0.0;
  const NormalizedPair np = normalize(AugmentedPair{a, CMat::Zero(2, 2)});
  CMat expected(2, 2);
  expected << 0.0, 2.0, 1.0, 0.0;
  CHECK((np.pair.Ahat - expected).norm() < 1e-15);
  CHECK(std::abs(np.gauge.g(0, 0) - Cx(2.0)) < 1e-15);
}

TEST_CASE("normalize on generated points") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 1 + static_cast<int>(seed % 5);
    Rng rng(seed);
    const AugmentedPair raw = augment(random_point(n, 2, Cx(1.0, 0.0), rng));
    const AugmentedPair p = gauge_act(random_gauge(n, rng), raw);
    const NormalizedPair np = normalize(p);
    for (int i = 0; i < n; ++i) CHECK(np.pair.Ahat(n, i) == Cx(1.0, 0.0));
    CHECK(is_normalized(np.pair));
    const CMat e = np.gauge.embedded();
    const CMat direct = e * p.Ahat * e.inverse();
    CHECK((direct - np.pair.Ahat).norm() <= 1e-10 * std::max(1.0, p.Ahat.norm()));
    CHECK(std::abs(np.pair.corner_A() - p.corner_A()) < 1e-10 * std::max(1.0, p.Ahat.norm()));

    const NormalizedPair twice = normalize(np.pair);
    CHECK((twice.pair.Ahat - np.pair.Ahat).norm() <= 1e-12 * std::max(1.0, np.pair.Ahat.norm()));
    CHECK((twice.pair.Bhat - np.pair.Bhat).norm() <= 1e-12 * std::max(1.0, np.pair.Bhat.norm()));

    const std::vector<CMat> in{p.Ahat};
    const std::vector<CMat> out{np.pair.Ahat};
    CHECK(fingerprint_distance(fingerprint(in, "A", 2 * (n + 1)), fingerprint(out, "A", 2 * (n + 1))) < 1e-9);
  }
}

TEST_CASE("normalize rejects points outside g0hat") {
  CVec lambda(2), x(2), y(2);
  lambda << 0.0, 1.0;
  x << 1.0, 1.0;
  y << 1.0, 0.0;
  try {
    normalize(bordered(lambda, x, y));
    FAIL("expected ZeroLastRowEntry");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroLastRowEntry);
  }
}

TEST_CASE("generated points are strongly semisimple") {
  int strong = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 1 + static_cast<int>(seed % 5);
    const RegularityReport rep = regularity(augment(random_point(n, 2, Cx(1.0, 0.0), seed)));
    if (rep.is_strongly_semisimple()) ++strong;
  }
  CHECK(strong == 100);
}
