#include <doctest.h>

#include <cmath>

#include "cmspace/errors.hpp"
#include "cmspace/flowcalc.hpp"

using namespace cmspace;

namespace {

const SL2Generator kE{Sl2Kind::E, 1.0};
const SL2Generator kF{Sl2Kind::F, 1.0};
const SL2Generator kH{Sl2Kind::H, 1.0};

AugmentedPair seeded_pair(int n, std::uint64_t seed) { return augment(random_point(n, 2, Cx(1.0, 0.0), seed)); }

double pair_gap(const AugmentedPair& a, const AugmentedPair& b) {
  return ((a.Ahat - b.Ahat).norm() + (a.Bhat - b.Bhat).norm()) / std::max(1.0, b.Ahat.norm() + b.Bhat.norm());
}

}  // namespace

TEST_CASE("exact flows") {
  const AugmentedPair p = seeded_pair(3, 1);
  const AugmentedPair there = flow_exact(FlowSpec{kE, 0.8}, p);
  const AugmentedPair back = flow_exact(FlowSpec{kE, -0.8}, there);
  CHECK(pair_gap(back, p) < 1e-14);

  const AugmentedPair h = flow_exact(FlowSpec{kH, 0.3}, p);
  CHECK((h.Ahat - std::exp(0.3) * p.Ahat).norm() < 1e-14 * p.Ahat.norm());
  CHECK((h.Bhat - std::exp(-0.3) * p.Bhat).norm() < 1e-14 * p.Bhat.norm());

  const AugmentedPair two = flow_exact(FlowSpec{kF, 0.2}, flow_exact(FlowSpec{kF, 0.5}, p));
  CHECK(pair_gap(two, flow_exact(FlowSpec{kF, 0.7}, p)) < 1e-14);

  const AugmentedPair via_matrix = flow_exact(kH.matrix(), 0.3, p);
  CHECK(pair_gap(via_matrix, h) < 1e-13);

  const Representation r = random_point(2, 2, Cx(1.0, 0.0), 2);
  const Representation fr = flow_exact(FlowSpec{kF, 0.4}, r);
  CHECK(pair_gap(augment(fr), flow_exact(FlowSpec{kF, 0.4}, augment(r))) < 1e-14);
  CHECK(on_shell_residual(fr) < 1e-12 * level_scale(fr));
}

TEST_CASE("exact flow in chart coordinates") {
  const ChartPoint c = find_lemma45_point(2, 1.0, 4);
  const ChartPoint e = flow_exact(FlowSpec{kE, 0.1}, c);
  CHECK((e.lambda - c.lambda).norm() < 1e-9);
  CHECK((e.lambdahat - c.lambdahat).norm() < 1e-9);
  CHECK((e.muhat - (c.muhat + 0.1 * c.lambdahat)).norm() < 1e-9);

  const ChartPoint h = flow_exact(FlowSpec{kH, 0.1}, c);
  CHECK((h.lambdahat - std::exp(0.1) * c.lambdahat).norm() < 1e-9);
  CHECK((h.lambda - std::exp(0.1) * c.lambda).norm() < 1e-9);
}

TEST_CASE("Trotter product") {
  const AugmentedPair p = seeded_pair(2, 3);
  CHECK(pair_gap(trotter_flow(kE, kF, 0.0, 8, p), p) == 0.0);
  for (int steps : {1, 4, 32}) {
    CHECK(pair_gap(trotter_flow(kE, kE, 0.5, steps, p), flow_exact(FlowSpec{{Sl2Kind::E, 2.0}, 0.5}, p)) < 1e-13);
  }
  const Mat2 sum = kE.matrix() + kF.matrix();
  const AugmentedPair target = flow_exact(sum, 0.5, p);
  std::vector<double> ns, errs;
  for (int steps : {16, 64, 256}) {
    ns.push_back(steps);
    errs.push_back(fingerprint_distance(fingerprint(trotter_flow(kE, kF, 0.5, steps, p)), fingerprint(target)));
  }
  const double slope = loglog_slope(ns, errs);
  CHECK(slope < -0.7);
  CHECK(slope > -1.3);
}

TEST_CASE("loglog slope of exact power laws") {
  CHECK(std::abs(loglog_slope({1.0, 10.0, 100.0}, {1.0, 0.1, 0.01}) + 1.0) < 1e-12);
  CHECK(std::abs(loglog_slope({2.0, 4.0}, {1.0, 4.0}) - 2.0) < 1e-12);
  CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), Error);
}

TEST_CASE("bracket flow") {
  const AugmentedPair p = seeded_pair(2, 5);
  CHECK(pair_gap(bracket_flow(kE, kE, 0.25, 16, p), p) < 1e-14);

  const AugmentedPair target = bracket_target(kE, kF, 0.25, p);
  CHECK(pair_gap(target, flow_exact(FlowSpec{kH, 0.25}, p)) < 1e-14);
  double prev = std::numeric_limits<double>::infinity();
  for (int steps : {64, 256, 1024}) {
    const double err = fingerprint_distance(fingerprint(bracket_flow(kE, kF, 0.25, steps, p)), fingerprint(target));
    CHECK(err <= prev);
    prev = err;
  }
  CHECK(detect_bracket_sign(kE, kF, p) == kBracketSign);
  CHECK(detect_bracket_sign(kE, kF, seeded_pair(3, 6)) == kBracketSign);
}

TEST_CASE("trace word functions") {
  const AugmentedPair p = seeded_pair(2, 7);
  CHECK(std::abs(trace_word_fn("AAB")(p) - (p.Ahat * p.Ahat * p.Bhat).trace()) < 1e-13);
  CHECK(std::abs(trace_word_fn("A")(p) - p.Ahat.trace()) == 0.0);
  CHECK_THROWS_AS(trace_word_fn("AXB"), Error);
  CHECK_THROWS_AS(trace_word_fn(""), Error);
}

TEST_CASE("locally nilpotent degrees") {
  const AugmentedPair p = seeded_pair(3, 8);
  CHECK(lnd_degree(kE, trace_word_fn("A"), p, 6) == 0);
  CHECK(lnd_degree(kE, trace_word_fn("B"), p, 6) == 1);
  CHECK(lnd_degree(kE, trace_word_fn("BB"), p, 6) == 2);
  CHECK(lnd_degree(kF, trace_word_fn("AAB"), p, 6) == 2);
  CHECK(lnd_degree(kF, trace_word_fn("B"), p, 6) == 0);
  for (const std::string w : {"AB", "ABB", "AABB", "ABAB"}) {
    const auto d = lnd_degree(kE, trace_word_fn(w), p, 8);
    REQUIRE(d.has_value());
    CHECK(*d <= static_cast<int>(w.size()));
  }
  CHECK_THROWS_AS(lnd_degree(kH, trace_word_fn("A"), p, 4), Error);
  try {
    lnd_degree(kE, trace_word_fn("A"), p, 40);
    FAIL("expected IllConditionedFit");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::IllConditionedFit);
  }
}

TEST_CASE("polynomial fit recovers the expansion of tr (B + tA)^2") {
  const AugmentedPair p = seeded_pair(2, 9);
  const PolynomialFit fit = fit_along_flow(kE, trace_word_fn("BB"), p, 2, 6);
  const Cx c0 = (p.Bhat * p.Bhat).trace();
  const Cx c1 = 2.0 * (p.Ahat * p.Bhat).trace();
  const Cx c2 = (p.Ahat * p.Ahat).trace();
  CHECK(std::abs(fit.coefficients(0) - c0) < 1e-10 * fit.scale);
  CHECK(std::abs(fit.coefficients(1) - c1) < 1e-10 * fit.scale);
  CHECK(std::abs(fit.coefficients(2) - c2) < 1e-10 * fit.scale);
  CHECK(fit.residual < 1e-10 * fit.scale);
}

TEST_CASE("compatible witness") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const AugmentedPair p = seeded_pair(1 + static_cast<int>(seed % 4), seed);
    if (std::abs(p.Ahat.trace()) <= 0.1) continue;
    const WitnessReport w = compatible_witness(p);
    CHECK(w.nonvanishing);
    CHECK(w.xi_residual < 1e-10 * w.scale);
    CHECK(w.theta_residual < 1e-10 * w.scale);
    CHECK(w.theta2_residual < 1e-10 * w.scale);
    CHECK(w.theta_degree == 1);
    ++checked;
  }
  CHECK(checked > 5);

  ChartPoint c;
  c.lambda = CVec::Zero(1);
  c.lambdahat.resize(2);
  c.lambdahat << 1.0, -1.0;
  c.mu = CVec::Zero(1);
  c.muhat = CVec::Zero(2);
  c.tau = 1.0;
  try {
    compatible_witness(from_chart(c));
    FAIL("expected WitnessFailsNonvanishing");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::WitnessFailsNonvanishing);
  }
}
