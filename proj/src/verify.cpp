#include "cmspace/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "cmspace/canonical.hpp"
#include "cmspace/chart.hpp"
#include "cmspace/errors.hpp"
#include "cmspace/flowcalc.hpp"
#include "cmspace/json_io.hpp"
#include "cmspace/sl2flows.hpp"
#include "cmspace/variety.hpp"

namespace cmspace {

namespace {

// FNV-1a, so per-check streams do not depend on the standard library's hash.
std::uint64_t tag_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

Rng trial_rng(const VerifyConfig& cfg, const std::string& tag, int n, int trial) {
  const std::uint64_t h = tag_hash(tag);
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(trial)};
  return Rng(seq);
}

std::uint64_t trial_seed(const VerifyConfig& cfg, const std::string& tag, int n, int trial) {
  Rng rng = trial_rng(cfg, tag, n, trial);
  return rng();
}

CheckRecord make(const char* name, const char* anchor, double residual, double threshold,
                 std::string detail = {}) {
  CheckRecord r;
  r.name = name;
  r.anchor = anchor;
  r.residual = residual;
  r.threshold = threshold;
  r.passed = residual <= threshold;  // NaN fails
  r.detail = std::move(detail);
  return r;
}

// Running maximum that keeps NaN.
void worst(double& acc, double value) {
  if (std::isnan(value) || value > acc) acc = value;
}

CMat random_cmat(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> nd;
  CMat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Cx(nd(rng), nd(rng));
  }
  return m;
}

SL2Element random_sl2(Rng& rng) {
  std::normal_distribution<double> nd(0.0, 0.7);
  Cx a(nd(rng), nd(rng));
  const Cx b(nd(rng), nd(rng)), c(nd(rng), nd(rng));
  if (std::abs(a) < 0.2) a += 1.0;
  return {a, b, c, (1.0 + b * c) / a};
}

bool bit_equal(const CMat& a, const CMat& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(Cx) * static_cast<std::size_t>(a.size())) == 0;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

const SL2Generator kE{Sl2Kind::E, 1.0};
const SL2Generator kF{Sl2Kind::F, 1.0};
const SL2Generator kH{Sl2Kind::H, 1.0};

// ---- linalg ----

CheckRecord linalg_eig_residual(const VerifyConfig& cfg) {
  double res = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      Rng rng = trial_rng(cfg, "linalg.eig", n, t);
      const CMat m = random_cmat(n + 1, n + 1, rng);
      const Eigendecomposition e = eig(m, cfg.tol);
      const CMat d = e.values.asDiagonal();
      worst(res, (e.g * m * e.g_inv - d).norm() / m.norm());
      worst(res, (e.g * e.g_inv - CMat::Identity(n + 1, n + 1)).norm());
    }
  }
  return make("linalg.eig_residual", "g M g^-1 = diag(eigenvalues)", res, 1e-10);
}

CheckRecord linalg_eig_determinism(const VerifyConfig& cfg) {
  double mismatches = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      Rng rng = trial_rng(cfg, "linalg.det", n, t);
      const CMat m = random_cmat(n + 1, n + 1, rng);
      const Eigendecomposition a = eig(m, cfg.tol), b = eig(m, cfg.tol);
      if (!bit_equal(a.g, b.g) || !bit_equal(a.g_inv, b.g_inv)) mismatches += 1.0;
    }
  }
  return make("linalg.eig_determinism", "repeated eig is bit-identical", mismatches, 0.0);
}

// ---- variety ----

CheckRecord variety_level_set(const VerifyConfig& cfg) {
  double res = 0.0;
  for (int k = 1; k <= 2; ++k) {
    for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
      for (int t = 0; t < cfg.trials; ++t) {
        const Representation r = random_point(n, k, cfg.tau, trial_seed(cfg, "variety.level", n * 2 + k, t));
        worst(res, on_shell_residual(r) / level_scale(r));
      }
    }
  }
  return make("variety.level_set", "[A,B] - vw = tau I", res, 1e-12);
}

CheckRecord variety_block_identity(const VerifyConfig& cfg) {
  double res = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      Rng rng = trial_rng(cfg, "variety.block", n, t);
      Representation r;
      r.n = n;
      r.k = 2;
      r.A = random_cmat(n, n, rng);
      r.B = random_cmat(n, n, rng);
      r.v = random_cmat(n, 2, rng);
      r.w = random_cmat(2, n, rng);
      const AugmentedPair p = augment(r);
      worst(res, block_commutator_check(p) / pair_scale(p));
    }
  }
  return make("variety.block_identity", "[Ahat,Bhat] = ([A,B]-vw, Av2-Bv1; w2B+w1A, *)", res, 1e-12);
}

CheckRecord variety_gauge_equivariance(const VerifyConfig& cfg) {
  double res = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      Rng rng = trial_rng(cfg, "variety.gauge", n, t);
      const Representation r = random_point(n, 2, cfg.tau, rng);
      const GaugeElement g = random_gauge(n, rng);
      const CMat ginv = g.g.inverse();
      const Representation gr = gauge_act(g, r);
      worst(res, (moment_map(gr) - g.g * moment_map(r) * ginv).norm() / level_scale(r));
    }
  }
  return make("variety.gauge_equivariance", "mu(g.x) = g mu(x) g^-1", res, 1e-10);
}

CheckRecord variety_augment_project(const VerifyConfig& cfg) {
  double bad = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      const Representation r = random_point(n, 2, cfg.tau, trial_seed(cfg, "variety.aug", n, t));
      const Representation back = project(augment(r), r.tau, cfg.tol);
      if (!bit_equal(back.A, r.A) || !bit_equal(back.B, r.B) || !bit_equal(back.v, r.v) ||
          !bit_equal(back.w, r.w)) {
        bad += 1.0;
      }
    }
  }
  return make("variety.augment_project", "project(augment(x)) = x", bad, 0.0);
}

CheckRecord variety_quiver_calibration(const VerifyConfig& cfg) {
  std::vector<Representation> points;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      points.push_back(random_point(n, 2, cfg.tau, trial_seed(cfg, "variety.quiver", n, t)));
    }
  }
  const CalibrationResult joint = dictionary_calibrate(points, cfg.tol);
  double inconsistent = joint.found() ? 0.0 : 1.0;
  for (const auto& r : points) {
    if (dictionary_calibrate(r, cfg.tol).admissible != joint.admissible) inconsistent += 1.0;
  }
  std::string detail = "admissible:";
  for (const auto& d : joint.admissible) detail += " [" + d.name() + "]";
  detail += joint.literal_admissible ? "; literal dictionary admissible" : "; literal dictionary not admissible";
  return make("variety.quiver_calibration", "nu = ([A,B] + X1Y2 - X2Y1, Y1X2 - Y2X1) in O", inconsistent, 0.0,
              detail);
}

// ---- canonical ----

CheckRecord canonical_normalize(const VerifyConfig& cfg) {
  double res = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      Rng rng = trial_rng(cfg, "canonical.normalize", n, t);
      const AugmentedPair raw = augment(random_point(n, 2, cfg.tau, rng));
      const AugmentedPair p = gauge_act(random_gauge(n, rng), raw);
      const NormalizedPair np = normalize(p, cfg.tol);
      for (int i = 0; i < n; ++i) worst(res, std::abs(np.pair.Ahat(n, i) - 1.0));
      const NormalizedPair twice = normalize(np.pair, cfg.tol);
      const double scale = pair_scale(np.pair);
      worst(res, ((twice.pair.Ahat - np.pair.Ahat).norm() + (twice.pair.Bhat - np.pair.Bhat).norm()) / scale);
      worst(res, fingerprint_distance(fingerprint(p), fingerprint(np.pair)));
    }
  }
  return make("canonical.normalize", "Ahat conjugates to diagonal A with last row of ones", res, 1e-9);
}

CheckRecord canonical_strong_semisimplicity(const VerifyConfig& cfg) {
  double bad = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      const AugmentedPair p = augment(random_point(n, 2, cfg.tau, trial_seed(cfg, "canonical.ss", n, t)));
      if (!regularity(p, cfg.tol).is_strongly_semisimple()) bad += 1.0;
    }
  }
  return make("canonical.strong_semisimplicity", "generic points have simple A, Ahat and Ahat in g0hat", bad,
              0.0);
}

CheckRecord canonical_g0hat_invariance(const VerifyConfig& cfg) {
  double bad = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      Rng rng = trial_rng(cfg, "canonical.g0hat", n, t);
      AugmentedPair p = augment(random_point(n, 2, cfg.tau, rng));
      if (t % 3 == 0) p.Ahat(n, t % n) = 0.0;
      if (in_g0hat(p, cfg.tol) != in_g0hat(gauge_act(random_gauge(n, rng), p), cfg.tol)) bad += 1.0;
    }
  }
  return make("canonical.g0hat_invariance", "membership in g0hat is G-invariant", bad, 0.0);
}

// ---- chart ----

ChartPoint seeded_chart(const VerifyConfig& cfg, const char* tag, int n, int t) {
  return to_chart(augment(random_point(n, 2, cfg.tau, trial_seed(cfg, tag, n, t))), cfg.tol);
}

CheckRecord chart_hand_case(const VerifyConfig& cfg) {
  ChartPoint c;
  c.lambda = CVec::Zero(1);
  c.lambdahat.resize(2);
  c.lambdahat << 1.0, -1.0;
  c.mu = CVec::Constant(1, Cx(0.5, 0.25));
  c.muhat = CVec::Zero(2);
  c.tau = 1.0;
  const ChartReconstruction rec = from_chart_detail(c, cfg.tol);
  CMat a(2, 2), b(2, 2), s(2, 2);
  a << 0.0, 1.0, 1.0, 0.0;
  b << c.mu(0), -0.5, 0.5, 0.0;
  s << 0.0, 0.5, -0.5, 0.0;
  double res = 0.0;
  worst(res, (rec.pair.Ahat - a).norm());
  worst(res, (rec.pair.Bhat - b).norm());
  worst(res, rec.decomposition.m.norm());
  worst(res, (rec.decomposition.S - s).norm());
  const Decomposition d = decompose(rec.pair, 1.0, cfg.tol, c.lambdahat);
  worst(res, d.m.norm());
  worst(res, (d.S - s).norm());
  worst(res, std::abs(d.mu(0) - c.mu(0)));
  return make("chart.hand_case", "n=1, Ahat=((0,1),(1,0)): m=0, S12=1/2, S21=-1/2", res, 1e-12);
}

CheckRecord chart_decomposition(const VerifyConfig& cfg) {
  double res = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      const AugmentedPair raw = augment(random_point(n, 2, cfg.tau, trial_seed(cfg, "chart.decomp", n, t)));
      const AugmentedPair p = normalize(raw, cfg.tol).pair;
      const Decomposition d = decompose(p, cfg.tau, cfg.tol);
      const double scale = pair_scale(p);
      worst(res, (d.B1 + d.B2 - p.Bhat).norm() / scale);
      worst(res, (comm(p.Ahat, d.B2) - tau_hat(n, cfg.tau) - embed_mplus(d.m)).norm() / scale);
      worst(res, (d.g * d.B2 * d.g_inv - d.D_muhat - d.S).norm() / scale);
      worst(res, std::abs(d.B1(n, n)));
    }
  }
  return make("chart.decomposition", "Bhat = B1 + B2, [Ahat,B2] = tauhat + m+", res, 1e-9);
}

CheckRecord chart_s_invariance(const VerifyConfig& cfg) {
  double res = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    const ChartPoint base = seeded_chart(cfg, "chart.s", n, 0);
    const CMat s0 = from_chart_detail(base, cfg.tol).decomposition.S;
    for (int t = 0; t < cfg.trials; ++t) {
      Rng rng = trial_rng(cfg, "chart.s.var", n, t);
      ChartPoint c = base;
      c.mu = random_cmat(n, 1, rng);
      c.muhat = random_cmat(n + 1, 1, rng);
      worst(res, (from_chart_detail(c, cfg.tol).decomposition.S - s0).norm());
    }
  }
  return make("chart.s_invariance", "S depends only on (tau, lambda, lambdahat)", res, 1e-10);
}

CheckRecord chart_round_trip(const VerifyConfig& cfg) {
  double res = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      const ChartPoint c = seeded_chart(cfg, "chart.rt", n, t);
      worst(res, chart_distance(c, to_chart(from_chart(c, cfg.tol), cfg.tol)));
    }
  }
  return make("chart.round_trip", "to_chart(from_chart(c)) = c", res, 1e-8);
}

CheckRecord chart_fingerprint_round_trip(const VerifyConfig& cfg) {
  double res = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      const AugmentedPair p = augment(random_point(n, 2, cfg.tau, trial_seed(cfg, "chart.fp", n, t)));
      const AugmentedPair q = from_chart(to_chart(p, cfg.tol), cfg.tol);
      worst(res, fingerprint_distance(fingerprint(p), fingerprint(q)));
    }
  }
  return make("chart.fingerprint_round_trip", "from_chart(to_chart(p)) is G-equivalent to p", res, 1e-8);
}

CheckRecord chart_jacobian_rank(const VerifyConfig& cfg) {
  double bad = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      const ChartPoint c = seeded_chart(cfg, "chart.jac", n, t);
      if (numeric_rank(chart_jacobian(c, 1e-6, cfg.tol), 1e-6) != 4 * n + 2) bad += 1.0;
    }
  }
  return make("chart.jacobian_rank", "chart Jacobian rank = 4n+2", bad, 0.0);
}

CheckRecord chart_corner_affine(const VerifyConfig& cfg) {
  double res = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      const ChartPoint c = seeded_chart(cfg, "chart.affine", n, t);
      Rng rng = trial_rng(cfg, "chart.affine.dir", n, t);
      const CVec dir = random_cmat(n + 1, 1, rng);
      auto corner_at = [&](double h) {
        ChartPoint x = c;
        x.muhat += h * dir;
        return from_chart(x, cfg.tol).Bhat(n, n);
      };
      const Cx second = corner_at(1.0) - 2.0 * corner_at(0.0) + corner_at(-1.0);
      worst(res, std::abs(second) / std::max(1.0, dir.norm()));
    }
  }
  return make("chart.corner_affine", "corner(Bhat) affine in muhat", res, 1e-9);
}

CheckRecord chart_slice_solve(const VerifyConfig& cfg) {
  double res = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      ChartPoint c = seeded_chart(cfg, "chart.slice", n, t);
      Rng rng = trial_rng(cfg, "chart.slice.mu", n, t);
      c.muhat = random_cmat(n + 1, 1, rng);
      const AugmentedPair p = from_chart(solve_slice_muhat(c, cfg.tol), cfg.tol);
      worst(res, std::abs(slice_residual(p).second) / pair_scale(p));
    }
  }
  return make("chart.slice_solve", "tr Ahat = tr A, corner(Bhat) = 0", res, 1e-10);
}

// ---- sl2flows ----

CheckRecord sl2_group_law(const VerifyConfig& cfg) {
  double res = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      Rng rng = trial_rng(cfg, "sl2.group", n, t);
      const SL2Element g1 = random_sl2(rng), g2 = random_sl2(rng);
      const AugmentedPair p = augment(random_point(n, 2, cfg.tau, rng));
      const AugmentedPair lhs = act_pair(g1, act_pair(g2, p));
      const AugmentedPair rhs = act_pair(g1 * g2, p);
      const double scale = std::max(1.0, lhs.Ahat.norm() + lhs.Bhat.norm()) * pair_scale(p);
      worst(res, ((lhs.Ahat - rhs.Ahat).norm() + (lhs.Bhat - rhs.Bhat).norm()) / scale);
    }
  }
  return make("sl2flows.group_law", "g1.(g2.p) = (g1 g2).p", res, 1e-11);
}

CheckRecord sl2_moment_preserved(const VerifyConfig& cfg) {
  double res = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      Rng rng = trial_rng(cfg, "sl2.moment", n, t);
      const Representation r = random_point(n, 2, cfg.tau, rng);
      const SL2Element g = random_sl2(rng);
      worst(res, check_moment_preserved(g, r) / level_scale(act_components(g, r)));
    }
  }
  return make("sl2flows.moment_preserved", "(aA+bB, cA+dB, ...) keeps [A,B] - vw = tau I", res, 1e-10);
}

CheckRecord sl2_non_sl2_control(const VerifyConfig& cfg) {
  double res = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      const Representation r = random_point(n, 2, cfg.tau, trial_seed(cfg, "sl2.control", n, t));
      const SL2Element bad{2.0, 0.0, 0.0, 1.0};
      const double residual = check_moment_preserved(bad, r);
      worst(res, 1e-3 * level_scale(act_components(bad, r)) / residual);
    }
  }
  return make("sl2flows.non_sl2_control", "det g = 2 breaks the level set (residual > 1e-3 scale)", res, 1.0);
}

CheckRecord sl2_fixed_point_separation(const VerifyConfig& cfg) {
  double res = 0.0;
  int used = 0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      const Representation r = random_point(n, 2, cfg.tau, trial_seed(cfg, "sl2.fixed", n, t));
      if (std::abs((r.A * r.A).trace()) <= 1e-6 * level_scale(r)) continue;
      const FixedPointProbe probe = fixed_point_probe(r, 1.0);
      worst(res, 1e-6 / probe.separation);
      ++used;
    }
  }
  return make("sl2flows.fixed_point_separation", "h = diag(e^t, e^-t) moves every point", res, 1.0,
              std::to_string(used) + " points with tr A^2 != 0");
}

CheckRecord sl2_trace_round_trip(const VerifyConfig& cfg) {
  double res = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      const AugmentedPair p = augment(random_point(n, 2, cfg.tau, trial_seed(cfg, "sl2.trace", n, t)));
      const CVec l = eigenvalues(p.Ahat);
      worst(res, (trace_coords(p.Ahat).s - lambdahat_to_s(l)).norm() / std::max(1.0, trace_coords(p.Ahat).s.norm()));
      const CVec back = s_to_lambdahat(lambdahat_to_s(l), cfg.tol);
      const auto perm = track(l, back);
      if (!perm) {
        worst(res, std::numeric_limits<double>::infinity());
        continue;
      }
      for (Eigen::Index j = 0; j < l.size(); ++j) {
        worst(res, std::abs(back((*perm)[static_cast<std::size_t>(j)]) - l(j)) / std::max(1.0, std::abs(l(j))));
      }
    }
  }
  return make("sl2flows.trace_round_trip", "s_k = tr Ahat^k <-> lambdahat (Newton identities)", res, 1e-9);
}

CheckRecord sl2_h_scaling(const VerifyConfig& cfg) {
  double res = 0.0;
  const double t = 0.1;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int k = 0; k < cfg.trials; ++k) {
      const AugmentedPair p = augment(random_point(n, 2, cfg.tau, trial_seed(cfg, "sl2.hscale", n, k)));
      const AugmentedPair q = act_pair(kH.exp(t), p);
      worst(res, (eigenvalues(q.Ahat) - std::exp(t) * eigenvalues(p.Ahat)).norm());
      worst(res, (eigenvalues(q.Ahat.topLeftCorner(n, n)) - std::exp(t) * eigenvalues(p.Ahat.topLeftCorner(n, n))).norm());
    }
  }
  return make("sl2flows.h_scaling", "h scales the spectra of A and Ahat by e^t", res, 1e-9);
}

std::vector<ChartPoint> slice_points(const VerifyConfig& cfg, int n) {
  std::vector<ChartPoint> out;
  for (int t = 0; t < cfg.trials; ++t) {
    out.push_back(find_lemma45_point(n, cfg.tau, trial_seed(cfg, "sl2.slice_point", n, t), {}, cfg.tol));
  }
  return out;
}

CheckRecord sl2_independence_rank(const VerifyConfig& cfg) {
  double bad = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (const ChartPoint& c : slice_points(cfg, n)) {
      const IndependenceCertificate cert = independence_rank(c);
      min_ratio = std::min(min_ratio, cert.sigma_ratio);
      if (cert.rank != 3 || !(cert.sigma_ratio > 1e-6)) bad += 1.0;
    }
  }
  return make("sl2flows.independence_rank", "E-, F- and H-fields independent at a slice point", bad, 0.0,
              "min sigma3/sigma1 = " + fmt(min_ratio));
}

double field_gap(const std::vector<std::optional<Cx>>& ana, const CVec& num) {
  double g = 0.0;
  for (std::size_t i = 0; i < ana.size(); ++i) {
    if (ana[i]) worst(g, std::abs(*ana[i] - num(static_cast<Eigen::Index>(i))));
  }
  return g;
}

CheckRecord sl2_field(const VerifyConfig& cfg, const SL2Generator& gen, const char* name, const char* anchor) {
  double res = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (const ChartPoint& c : slice_points(cfg, n)) {
      const double scale = std::max(1.0, flatten(c).norm());
      const ChartTangent num = induced_field_numeric(gen, c);
      const PartialTangent ana = analytic_field(gen, c);
      worst(res, field_gap(ana.dlambda, num.dlambda) / scale);
      worst(res, field_gap(ana.dlambdahat, num.dlambdahat) / scale);
      worst(res, field_gap(ana.dmu, num.dmu) / scale);
      worst(res, field_gap(ana.dmuhat, num.dmuhat) / scale);
      worst(res, field_gap(ana.ds, num.ds) / scale);
    }
  }
  return make(name, anchor, res, 1e-6);
}

CheckRecord sl2_field_e(const VerifyConfig& cfg) {
  return sl2_field(cfg, kE, "sl2flows.field_e", "E: muhat_k -> muhat_k + t lambdahat_k, rest fixed");
}
CheckRecord sl2_field_f(const VerifyConfig& cfg) {
  return sl2_field(cfg, kF, "sl2flows.field_f", "F: ds1 = tr D_muhat + sum mu, ds2 = 2 tr(D_lambdahat D_muhat) + 2 sum lambda mu");
}
CheckRecord sl2_field_h(const VerifyConfig& cfg) {
  return sl2_field(cfg, kH, "sl2flows.field_h", "H: s1 d/ds1 + 2 s2 d/ds2");
}

CheckRecord sl2_slice_tangency(const VerifyConfig& cfg) {
  double res = 0.0;
  double basis = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (const ChartPoint& c : slice_points(cfg, n)) {
      // The slice residuals are entries of Ahat and Bhat; the basis change is in chart units.
      const double scale = pair_scale(from_chart(c, cfg.tol));
      const double chart_scale = std::max(1.0, flatten(c).norm());
      const CMat jac = newton_jacobian(c.lambdahat);
      for (const SL2Generator& gen : {kE, kF, kH}) {
        const ChartTangent num = induced_field_numeric(gen, c);
        worst(res, std::abs(num.dslice_trace) / scale);
        worst(res, std::abs(num.dslice_corner) / scale);
        worst(basis, (jac * num.dlambdahat - num.ds).norm() / (chart_scale * std::max(1.0, jac.norm())));
      }
    }
  }
  return make("sl2flows.slice_tangency", "fields tangent to tr Ahat = tr A, corner(Bhat) = 0", res, 1e-7,
              "lambdahat/s basis change consistency " + fmt(basis));
}

// ---- flowcalc ----

double trotter_slope_at(const AugmentedPair& p) {
  const AugmentedPair target = flow_exact(kE.matrix() + kF.matrix(), 0.5, p);
  const Fingerprint ft = fingerprint(target);
  std::vector<double> ns, errs;
  for (int steps : {16, 64, 256}) {
    ns.push_back(steps);
    errs.push_back(fingerprint_distance(fingerprint(trotter_flow(kE, kF, 0.5, steps, p)), ft));
  }
  return loglog_slope(ns, errs);
}

CheckRecord flow_trotter_slope(const VerifyConfig& cfg) {
  double res = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      const AugmentedPair p = augment(random_point(n, 2, cfg.tau, trial_seed(cfg, "flow.trotter", n, t)));
      // Error falls like 1/n, so the fitted slope should be near −1.
      worst(res, std::abs(trotter_slope_at(p) + 1.0));
    }
  }
  return make("flowcalc.trotter_slope", "flow of X+Y = lim (phi_{t/n} psi_{t/n})^n, |slope - 1| <= 0.3", res,
              0.3);
}

struct BracketSweep {
  std::vector<double> errors;
};

BracketSweep bracket_sweep(const AugmentedPair& p) {
  const double t = 0.25;
  const Fingerprint target = fingerprint(bracket_target(kE, kF, t, p));
  BracketSweep s;
  for (int steps : {64, 256, 1024}) {
    s.errors.push_back(fingerprint_distance(fingerprint(bracket_flow(kE, kF, t, steps, p)), target));
  }
  return s;
}

CheckRecord flow_bracket_monotone(const VerifyConfig& cfg) {
  double increases = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      const AugmentedPair p = augment(random_point(n, 2, cfg.tau, trial_seed(cfg, "flow.bracket", n, t)));
      const BracketSweep s = bracket_sweep(p);
      for (std::size_t i = 1; i < s.errors.size(); ++i) {
        if (!(s.errors[i] <= s.errors[i - 1])) increases += 1.0;
      }
    }
  }
  return make("flowcalc.bracket_monotone", "bracket flow error nonincreasing over 64, 256, 1024 steps",
              increases, 0.0);
}

CheckRecord flow_bracket_final(const VerifyConfig& cfg) {
  double res = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      const AugmentedPair p = augment(random_point(n, 2, cfg.tau, trial_seed(cfg, "flow.bracket", n, t)));
      worst(res, bracket_sweep(p).errors.back());
    }
  }
  return make("flowcalc.bracket_final_error", "flow of [X,Y] = lim (group commutator at sqrt(t/n))^n, 1024 steps",
              res, 1e-3);
}

CheckRecord flow_bracket_sign(const VerifyConfig& cfg) {
  double bad = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < std::min(cfg.trials, 5); ++t) {
      const AugmentedPair p = augment(random_point(n, 2, cfg.tau, trial_seed(cfg, "flow.sign", n, t)));
      if (detect_bracket_sign(kE, kF, p) != kBracketSign) bad += 1.0;
    }
  }
  return make("flowcalc.bracket_sign", "field bracket sign is the same at every base point", bad, 0.0,
              "sign = " + std::to_string(kBracketSign));
}

CheckRecord flow_lnd_degrees(const VerifyConfig& cfg) {
  struct Case {
    const SL2Generator* gen;
    const char* word;
    int degree;
  };
  const Case cases[] = {{&kE, "A", 0}, {&kE, "B", 1}, {&kE, "BB", 2},
                        {&kF, "B", 0}, {&kF, "A", 1}, {&kF, "AA", 2}};
  double bad = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int t = 0; t < cfg.trials; ++t) {
      const AugmentedPair p = augment(random_point(n, 2, cfg.tau, trial_seed(cfg, "flow.lnd", n, t)));
      for (const Case& c : cases) {
        if (lnd_degree(*c.gen, trace_word_fn(c.word), p, 6) != c.degree) bad += 1.0;
      }
    }
  }
  return make("flowcalc.lnd_degrees", "E, F act as locally nilpotent derivations on trace words", bad, 0.0);
}

CheckRecord flow_witness(const VerifyConfig& cfg) {
  double res = 0.0;
  int used = 0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    int accepted = 0;
    for (int t = 0; accepted < cfg.trials && t < 20 * cfg.trials; ++t) {
      const AugmentedPair p = augment(random_point(n, 2, cfg.tau, trial_seed(cfg, "flow.witness", n, t)));
      if (std::abs(p.Ahat.trace()) <= 0.1) continue;
      const WitnessReport w = compatible_witness(p, cfg.tol);
      worst(res, std::max({w.xi_residual, w.theta_residual, w.theta2_residual}) / w.scale);
      if (!w.nonvanishing || w.theta_degree != 1) worst(res, std::numeric_limits<double>::infinity());
      ++accepted;
    }
    used += accepted;
  }
  return make("flowcalc.witness", "Xi(h) = 0, Theta(h) = tr Ahat != 0, Theta^2(h) = 0 for h = tr Bhat", res,
              1e-10, std::to_string(used) + " points with |tr Ahat| > 0.1");
}

}  // namespace

int Report::passed() const {
  return static_cast<int>(std::count_if(records.begin(), records.end(), [](const auto& r) { return r.passed; }));
}

int Report::failed() const { return static_cast<int>(records.size()) - passed(); }

nlohmann::json Report::to_json() const {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j{{"name", r.name},
                     {"anchor", r.anchor},
                     {"status", r.passed ? "pass" : "fail"},
                     {"residual", std::isfinite(r.residual) ? nlohmann::json(r.residual) : nlohmann::json(nullptr)},
                     {"threshold", r.threshold},
                     {"runtime_ms", r.runtime_ms}};
    if (!r.detail.empty()) j["detail"] = r.detail;
    recs.push_back(std::move(j));
  }
  return {{"schema_version", kReportSchemaVersion},
          {"config",
           {{"suite", config.suite},
            {"n", {config.n_min, config.n_max}},
            {"trials", config.trials},
            {"seed", config.seed},
            {"tol", config.tol},
            {"tau", cmspace::to_json(config.tau)}}},
          {"records", std::move(recs)},
          {"summary", {{"total", records.size()}, {"passed", passed()}, {"failed", failed()}}}};
}

const std::vector<CheckSpec>& all_checks() {
  static const std::vector<CheckSpec> checks{
      {"linalg.eig_residual", "linalg", linalg_eig_residual},
      {"linalg.eig_determinism", "linalg", linalg_eig_determinism},
      {"variety.level_set", "variety", variety_level_set},
      {"variety.block_identity", "variety", variety_block_identity},
      {"variety.gauge_equivariance", "variety", variety_gauge_equivariance},
      {"variety.augment_project", "variety", variety_augment_project},
      {"variety.quiver_calibration", "variety", variety_quiver_calibration},
      {"canonical.normalize", "canonical", canonical_normalize},
      {"canonical.strong_semisimplicity", "canonical", canonical_strong_semisimplicity},
      {"canonical.g0hat_invariance", "canonical", canonical_g0hat_invariance},
      {"chart.hand_case", "chart", chart_hand_case},
      {"chart.decomposition", "chart", chart_decomposition},
      {"chart.s_invariance", "chart", chart_s_invariance},
      {"chart.round_trip", "chart", chart_round_trip},
      {"chart.fingerprint_round_trip", "chart", chart_fingerprint_round_trip},
      {"chart.jacobian_rank", "chart", chart_jacobian_rank},
      {"chart.corner_affine", "chart", chart_corner_affine},
      {"chart.slice_solve", "chart", chart_slice_solve},
      {"sl2flows.group_law", "sl2flows", sl2_group_law},
      {"sl2flows.moment_preserved", "sl2flows", sl2_moment_preserved},
      {"sl2flows.non_sl2_control", "sl2flows", sl2_non_sl2_control},
      {"sl2flows.fixed_point_separation", "sl2flows", sl2_fixed_point_separation},
      {"sl2flows.trace_round_trip", "sl2flows", sl2_trace_round_trip},
      {"sl2flows.h_scaling", "sl2flows", sl2_h_scaling},
      {"sl2flows.independence_rank", "sl2flows", sl2_independence_rank},
      {"sl2flows.field_e", "sl2flows", sl2_field_e},
      {"sl2flows.field_f", "sl2flows", sl2_field_f},
      {"sl2flows.field_h", "sl2flows", sl2_field_h},
      {"sl2flows.slice_tangency", "sl2flows", sl2_slice_tangency},
      {"flowcalc.trotter_slope", "flowcalc", flow_trotter_slope},
      {"flowcalc.bracket_monotone", "flowcalc", flow_bracket_monotone},
      {"flowcalc.bracket_final_error", "flowcalc", flow_bracket_final},
      {"flowcalc.bracket_sign", "flowcalc", flow_bracket_sign},
      {"flowcalc.lnd_degrees", "flowcalc", flow_lnd_degrees},
      {"flowcalc.witness", "flowcalc", flow_witness},
  };
  return checks;
}

std::vector<std::string> suite_names() { return {"linalg", "variety", "canonical", "chart", "sl2flows", "flowcalc", "all"}; }

CheckRecord run_check(const std::string& name, const VerifyConfig& cfg) {
  for (const auto& spec : all_checks()) {
    if (spec.name != name) continue;
    const auto start = std::chrono::steady_clock::now();
    CheckRecord rec = spec.run(cfg);
    rec.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rec;
  }
  throw Error(Errc::InvalidArgument, "run_check", "unknown check '" + name + "'");
}

Report run_verify(const VerifyConfig& cfg) {
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), cfg.suite) == names.end()) {
    throw Error(Errc::InvalidArgument, "verify", "unknown suite '" + cfg.suite + "'");
  }
  if (cfg.n_min < 1 || cfg.n_max < cfg.n_min) throw Error(Errc::InvalidArgument, "verify", "bad n range");
  if (cfg.trials < 1) throw Error(Errc::InvalidArgument, "verify", "trials must be positive");
  if (!(cfg.tol > 0.0)) throw Error(Errc::InvalidArgument, "verify", "tol must be positive");
  if (cfg.tau == Cx(0.0, 0.0)) throw Error(Errc::InvalidArgument, "verify", "tau must be nonzero");
  Report rep;
  rep.config = cfg;
  for (const auto& spec : all_checks()) {
    if (cfg.suite == "all" || spec.suite == cfg.suite) rep.records.push_back(run_check(spec.name, cfg));
  }
  std::sort(rep.records.begin(), rep.records.end(),
            [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
  return rep;
}

std::pair<int, int> parse_n_range(const std::string& text) {
  auto parse_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw Error(Errc::InvalidArgument, "parse_n_range", "bad range '" + text + "'");
    return v;
  };
  const auto dots = text.find("..");
  int lo = 0, hi = 0;
  if (dots == std::string::npos) {
    lo = hi = parse_int(text);
  } else {
    lo = parse_int(text.substr(0, dots));
    hi = parse_int(text.substr(dots + 2));
  }
  if (lo < 1 || hi < lo) throw Error(Errc::InvalidArgument, "parse_n_range", "bad range '" + text + "'");
  return {lo, hi};
}

}  // namespace cmspace
