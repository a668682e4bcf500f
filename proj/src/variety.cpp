#include "cmspace/variety.hpp"

#include <algorithm>
#include <cmath>

#include "cmspace/errors.hpp"

namespace cmspace {

namespace {

Cx normal_cx(Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double re = nd(rng);
  const double im = nd(rng);
  return {re, im};
}

CMat random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal_cx(rng);
  }
  return m;
}

}  // namespace

void Representation::check_shapes(const char* op) const {
  const bool ok = n >= 1 && (k == 1 || k == 2) && A.rows() == n && A.cols() == n &&
                  B.rows() == n && B.cols() == n && v.rows() == n && v.cols() == k &&
                  w.rows() == k && w.cols() == n;
  if (!ok) throw Error(Errc::ShapeMismatch, op, "representation blocks inconsistent with (n, k)");
}

void AugmentedPair::check_shapes(const char* op) const {
  const bool ok = Ahat.rows() >= 2 && Ahat.rows() == Ahat.cols() && Bhat.rows() == Ahat.rows() &&
                  Bhat.cols() == Ahat.cols();
  if (!ok) throw Error(Errc::ShapeMismatch, op, "augmented pair must be two equal square matrices");
}

CMat GaugeElement::embedded() const {
  const auto n = g.rows();
  CMat e = CMat::Zero(n + 1, n + 1);
  e.topLeftCorner(n, n) = g;
  e(n, n) = 1.0;
  return e;
}

CMat moment_map(const Representation& r) {
  r.check_shapes("moment_map");
  return comm(r.A, r.B) - r.v * r.w;
}

CMat moment_real(const Representation& r) {
  r.check_shapes("moment_real");
  const CMat Ad = r.A.adjoint();
  const CMat Bd = r.B.adjoint();
  return comm(r.A, Ad) + comm(r.B, Bd) - r.v * r.v.adjoint() + r.w.adjoint() * r.w;
}

double on_shell_residual(const Representation& r) {
  return (moment_map(r) - r.tau * CMat::Identity(r.n, r.n)).norm();
}

double level_scale(const Representation& r) { return std::max(1.0, r.A.norm() * r.B.norm()); }

Representation gauge_act(const GaugeElement& g, const Representation& r, double tol) {
  r.check_shapes("gauge_act");
  if (g.g.rows() != r.n || g.g.cols() != r.n) throw Error(Errc::ShapeMismatch, "gauge_act", "");
  const CMat ginv = solve(g.g, CMat::Identity(r.n, r.n), tol);
  Representation out = r;
  out.A = g.g * r.A * ginv;
  out.B = g.g * r.B * ginv;
  out.v = g.g * r.v;
  out.w = r.w * ginv;
  return out;
}

AugmentedPair gauge_act(const GaugeElement& g, const AugmentedPair& p, double tol) {
  p.check_shapes("gauge_act");
  if (g.g.rows() != p.n()) throw Error(Errc::ShapeMismatch, "gauge_act", "");
  const CMat e = g.embedded();
  const CMat einv = solve(e, CMat::Identity(e.rows(), e.cols()), tol);
  return {e * p.Ahat * einv, e * p.Bhat * einv};
}

AugmentedPair augment(const Representation& r) {
  r.check_shapes("augment");
  if (r.k != 2) throw Error(Errc::InvalidArgument, "augment", "augmentation needs k = 2");
  const int n = r.n;
  AugmentedPair p{CMat::Zero(n + 1, n + 1), CMat::Zero(n + 1, n + 1)};
  p.Ahat.topLeftCorner(n, n) = r.A;
  p.Ahat.topRightCorner(n, 1) = r.v.col(0);
  p.Ahat.bottomLeftCorner(1, n) = r.w.row(1);
  p.Bhat.topLeftCorner(n, n) = r.B;
  p.Bhat.topRightCorner(n, 1) = r.v.col(1);
  p.Bhat.bottomLeftCorner(1, n) = -r.w.row(0);
  return p;
}

Representation project(const AugmentedPair& p, Cx tau, double tol) {
  p.check_shapes("project");
  const int n = p.n();
  const double scale = std::max(1.0, std::max(p.Ahat.norm(), p.Bhat.norm()));
  if (std::abs(p.corner_A()) > tol * scale || std::abs(p.corner_B()) > tol * scale) {
    throw Error(Errc::NonzeroCorner, "project", "corner entries must vanish");
  }
  Representation r;
  r.n = n;
  r.k = 2;
  r.tau = tau;
  r.A = p.Ahat.topLeftCorner(n, n);
  r.B = p.Bhat.topLeftCorner(n, n);
  r.v.resize(n, 2);
  r.v.col(0) = p.Ahat.topRightCorner(n, 1);
  r.v.col(1) = p.Bhat.topRightCorner(n, 1);
  r.w.resize(2, n);
  r.w.row(0) = -p.Bhat.bottomLeftCorner(1, n);
  r.w.row(1) = p.Ahat.bottomLeftCorner(1, n);
  return r;
}

double pair_scale(const AugmentedPair& p) { return std::max(1.0, p.Ahat.norm() * p.Bhat.norm()); }

double block_commutator_check(const AugmentedPair& p) {
  p.check_shapes("block_commutator_check");
  const int n = p.n();
  const CMat A = p.Ahat.topLeftCorner(n, n);
  const CMat B = p.Bhat.topLeftCorner(n, n);
  const CMat v1 = p.Ahat.topRightCorner(n, 1);
  const CMat v2 = p.Bhat.topRightCorner(n, 1);
  const CMat w2 = p.Ahat.bottomLeftCorner(1, n);
  const CMat w1 = -p.Bhat.bottomLeftCorner(1, n);
  const CMat c = comm(p.Ahat, p.Bhat);
  const CMat upper_left = A * B - B * A - v1 * w1 - v2 * w2;
  const CMat upper_right = A * v2 - B * v1;
  const CMat lower_left = w2 * B + w1 * A;
  return std::max({(c.topLeftCorner(n, n) - upper_left).norm(),
                   (c.topRightCorner(n, 1) - upper_right).norm(),
                   (c.bottomLeftCorner(1, n) - lower_left).norm()});
}

CMat moment_G(const AugmentedPair& p) {
  p.check_shapes("moment_G");
  return comm(p.Ahat, p.Bhat).topLeftCorner(p.n(), p.n());
}

CMat tau_hat(int n, Cx tau) {
  CMat t = CMat::Zero(n + 1, n + 1);
  Cx sum(0.0, 0.0);
  for (int i = 0; i < n; ++i) {
    t(i, i) = tau;
    sum += tau;
  }
  // Same summation order as trace(), so the trace is exactly zero.
  t(n, n) = -sum;
  return t;
}

bool eq4_predicate(const AugmentedPair& p, Cx tau, double tol) {
  p.check_shapes("eq4_predicate");
  const int n = p.n();
  const CMat d = comm(p.Ahat, p.Bhat) - tau_hat(n, tau);
  const double bound = tol * pair_scale(p);
  return d.topLeftCorner(n, n).norm() <= bound && std::abs(d(n, n)) <= bound;
}

std::pair<CMat, Cx> quiver_nu(const CMat& A, const CMat& B, const CMat& X1, const CMat& X2,
                              const CMat& Y1, const CMat& Y2) {
  const auto n = A.rows();
  const bool ok = A.cols() == n && B.rows() == n && B.cols() == n && X1.rows() == n &&
                  X2.rows() == n && X1.cols() == 1 && X2.cols() == 1 && Y1.rows() == 1 &&
                  Y2.rows() == 1 && Y1.cols() == n && Y2.cols() == n;
  if (!ok) throw Error(Errc::ShapeMismatch, "quiver_nu", "");
  CMat first = comm(A, B) + X1 * Y2 - X2 * Y1;
  const Cx second = (Y1 * X2)(0, 0) - (Y2 * X1)(0, 0);
  return {std::move(first), second};
}

std::string DictionaryVariant::name() const {
  auto sign = [](int s) { return s < 0 ? std::string("-") : std::string("+"); };
  const char* xa = swap_x ? "v2" : "v1";
  const char* xb = swap_x ? "v1" : "v2";
  const char* ya = swap_y ? "w2" : "w1";
  const char* yb = swap_y ? "w1" : "w2";
  return "X1=" + sign(sign_x1) + xa + ",X2=" + sign(sign_x2) + xb + ",Y1=" + ya + ",Y2=" + yb;
}

QuiverData apply_dictionary(const DictionaryVariant& d, const Representation& r) {
  r.check_shapes("apply_dictionary");
  if (r.k != 2) throw Error(Errc::InvalidArgument, "apply_dictionary", "needs k = 2");
  const int a = d.swap_x ? 1 : 0;
  const int c = d.swap_y ? 1 : 0;
  QuiverData q;
  q.X1 = static_cast<double>(d.sign_x1) * r.v.col(a);
  q.X2 = static_cast<double>(d.sign_x2) * r.v.col(1 - a);
  q.Y1 = r.w.row(c);
  q.Y2 = r.w.row(1 - c);
  return q;
}

CalibrationResult dictionary_calibrate(const std::vector<Representation>& points, double tol) {
  CalibrationResult result;
  for (int bits = 0; bits < 16; ++bits) {
    DictionaryVariant d{(bits & 1) ? 1 : -1, (bits & 2) ? -1 : 1, (bits & 4) != 0, (bits & 8) != 0};
    bool lands = !points.empty();
    for (const auto& r : points) {
      const QuiverData q = apply_dictionary(d, r);
      const auto [first, second] = quiver_nu(r.A, r.B, q.X1, q.X2, q.Y1, q.Y2);
      const double scale = std::max(level_scale(r), (r.v.norm() * r.w.norm()));
      const double res_first = (first - r.tau * CMat::Identity(r.n, r.n)).norm();
      const double res_second = std::abs(second + static_cast<double>(r.n) * r.tau);
      if (res_first > tol * scale || res_second > tol * scale) {
        lands = false;
        break;
      }
    }
    if (lands) {
      result.admissible.push_back(d);
      if (d == DictionaryVariant::literal()) result.literal_admissible = true;
    }
  }
  return result;
}

CalibrationResult dictionary_calibrate(const Representation& r, double tol) {
  return dictionary_calibrate(std::vector<Representation>{r}, tol);
}

Representation random_point(int n, int k, Cx tau, Rng& rng) {
  if (n < 1 || (k != 1 && k != 2)) throw Error(Errc::InvalidArgument, "random_point", "need n >= 1, k in {1,2}");
  if (tau == Cx(0.0, 0.0)) throw Error(Errc::InvalidArgument, "random_point", "tau must be nonzero");
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);

  Representation r;
  r.n = n;
  r.k = k;
  r.tau = tau;

  // Real parts are spaced one apart; jitter keeps every gap above 0.5.
  CVec lambda(n);
  for (int i = 0; i < n; ++i) {
    const double re = static_cast<double>(i) - 0.5 * static_cast<double>(n - 1) + jitter(rng);
    const double im = jitter(rng);
    lambda(i) = Cx(re, im);
  }
  r.A = lambda.asDiagonal();

  constexpr int kMaxRowRetries = 64;
  r.v.resize(n, k);
  for (int i = 0; i < n; ++i) {
    int attempt = 0;
    do {
      if (attempt++ == kMaxRowRetries) {
        throw Error(Errc::InfeasibleRow, "random_point", "could not draw a nonzero row of v");
      }
      for (int j = 0; j < k; ++j) r.v(i, j) = normal_cx(rng);
    } while (r.v.row(i).norm() < 1e-3);
  }

  // Column i of w solves v_i · w_i = −τ: least-norm part plus a kernel offset.
  r.w.resize(k, n);
  for (int i = 0; i < n; ++i) {
    const Eigen::RowVectorXcd row = r.v.row(i);
    CVec col = -tau * row.adjoint() / row.squaredNorm();
    if (k == 2) {
      CVec kernel(2);
      kernel << -row(1), row(0);
      col += normal_cx(rng) * kernel / row.norm();
    }
    r.w.col(i) = col;
  }

  const CMat vw = r.v * r.w;
  r.B.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      r.B(i, j) = (i == j) ? normal_cx(rng) : vw(i, j) / (lambda(i) - lambda(j));
    }
  }
  return r;
}

Representation random_point(int n, int k, Cx tau, std::uint64_t seed) {
  Rng rng(seed);
  return random_point(n, k, tau, rng);
}

GaugeElement random_gauge(int n, Rng& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    CMat g = CMat::Identity(n, n) + 0.5 / std::sqrt(static_cast<double>(n)) * random_matrix(n, n, rng);
    const Eigen::VectorXd sv = singular_values(g);
    if (sv(sv.size() - 1) > 0.0 && sv(0) / sv(sv.size() - 1) < 1e2) return {g};
  }
  throw Error(Errc::SearchExhausted, "random_gauge", "no well-conditioned draw");
}

namespace {

// Depth-first walk over prenecklaces (Fredricksen–Kessler–Maiorana order).
// Each prenecklace of length t with period p dividing t is a necklace, i.e.
// the lexicographically least rotation of its class; exactly those are kept.
struct NecklaceWalk {
  const std::vector<CMat>& letters;
  const std::vector<double>& norms;
  const std::string& alphabet;
  int max_len;
  std::vector<int> word;
  std::vector<CMat> prefix;
  std::vector<double> prefix_scale;
  Fingerprint out;

  void push(int letter) {
    const std::size_t t = word.size();
    word.push_back(letter);
    const auto ul = static_cast<std::size_t>(letter);
    if (t == 0) {
      prefix[0] = letters[ul];
      prefix_scale[0] = norms[ul];
    } else {
      prefix[t] = prefix[t - 1] * letters[ul];
      prefix_scale[t] = prefix_scale[t - 1] * norms[ul];
    }
  }

  void visit(int period) {
    const int t = static_cast<int>(word.size());
    if (t % period == 0) {
      const auto ut = static_cast<std::size_t>(t - 1);
      out.values.push_back(prefix[ut].trace());
      out.scales.push_back(prefix_scale[ut]);
      std::string name;
      for (int c : word) name.push_back(alphabet[static_cast<std::size_t>(c)]);
      out.words.push_back(std::move(name));
    }
    if (t == max_len) return;
    const int base = word[static_cast<std::size_t>(t - period)];
    push(base);
    visit(period);
    word.pop_back();
    for (int c = base + 1; c < static_cast<int>(letters.size()); ++c) {
      push(c);
      visit(t + 1);
      word.pop_back();
    }
  }
};

}  // namespace

Fingerprint fingerprint(const std::vector<CMat>& letters, const std::string& alphabet, int max_len) {
  if (letters.empty() || alphabet.size() != letters.size() || max_len < 1) {
    throw Error(Errc::InvalidArgument, "fingerprint", "alphabet and letters must match");
  }
  std::vector<double> norms;
  for (const auto& m : letters) {
    if (m.rows() != m.cols() || m.rows() != letters.front().rows()) {
      throw Error(Errc::ShapeMismatch, "fingerprint", "letters must be square and equal size");
    }
    norms.push_back(m.norm());
  }
  const auto len = static_cast<std::size_t>(max_len);
  NecklaceWalk walk{letters, norms, alphabet, max_len, {}, std::vector<CMat>(len), std::vector<double>(len), {}};
  walk.word.reserve(len);
  for (int c = 0; c < static_cast<int>(letters.size()); ++c) {
    walk.push(c);
    walk.visit(1);
    walk.word.pop_back();
  }
  return std::move(walk.out);
}

Fingerprint fingerprint(const Representation& r, int max_len) {
  r.check_shapes("fingerprint");
  return fingerprint({r.A, r.B, r.v * r.w}, "ABC", max_len > 0 ? max_len : 2 * r.n);
}

Fingerprint fingerprint(const AugmentedPair& p, int max_len) {
  p.check_shapes("fingerprint");
  return fingerprint({p.Ahat, p.Bhat}, "AB", max_len > 0 ? max_len : 2 * (p.n() + 1));
}

double fingerprint_distance(const Fingerprint& a, const Fingerprint& b) {
  if (a.values.size() != b.values.size()) {
    throw Error(Errc::ShapeMismatch, "fingerprint_distance", "fingerprints of different word sets");
  }
  double dist = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double scale = std::max(a.scales[i], b.scales[i]);
    const double diff = std::abs(a.values[i] - b.values[i]);
    if (diff == 0.0) continue;
    dist = std::max(dist, scale > 0.0 ? diff / scale : std::numeric_limits<double>::infinity());
  }
  return dist;
}

}  // namespace cmspace
