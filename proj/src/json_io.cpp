#include "cmspace/json_io.hpp"

#include <cmath>
#include <string>

#include "cmspace/errors.hpp"

namespace cmspace {

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(Errc::InvalidArgument, "json", what);
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field '") + key + "'");
  return j.at(key);
}

int int_field(const json& j, const char* key) {
  const json& f = field(j, key);
  if (!f.is_number_integer()) malformed(std::string("field '") + key + "' must be an integer");
  return f.get<int>();
}

void expect_shape(const CMat& m, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    malformed(std::string("field '") + name + "' has shape " + std::to_string(m.rows()) + "x" +
              std::to_string(m.cols()));
  }
}

}  // namespace

json to_json(Cx z) { return json::array({z.real(), z.imag()}); }

json to_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const CVec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Cx cx_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    malformed("complex scalars are [re, im]");
  }
  const Cx z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) malformed("non-finite entry");
  return z;
}

CMat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) malformed("matrices are arrays of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) malformed("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = cx_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

CVec vector_from_json(const json& j) {
  if (!j.is_array()) malformed("vectors are arrays of [re, im]");
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = cx_from_json(j[i]);
  return v;
}

json to_json(const Representation& r) {
  return json{{"n", r.n}, {"k", r.k}, {"tau", to_json(r.tau)}, {"A", to_json(r.A)},
              {"B", to_json(r.B)}, {"v", to_json(r.v)}, {"w", to_json(r.w)}};
}

Representation representation_from_json(const json& j) {
  Representation r;
  r.n = int_field(j, "n");
  r.k = int_field(j, "k");
  if (r.n < 1 || (r.k != 1 && r.k != 2)) malformed("need n >= 1 and k in {1, 2}");
  r.tau = cx_from_json(field(j, "tau"));
  r.A = mat_from_json(field(j, "A"));
  r.B = mat_from_json(field(j, "B"));
  r.v = mat_from_json(field(j, "v"));
  r.w = mat_from_json(field(j, "w"));
  expect_shape(r.A, r.n, r.n, "A");
  expect_shape(r.B, r.n, r.n, "B");
  expect_shape(r.v, r.n, r.k, "v");
  expect_shape(r.w, r.k, r.n, "w");
  return r;
}

json to_json(const AugmentedPair& p) {
  return json{{"n", p.n()}, {"Ahat", to_json(p.Ahat)}, {"Bhat", to_json(p.Bhat)}};
}

AugmentedPair pair_from_json(const json& j) {
  const int n = int_field(j, "n");
  if (n < 1) malformed("need n >= 1");
  AugmentedPair p{mat_from_json(field(j, "Ahat")), mat_from_json(field(j, "Bhat"))};
  expect_shape(p.Ahat, n + 1, n + 1, "Ahat");
  expect_shape(p.Bhat, n + 1, n + 1, "Bhat");
  return p;
}

json to_json(const ChartPoint& c) {
  return json{{"n", c.n()},
              {"tau", to_json(c.tau)},
              {"lambda", vector_to_json(c.lambda)},
              {"lambdahat", vector_to_json(c.lambdahat)},
              {"mu", vector_to_json(c.mu)},
              {"muhat", vector_to_json(c.muhat)}};
}

ChartPoint chart_from_json(const json& j) {
  const int n = int_field(j, "n");
  ChartPoint c;
  c.tau = cx_from_json(field(j, "tau"));
  c.lambda = vector_from_json(field(j, "lambda"));
  c.lambdahat = vector_from_json(field(j, "lambdahat"));
  c.mu = vector_from_json(field(j, "mu"));
  c.muhat = vector_from_json(field(j, "muhat"));
  if (n < 1 || c.lambda.size() != n || c.lambdahat.size() != n + 1 || c.mu.size() != n ||
      c.muhat.size() != n + 1) {
    malformed("chart point sizes must be (n, n+1, n, n+1)");
  }
  return c;
}

json to_json(const RegularityReport& r) {
  return json{{"is_regular_semisimple_A", r.is_regular_semisimple_A},
              {"is_regular_semisimple_Ahat", r.is_regular_semisimple_Ahat},
              {"in_g0hat", r.in_g0hat},
              {"g_regular", r.g_regular},
              {"orbit_dim", r.orbit_dim},
              {"min_gap", r.min_gap},
              {"is_strongly_semisimple", r.is_strongly_semisimple()}};
}

}  // namespace cmspace
