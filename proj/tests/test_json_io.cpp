#include <doctest.h>

#include "cmspace/errors.hpp"
#include "cmspace/json_io.hpp"

using namespace cmspace;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::ShapeMismatch;  // not reached in these tests
}

}  // namespace

TEST_CASE("representations survive a text round trip bit for bit") {
  const Representation r = random_point(3, 2, Cx(0.3, -1.2), 4);
  const Representation back = representation_from_json(json::parse(to_json(r).dump()));
  CHECK(back.n == 3);
  CHECK(back.k == 2);
  CHECK(back.tau == r.tau);
  CHECK(back.A == r.A);
  CHECK(back.B == r.B);
  CHECK(back.v == r.v);
  CHECK(back.w == r.w);
}

TEST_CASE("pairs and chart points round trip") {
  const AugmentedPair p = augment(random_point(2, 2, Cx(1.0, 0.0), 5));
  const AugmentedPair q = pair_from_json(json::parse(to_json(p).dump()));
  CHECK(q.Ahat == p.Ahat);
  CHECK(q.Bhat == p.Bhat);

  const ChartPoint c = to_chart(p);
  const ChartPoint d = chart_from_json(json::parse(to_json(c).dump()));
  CHECK(d.lambda == c.lambda);
  CHECK(d.lambdahat == c.lambdahat);
  CHECK(d.mu == c.mu);
  CHECK(d.muhat == c.muhat);
  CHECK(d.tau == c.tau);
}

TEST_CASE("complex and matrix layout") {
  CHECK(to_json(Cx(1.5, -2.0)) == json::parse("[1.5, -2.0]"));
  CMat m(1, 2);
  m << Cx(1.0, 0.0), Cx(0.0, 1.0);
  CHECK(to_json(m) == json::parse("[[[1.0, 0.0], [0.0, 1.0]]]"));
}

TEST_CASE("malformed documents") {
  CHECK(code_of([] { cx_from_json(json::parse("[1]")); }) == Errc::InvalidArgument);
  CHECK(code_of([] { cx_from_json(json::parse("[\"a\", 1]")); }) == Errc::InvalidArgument);
  CHECK(code_of([] { mat_from_json(json::parse("[[[1,0]], [[1,0],[2,0]]]")); }) == Errc::InvalidArgument);
  CHECK(code_of([] { mat_from_json(json::parse("[]")); }) == Errc::InvalidArgument);
  CHECK(code_of([] { vector_from_json(json::parse("{}")); }) == Errc::InvalidArgument);

  json r = to_json(random_point(2, 2, Cx(1.0, 0.0), 1));
  json missing = r;
  missing.erase("B");
  CHECK(code_of([&] { representation_from_json(missing); }) == Errc::InvalidArgument);
  json wrong = r;
  wrong["n"] = 3;
  CHECK(code_of([&] { representation_from_json(wrong); }) == Errc::InvalidArgument);
  json frac = r;
  frac["n"] = 2.5;
  CHECK(code_of([&] { representation_from_json(frac); }) == Errc::InvalidArgument);

  json c = to_json(to_chart(augment(random_point(2, 2, Cx(1.0, 0.0), 1))));
  c["muhat"].erase(0);
  CHECK(code_of([&] { chart_from_json(c); }) == Errc::InvalidArgument);
  CHECK(code_of([] { pair_from_json(json::parse("[1, 2]")); }) == Errc::InvalidArgument);
}

TEST_CASE("regularity report fields") {
  const json j = to_json(regularity(augment(random_point(2, 2, Cx(1.0, 0.0), 3))));
  CHECK(j.at("is_strongly_semisimple").get<bool>());
  CHECK(j.at("orbit_dim").get<int>() == 4);
}
