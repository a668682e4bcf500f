// cmspace: generate points, normalize, convert to and from chart
// coordinates, apply SL2 flows and run verification suites.
//
// Exit codes: 0 ok, 1 a check failed, 2 malformed input, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "cmspace/canonical.hpp"
#include "cmspace/chart.hpp"
#include "cmspace/errors.hpp"
#include "cmspace/flowcalc.hpp"
#include "cmspace/json_io.hpp"
#include "cmspace/sl2flows.hpp"
#include "cmspace/verify.hpp"

using namespace cmspace;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitMalformed = 2;
constexpr int kExitNumerical = 3;

struct Malformed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  int n = 3;
  int k = 2;
  std::string tau = "1,0";
  std::uint64_t seed = 0;
  std::optional<double> tol;
  int trials = 50;
  std::string suite = "all";
  std::string n_range = "1..4";
  std::string in;
  std::string out;
  bool invert = false;
  std::string generator = "e";
  double t = 0.1;
};

Cx parse_tau(const std::string& text) {
  std::stringstream ss(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(ss >> re)) throw Malformed("--tau expects re,im");
  if (ss >> comma) {
    if (comma != ',' || !(ss >> im)) throw Malformed("--tau expects re,im");
  }
  std::string rest;
  if (ss >> rest) throw Malformed("--tau expects re,im");
  return {re, im};
}

double resolve_tol(const Options& o) {
  if (o.tol) {
    if (!(*o.tol > 0.0)) throw Malformed("--tol must be positive");
    return *o.tol;
  }
  if (const char* env = std::getenv("CM_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) throw Malformed("CM_TOL must be a positive number");
    return v;
  }
  return kDefaultTol;
}

json read_input(const Options& o) {
  std::string text;
  if (o.in.empty() || o.in == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream f(o.in);
    if (!f) throw Malformed("cannot open " + o.in);
    text.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Malformed(std::string("input is not JSON: ") + e.what());
  }
}

// Accepts an augmented pair or a k = 2 representation.
AugmentedPair read_pair(const json& j) {
  if (j.is_object() && j.contains("Ahat")) return pair_from_json(j);
  const Representation r = representation_from_json(j);
  if (r.k != 2) throw Malformed("augmentation needs k = 2");
  return augment(r);
}

void emit(const Options& o, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw Malformed("cannot write " + o.out);
  f << text;
}

int cmd_gen(const Options& o) {
  if (o.n < 1) throw Malformed("--n must be positive");
  if (o.k != 1 && o.k != 2) throw Malformed("--k must be 1 or 2");
  const Cx tau = parse_tau(o.tau);
  if (tau == Cx(0.0, 0.0)) throw Malformed("--tau must be nonzero");
  const Representation r = random_point(o.n, o.k, tau, o.seed);
  emit(o, to_json(r));
  std::cerr << "gen: n=" << o.n << " k=" << o.k << " level residual " << on_shell_residual(r) << "\n";
  return kExitOk;
}

int cmd_normalize(const Options& o) {
  const double tol = resolve_tol(o);
  const AugmentedPair p = read_pair(read_input(o));
  const NormalizedPair np = normalize(p, tol);
  json j = to_json(np.pair);
  j["gauge"] = to_json(np.gauge.g);
  j["regularity"] = to_json(regularity(np.pair, tol));
  emit(o, j);
  std::cerr << "normalize: n=" << p.n() << "\n";
  return kExitOk;
}

int cmd_chart(const Options& o) {
  const double tol = resolve_tol(o);
  const json in = read_input(o);
  if (o.invert) {
    const ChartPoint c = chart_from_json(in);
    const AugmentedPair p = from_chart(c, tol);
    emit(o, to_json(p));
    std::cerr << "chart --invert: n=" << c.n() << "\n";
    return kExitOk;
  }
  const AugmentedPair p = read_pair(in);
  const ChartPoint c = to_chart(p, tol);
  emit(o, to_json(c));
  std::cerr << "chart: n=" << c.n() << "\n";
  return kExitOk;
}

SL2Generator parse_generator(const std::string& g) {
  if (g == "e") return {Sl2Kind::E, 1.0};
  if (g == "f") return {Sl2Kind::F, 1.0};
  if (g == "h") return {Sl2Kind::H, 1.0};
  throw Malformed("--generator must be e, f or h");
}

int cmd_flow(const Options& o) {
  const double tol = resolve_tol(o);
  const SL2Generator gen = parse_generator(o.generator);
  const Cx tau = parse_tau(o.tau);
  if (tau == Cx(0.0, 0.0)) throw Malformed("--tau must be nonzero");
  if (o.n < 1) throw Malformed("--n must be positive");
  const Representation r = random_point(o.n, 2, tau, o.seed);
  const ChartPoint before = to_chart(augment(r), tol);
  const FlowSpec spec{gen, o.t};
  const ChartPoint after = flow_exact(spec, before, tol);
  const Representation moved = flow_exact(spec, r);
  const AugmentedPair after_pair = from_chart(after, tol);
  const json j{{"generator", o.generator},
               {"t", o.t},
               {"before", to_json(before)},
               {"after", to_json(after)},
               {"residuals",
                {{"level_set", on_shell_residual(moved) / level_scale(moved)},
                 {"after_on_level", eq4_predicate(after_pair, tau, tol)}}}};
  emit(o, j);
  std::cerr << "flow: generator " << o.generator << " for t=" << o.t << "\n";
  return kExitOk;
}

int cmd_verify(const Options& o) {
  VerifyConfig cfg;
  cfg.suite = o.suite;
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), cfg.suite) == names.end()) throw Malformed("unknown suite " + o.suite);
  try {
    const auto [lo, hi] = parse_n_range(o.n_range);
    cfg.n_min = lo;
    cfg.n_max = hi;
  } catch (const Error& e) {
    throw Malformed(e.what());
  }
  if (o.trials < 1) throw Malformed("--trials must be positive");
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.tol = resolve_tol(o);
  cfg.tau = parse_tau(o.tau);
  if (cfg.tau == Cx(0.0, 0.0)) throw Malformed("--tau must be nonzero");
  const Report rep = run_verify(cfg);
  emit(o, rep.to_json());
  for (const auto& r : rep.records) {
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << "  residual " << r.residual << " (threshold "
              << r.threshold << ")\n";
  }
  std::cerr << rep.passed() << "/" << rep.records.size() << " checks passed\n";
  return rep.all_passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Calogero-Moser spaces: points, charts, flows and checks"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Write JSON here instead of stdout");
    sub->add_option("--tol", o.tol, "Tolerance (default: CM_TOL or 1e-9)");
  };

  CLI::App* gen = app.add_subcommand("gen", "Random point on the level set");
  gen->add_option("--n", o.n, "Size n");
  gen->add_option("--k", o.k, "Rank k (1 or 2)");
  gen->add_option("--tau", o.tau, "tau as re,im");
  gen->add_option("--seed", o.seed, "RNG seed")->required();
  add_common(gen);

  CLI::App* norm = app.add_subcommand("normalize", "Put Ahat into normal form");
  norm->add_option("--in", o.in, "Input JSON (default stdin)");
  add_common(norm);

  CLI::App* chart = app.add_subcommand("chart", "Chart coordinates of a pair, or the pair of a chart point");
  chart->add_option("--in", o.in, "Input JSON (default stdin)");
  chart->add_flag("--invert", o.invert, "Chart point to pair");
  add_common(chart);

  CLI::App* flow = app.add_subcommand("flow", "Apply an SL2 flow to a seeded point");
  flow->add_option("--generator", o.generator, "e, f or h");
  flow->add_option("--t", o.t, "Flow time");
  flow->add_option("--n", o.n, "Size n");
  flow->add_option("--tau", o.tau, "tau as re,im");
  flow->add_option("--seed", o.seed, "RNG seed")->required();
  add_common(flow);

  CLI::App* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("--suite", o.suite, "linalg, variety, canonical, chart, sl2flows, flowcalc or all");
  verify->add_option("--n", o.n_range, "Size range a..b");
  verify->add_option("--trials", o.trials, "Trials per size");
  verify->add_option("--seed", o.seed, "RNG seed");
  verify->add_option("--tau", o.tau, "tau as re,im");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitMalformed;
  }

  try {
    if (*gen) return cmd_gen(o);
    if (*norm) return cmd_normalize(o);
    if (*chart) return cmd_chart(o);
    if (*flow) return cmd_flow(o);
    if (*verify) return cmd_verify(o);
  } catch (const Malformed& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const bool input = e.code() == Errc::InvalidArgument || e.code() == Errc::ShapeMismatch;
    return input ? kExitMalformed : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitMalformed;
}
