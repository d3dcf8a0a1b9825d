#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cylhypo/cli/commands.hpp"
#include "cylhypo/cli/config.hpp"
#include "cylhypo/cli/report.hpp"
#include "cylhypo/cli/svg.hpp"

using namespace cylhypo;
using namespace cylhypo::cli;

namespace fs = std::filesystem;

namespace {
const std::string kTube = R"(
operator:
  kind: tube
  b: [{n: 0, re: 1}, {n: 1, re: 0.5}, {n: -1, re: 0.5}]
  q: [{n: 0, im: 0.3}]
)";

std::vector<std::string> problems_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

bool mentions(const std::vector<std::string>& ps, const std::string& s) {
  for (const auto& p : ps)
    if (p.find(s) != std::string::npos) return true;
  return false;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("cylhypo_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}
}  // namespace

TEST_CASE("minimal tube config fills defaults") {
  auto cfg = parse_config_text(kTube);
  REQUIRE(cfg.op);
  const auto* t = std::get_if<TubeT>(&*cfg.op);
  REQUIRE(t);
  CHECK(t->a.is_zero());
  CHECK(average(t->b) == cplx(1.0));
  CHECK(std::abs(t->b(0.0) - 2.0) < 1e-15);
  CHECK(average(t->q) == cplx(0, 0.3));
  CHECK(cfg.operator_kind == "tube");
  CHECK(cfg.grid == CylinderGrid{});
  CHECK(cfg.budgets.k_budget == 64);
  CHECK(cfg.tol.int_tol == kIntTol);
  CHECK(cfg.output.dir == "out");
  CHECK(cfg.output.json);
  CHECK(cfg.counterexample.kind == "auto");
  CHECK(cfg.seed == 1u);
}

TEST_CASE("shipped configs parse") {
  for (const auto& e : fs::directory_iterator(fs::path(CYLHYPO_SOURCE_DIR) / "configs")) {
    INFO(e.path().string());
    CHECK_NOTHROW(parse_config(e.path().string()));
  }
}

TEST_CASE("k_budget = 0 is rejected") {
  auto ps = problems_of(kTube + "budgets: {k_budget: 0}\n");
  CHECK(mentions(ps, "budgets.k_budget"));
}

TEST_CASE("unknown operator kind names the valid kinds") {
  try {
    parse_config_text("operator: {kind: heat}\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.kind() == ErrorKind::Usage);
    const std::string msg = e.what();
    CHECK(msg.find("heat") != std::string::npos);
    for (const auto& k : kOperatorKinds) CHECK(msg.find(k) != std::string::npos);
  }
}

TEST_CASE("every problem is reported at once") {
  auto ps = problems_of(
      "operator: {kind: first_order_t, c1: [1, 0], c2: x}\n"
      "grid: {M: 48, N: 100, X: -1}\n"
      "budgets: {k_budget: 0}\n"
      "tolerances: {int_tol: 0}\n"
      "colour: blue\n");
  CHECK(ps.size() >= 6);
  CHECK(mentions(ps, "grid.M"));
  CHECK(mentions(ps, "grid.N"));
  CHECK(mentions(ps, "grid.X"));
  CHECK(mentions(ps, "operator.c3"));
  CHECK(mentions(ps, "colour"));
  CHECK(mentions(ps, "tolerances.int_tol"));
}

TEST_CASE("malformed records") {
  CHECK(mentions(problems_of("operator: {kind: tube, b: [{n: 1, re: 1}]}\n"), "real-valued"));
  CHECK(mentions(problems_of("operator: {kind: const_split, p: [[1, 0, 2]], q: [[0, 0]]}\n"), "operator.p"));
  CHECK(mentions(problems_of("operator: {kind: tube, q: [{re: 1}]}\n"), "'n'"));
  CHECK(mentions(problems_of("operator: [\n"), "<string>"));
  CHECK(mentions(problems_of(kTube + "input: {function: nope}\n"), "input.function"));
}

TEST_CASE("scalar polynomial coefficients") {
  auto cfg = parse_config_text("operator: {kind: const_split, p: [1, 2], q: [[0, 1]]}\n");
  const auto& cs = std::get<ConstSplit>(*cfg.op);
  CHECK(cs.p.degree() == 1);
  CHECK(cs.p.coeff(1) == cplx(2.0));
  CHECK(cs.q.coeff(0) == cplx(0, 1));
}

TEST_CASE("overrides") {
  auto cfg = parse_config_text(kTube);
  Overrides o;
  o.out = "elsewhere";
  o.formats = "csv,svg";
  o.k_budget = 7;
  o.grid = "32x128";
  o.x_halfwidth = 9.5;
  o.seed = 42;
  apply_overrides(cfg, o);
  CHECK(cfg.output.dir == "elsewhere");
  CHECK_FALSE(cfg.output.json);
  CHECK(cfg.output.svg);
  CHECK(cfg.budgets.k_budget == 7);
  CHECK(cfg.grid == CylinderGrid{32, 128, 9.5});
  CHECK(cfg.seed == 42u);

  Overrides bad;
  bad.grid = "32by128";
  CHECK_THROWS_AS(apply_overrides(cfg, bad), ConfigError);
  Overrides odd;
  odd.grid = "30x128";
  CHECK_THROWS_AS(apply_overrides(cfg, odd), ConfigError);
  Overrides fmt;
  fmt.formats = "pdf";
  CHECK_THROWS_AS(apply_overrides(cfg, fmt), ConfigError);
}

TEST_CASE("classify on a sign-changing tube") {
  auto cfg = parse_config_text("operator: {kind: tube, b: [{n: 1, re: 0.5}, {n: -1, re: 0.5}], q: [{n: 0, im: 0.3}]}\n");
  auto out = run_command("classify", cfg);
  CHECK(out.ok);
  CHECK(out.body["verdict"] == "NotGH");
  CHECK(out.body["mu_validity"] == "(1,inf)");
  CHECK(out.body["notion"] == "F_mu");
  CHECK_FALSE(out.body["theorem"].get<std::string>().empty());
}

TEST_CASE("solve on a vanishing symbol refuses with the witness") {
  auto cfg = parse_config_text("operator: {kind: first_order_t, c1: [1, 1], c2: [1, 0], c3: [1, 0]}\ngrid: {M: 32, N: 128}\n");
  try {
    run_command("solve", cfg);
    FAIL("expected a refusal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Refusal);
    auto j = to_json(e);
    CHECK(j["error"]["kind"] == "refusal");
    CHECK(j["error"]["details"]["k"] == -1.0);
    CHECK(j["error"]["details"]["xi"].get<double>() == doctest::Approx(1.0));
  }
}

TEST_CASE("verify-lemmas passes") {
  RunConfig cfg;
  auto out = run_command("verify-lemmas", cfg);
  CHECK(out.ok);
  CHECK(out.body["summary"]["all_pass"] == true);
  CHECK(out.body["lemmas"].size() == 8);
}

TEST_CASE("commands needing an operator") {
  RunConfig cfg;
  for (const char* c : {"classify", "zeros", "solve", "counterexample", "reduce"}) {
    try {
      run_command(c, cfg);
      FAIL("expected missing_operator");
    } catch (const Error& e) {
      CHECK(e.code() == "missing_operator");
      CHECK(e.kind() == ErrorKind::Usage);
    }
  }
  CHECK_THROWS_AS(run_command("bogus", cfg), Error);
}

TEST_CASE("reports are deterministic") {
  auto cfg = parse_config_text(kTube + "grid: {M: 32, N: 128, X: 10}\n");
  for (const char* c : {"classify", "solve", "spectrum", "fit-decay"}) {
    auto a = run_command(c, cfg), b = run_command(c, cfg);
    CHECK(dump(a.body) == dump(b.body));
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i) CHECK(a.files[i] == b.files[i]);
  }
}

TEST_CASE("JSON numbers") {
  CHECK(num(std::nan("")).is_null());
  CHECK(num(INFINITY).is_null());
  CHECK(num(0.1).get<double>() == 0.1);
  const double v = 0.1 + 0.2;
  CHECK(json::parse(dump(json{{"v", v}}))["v"].get<double>() == v);
  CHECK(fmt17(0.1) == "0.10000000000000001");
}

TEST_CASE("grid CSV round trip is bit exact") {
  CylinderGrid g{8, 16, 3.0};
  auto f = test_function("gaussian_cos", g);
  for (auto& v : f.values) v *= cplx(1.0 / 3.0, 1e-7);
  const auto dir = scratch("csv");
  const auto path = dir / "f.csv";
  write_atomic(path, csv_grid(f));
  auto back = read_grid_csv(path.string(), g);
  CHECK(back.values == f.values);
  CHECK_THROWS_AS(read_grid_csv(path.string(), CylinderGrid{8, 32, 3.0}), Error);
  CHECK_THROWS_AS(read_grid_csv((dir / "absent.csv").string(), g), Error);
}

TEST_CASE("built-in inputs") {
  CylinderGrid g{64, 512, 12.0};
  for (const auto& name : kInputFunctions) {
    auto f = test_function(name, g);
    CHECK(max_abs(f.values) > 0.1);
    CHECK_FALSE(membership_report(f, 1.0, 0.5).truncation_warning);
  }
  CHECK_THROWS_AS(test_function("nope", g), Error);
}

TEST_CASE("atomic writes leave no temporaries") {
  const auto dir = scratch("atomic");
  write_atomic(dir / "a.json", "one\n");
  write_atomic(dir / "a.json", "two\n");
  std::ifstream in(dir / "a.json");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "two\n");
  int n = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++n;
  CHECK(n == 1);
}

TEST_CASE("svg charts") {
  auto s = line_chart({"t", "x", "y", false, true}, {{"a", {{1, 1}, {2, 0.1}, {3, 0.0}}, false}, {"b", {{1, 0.5}}, true}});
  CHECK(s.rfind("<svg", 0) == 0);
  CHECK(s.find("</svg>") != std::string::npos);
  CHECK(s.find("stroke-dasharray") != std::string::npos);
  CHECK(s.find("nan") == std::string::npos);
}
