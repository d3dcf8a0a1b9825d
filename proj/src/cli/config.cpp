#include "cylhypo/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace cylhypo::cli {

namespace {

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

bool power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

/// Collects problems instead of stopping at the first one.
struct Reader {
  std::vector<std::string> problems;

  template <class T>
  std::optional<T> get(const YAML::Node& node, const std::string& key, const std::string& where) {
    const auto v = node[key];
    if (!v) return std::nullopt;
    try {
      return v.as<T>();
    } catch (const YAML::Exception&) {
      problems.push_back(where + "." + key + ": malformed value '" + YAML::Dump(v) + "'");
      return std::nullopt;
    }
  }

  template <class T>
  void set(const YAML::Node& node, const std::string& key, const std::string& where, T& target) {
    if (auto v = get<T>(node, key, where)) target = *v;
  }

  void known_keys(const YAML::Node& node, const std::string& where, std::set<std::string> keys) {
    if (!node.IsMap()) {
      problems.push_back(where + ": expected a mapping");
      return;
    }
    for (const auto& kv : node) {
      const auto k = kv.first.as<std::string>();
      if (!keys.count(k)) problems.push_back(where + ": unknown key '" + k + "'");
    }
  }

  std::optional<cplx> complex_pair(const YAML::Node& n, const std::string& where) {
    try {
      if (n.IsSequence() && n.size() == 2) return cplx(n[0].as<double>(), n[1].as<double>());
      if (n.IsScalar()) return cplx(n.as<double>(), 0.0);
    } catch (const YAML::Exception&) {
    }
    problems.push_back(where + ": expected a number or [re, im], got '" + YAML::Dump(n) + "'");
    return std::nullopt;
  }

  ComplexPolynomial polynomial(const YAML::Node& node, const std::string& where) {
    std::vector<cplx> c;
    if (!node) {
      problems.push_back(where + ": missing");
      return {};
    }
    if (!node.IsSequence()) {
      problems.push_back(where + ": expected an array of [re, im] pairs");
      return {};
    }
    for (std::size_t i = 0; i < node.size(); ++i) {
      auto z = complex_pair(node[i], where + "[" + std::to_string(i) + "]");
      c.push_back(z.value_or(cplx{}));
    }
    return ComplexPolynomial(c);
  }

  TrigPolynomial trig(const YAML::Node& node, const std::string& where) {
    std::map<int, cplx> c;
    if (!node) return {};
    if (!node.IsSequence()) {
      problems.push_back(where + ": expected an array of {n, re, im} records");
      return {};
    }
    for (std::size_t i = 0; i < node.size(); ++i) {
      const auto rec = node[i];
      const std::string w = where + "[" + std::to_string(i) + "]";
      if (!rec.IsMap()) {
        problems.push_back(w + ": expected {n, re, im}");
        continue;
      }
      known_keys(rec, w, {"n", "re", "im"});
      auto n = get<int>(rec, "n", w);
      if (!n) {
        if (!rec["n"]) problems.push_back(w + ": missing 'n'");
        continue;
      }
      const double re = get<double>(rec, "re", w).value_or(0.0);
      const double im = get<double>(rec, "im", w).value_or(0.0);
      c[*n] += cplx(re, im);
    }
    return TrigPolynomial(c);
  }
};

void parse_operator(Reader& rd, const YAML::Node& node, RunConfig& cfg) {
  const std::string w = "operator";
  if (!node.IsMap()) {
    rd.problems.push_back("operator: expected a mapping");
    return;
  }
  auto kind = rd.get<std::string>(node, "kind", w);
  if (!kind) {
    if (!node["kind"]) rd.problems.push_back("operator.kind: missing (valid kinds: " + join(kOperatorKinds, ", ") + ")");
    return;
  }
  cfg.operator_kind = *kind;
  if (*kind == "const_split") {
    rd.known_keys(node, w, {"kind", "p", "q"});
    ConstSplit op{rd.polynomial(node["p"], "operator.p"), rd.polynomial(node["q"], "operator.q")};
    cfg.op = op;
  } else if (*kind == "first_order_t") {
    rd.known_keys(node, w, {"kind", "c1", "c2", "c3"});
    FirstOrderT op{};
    for (auto [key, dst] : {std::pair{"c1", &op.c1}, std::pair{"c2", &op.c2}, std::pair{"c3", &op.c3}}) {
      if (!node[key]) {
        rd.problems.push_back(std::string("operator.") + key + ": missing");
        continue;
      }
      *dst = rd.complex_pair(node[key], std::string("operator.") + key).value_or(cplx{});
    }
    cfg.op = op;
  } else if (*kind == "tube") {
    rd.known_keys(node, w, {"kind", "a", "b", "q"});
    TubeT op{rd.trig(node["a"], "operator.a"), rd.trig(node["b"], "operator.b"), rd.trig(node["q"], "operator.q")};
    if (!op.a.is_real_valued()) rd.problems.push_back("operator.a: must be real-valued (c_{-n} = conj(c_n))");
    if (!op.b.is_real_valued()) rd.problems.push_back("operator.b: must be real-valued (c_{-n} = conj(c_n))");
    cfg.op = op;
  } else {
    rd.problems.push_back("operator.kind: unknown kind '" + *kind + "' (valid kinds: " + join(kOperatorKinds, ", ") + ")");
  }
}

void check_invariants(const RunConfig& cfg, std::vector<std::string>& problems) {
  const auto& g = cfg.grid;
  if (!power_of_two(g.M)) problems.push_back("grid.M: must be a power of two >= 2, got " + std::to_string(g.M));
  if (!power_of_two(g.N)) problems.push_back("grid.N: must be a power of two >= 2, got " + std::to_string(g.N));
  if (!(g.X > 0)) problems.push_back("grid.X: must be positive");
  if (cfg.budgets.k_budget < 1) problems.push_back("budgets.k_budget: must be >= 1, got " + std::to_string(cfg.budgets.k_budget));
  if (cfg.budgets.xi_samples < 2) problems.push_back("budgets.xi_samples: must be >= 2");
  if (!(cfg.budgets.R > 0)) problems.push_back("budgets.R: must be positive");
  if (!(cfg.tol.int_tol > 0)) problems.push_back("tolerances.int_tol: must be positive");
  if (!(cfg.tol.sign_tol > 0)) problems.push_back("tolerances.sign_tol: must be positive");
  if (cfg.solve_residual && !(*cfg.solve_residual > 0)) problems.push_back("tolerances.solve_residual: must be positive");
  if (!(cfg.sigma_claim >= 1.0)) problems.push_back("claims.sigma: must be >= 1");
  if (!(cfg.mu_claim > 0)) problems.push_back("claims.mu: must be positive");
  if (cfg.input.csv_path.empty()) {
    bool ok = false;
    for (const auto& f : kInputFunctions) ok = ok || f == cfg.input.function;
    if (!ok)
      problems.push_back("input.function: unknown function '" + cfg.input.function + "' (valid: " + join(kInputFunctions, ", ") + ")");
  }
  const auto& cx = cfg.counterexample;
  static const std::set<std::string> kinds = {"auto", "sign_change", "plane_wave", "tube_zero"};
  if (!kinds.count(cx.kind)) problems.push_back("counterexample.kind: unknown kind '" + cx.kind + "'");
  const auto& sc = cx.sign_change;
  if (!(sc.sigma1 > 1)) problems.push_back("counterexample.sigma1: must exceed 1");
  if (!(sc.delta > 0)) problems.push_back("counterexample.delta: must be positive");
  if (!(sc.xi_lo > 0 && sc.xi_hi > sc.xi_lo)) problems.push_back("counterexample: need 0 < xi_lo < xi_hi");
  if (sc.slope_points < 2) problems.push_back("counterexample.slope_points: must be >= 2");
  if (!power_of_two(sc.fiber_M)) problems.push_back("counterexample.fiber_M: must be a power of two");
  if (!cfg.output.json && !cfg.output.csv && !cfg.output.svg) problems.push_back("output.formats: empty");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error(ErrorKind::Usage, "invalid_config", "invalid configuration: " + join(problems, "; ")),
      problems_(std::move(problems)) {}

void validate(const RunConfig& cfg) {
  std::vector<std::string> problems;
  check_invariants(cfg, problems);
  if (!problems.empty()) throw ConfigError(problems);
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  cfg.source = origin;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError({origin + ": " + e.what()});
  }
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  Reader rd;
  rd.known_keys(root, "config", {"operator", "grid", "budgets", "tolerances", "claims", "input", "output", "counterexample", "seed"});
  if (!rd.problems.empty() && !root.IsMap()) throw ConfigError(rd.problems);

  if (root["operator"]) parse_operator(rd, root["operator"], cfg);

  if (auto g = root["grid"]) {
    rd.known_keys(g, "grid", {"M", "N", "X"});
    rd.set(g, "M", "grid", cfg.grid.M);
    rd.set(g, "N", "grid", cfg.grid.N);
    rd.set(g, "X", "grid", cfg.grid.X);
  }
  if (auto b = root["budgets"]) {
    rd.known_keys(b, "budgets", {"k_budget", "xi_samples", "R"});
    rd.set(b, "k_budget", "budgets", cfg.budgets.k_budget);
    rd.set(b, "xi_samples", "budgets", cfg.budgets.xi_samples);
    rd.set(b, "R", "budgets", cfg.budgets.R);
  }
  if (auto t = root["tolerances"]) {
    rd.known_keys(t, "tolerances", {"int_tol", "sign_tol", "solve_residual"});
    rd.set(t, "int_tol", "tolerances", cfg.tol.int_tol);
    rd.set(t, "sign_tol", "tolerances", cfg.tol.sign_tol);
    if (auto v = rd.get<double>(t, "solve_residual", "tolerances")) cfg.solve_residual = *v;
  }
  if (auto c = root["claims"]) {
    rd.known_keys(c, "claims", {"sigma", "mu"});
    rd.set(c, "sigma", "claims", cfg.sigma_claim);
    rd.set(c, "mu", "claims", cfg.mu_claim);
  }
  if (auto in = root["input"]) {
    rd.known_keys(in, "input", {"function", "csv"});
    rd.set(in, "function", "input", cfg.input.function);
    rd.set(in, "csv", "input", cfg.input.csv_path);
  }
  if (auto o = root["output"]) {
    rd.known_keys(o, "output", {"dir", "formats"});
    rd.set(o, "dir", "output", cfg.output.dir);
    if (auto f = rd.get<std::vector<std::string>>(o, "formats", "output")) {
      cfg.output.json = cfg.output.csv = cfg.output.svg = false;
      for (const auto& s : *f) {
        if (s == "json") cfg.output.json = true;
        else if (s == "csv") cfg.output.csv = true;
        else if (s == "svg") cfg.output.svg = true;
        else rd.problems.push_back("output.formats: unknown format '" + s + "' (valid: json, csv, svg)");
      }
    }
  }
  if (auto c = root["counterexample"]) {
    auto& cx = cfg.counterexample;
    auto& sc = cx.sign_change;
    rd.known_keys(c, "counterexample",
                  {"kind", "sigma1", "mu", "delta", "xi_lo", "xi_hi", "slope_points", "fiber_xis", "fiber_M", "k0", "xi0"});
    rd.set(c, "kind", "counterexample", cx.kind);
    rd.set(c, "sigma1", "counterexample", sc.sigma1);
    rd.set(c, "mu", "counterexample", sc.mu);
    rd.set(c, "delta", "counterexample", sc.delta);
    rd.set(c, "xi_lo", "counterexample", sc.xi_lo);
    rd.set(c, "xi_hi", "counterexample", sc.xi_hi);
    rd.set(c, "slope_points", "counterexample", sc.slope_points);
    rd.set(c, "fiber_xis", "counterexample", sc.fiber_xis);
    rd.set(c, "fiber_M", "counterexample", sc.fiber_M);
    if (auto v = rd.get<int>(c, "k0", "counterexample")) cx.k0 = *v;
    if (auto v = rd.get<double>(c, "xi0", "counterexample")) cx.xi0 = *v;
  }
  rd.set(root, "seed", "config", cfg.seed);

  check_invariants(cfg, rd.problems);
  if (!rd.problems.empty()) throw ConfigError(rd.problems);
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Usage, "config_not_found", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  std::vector<std::string> problems;
  if (o.out) cfg.output.dir = *o.out;
  if (o.formats) {
    cfg.output.json = cfg.output.csv = cfg.output.svg = false;
    std::stringstream ss(*o.formats);
    std::string f;
    while (std::getline(ss, f, ',')) {
      if (f == "json") cfg.output.json = true;
      else if (f == "csv") cfg.output.csv = true;
      else if (f == "svg") cfg.output.svg = true;
      else problems.push_back("--format: unknown format '" + f + "' (valid: json, csv, svg)");
    }
  }
  if (o.k_budget) cfg.budgets.k_budget = *o.k_budget;
  if (o.grid) {
    int M = 0, N = 0;
    char x = 0, extra = 0;
    std::stringstream ss(*o.grid);
    if ((ss >> M >> x >> N) && (x == 'x' || x == 'X') && !(ss >> extra)) {
      cfg.grid.M = M;
      cfg.grid.N = N;
    } else {
      problems.push_back("--grid: expected MxN, got '" + *o.grid + "'");
    }
  }
  if (o.x_halfwidth) cfg.grid.X = *o.x_halfwidth;
  if (o.seed) cfg.seed = *o.seed;
  check_invariants(cfg, problems);
  if (!problems.empty()) throw ConfigError(problems);
}

}  // namespace cylhypo::cli
