#include "cylhypo/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cylhypo/cli/svg.hpp"
#include "cylhypo/oracles.hpp"

namespace cylhypo::cli {

namespace {

constexpr const char* kVersion = "0.3.0";

const OperatorSpec& need_operator(const RunConfig& cfg, const std::string& cmd) {
  if (!cfg.op) throw Error(ErrorKind::Usage, "missing_operator", "command '" + cmd + "' needs an operator section in the config");
  return *cfg.op;
}

GridFunction input_of(const RunConfig& cfg) {
  if (!cfg.input.csv_path.empty()) return read_grid_csv(cfg.input.csv_path, cfg.grid);
  return test_function(cfg.input.function, cfg.grid);
}

json input_json(const RunConfig& cfg) {
  if (!cfg.input.csv_path.empty()) return {{"csv", cfg.input.csv_path}};
  return {{"function", cfg.input.function}};
}

json header(const std::string& cmd, const RunConfig& cfg) {
  json j;
  j["command"] = cmd;
  if (cfg.op) j["operator"] = to_json(*cfg.op);
  return j;
}

std::vector<std::pair<double, double>> k_points(const MembershipReport& m) {
  std::vector<std::pair<double, double>> p;
  for (auto [k, s] : m.k_profile) p.emplace_back(k, s);
  return p;
}

std::vector<std::pair<double, double>> model_curve(const DecayFit& f, const std::vector<std::pair<double, double>>& at) {
  std::vector<std::pair<double, double>> p;
  for (auto [x, s] : at) {
    (void)s;
    p.emplace_back(x, f.C * std::exp(-f.rate * std::pow(std::abs(x), 1.0 / f.order)));
  }
  return p;
}

void profile_plots(const MembershipReport& m, CommandOutput& out, const std::string& stem) {
  std::vector<Series> ks{{"max_xi |F(k, xi)|", k_points(m), false}};
  if (m.k_fit) ks.push_back({"fit", model_curve(*m.k_fit, ks[0].points), true});
  out.files.emplace_back(stem + "_k.svg", line_chart({"k profile", "k", "magnitude", false, true}, ks));
  std::vector<Series> xs{{"max_k |F(k, xi)|", m.xi_profile, false}};
  if (m.xi_fit) xs.push_back({"fit", model_curve(*m.xi_fit, m.xi_profile), true});
  out.files.emplace_back(stem + "_xi.svg", line_chart({"xi profile", "xi", "magnitude", false, true}, xs));
}

CommandOutput cmd_classify(const RunConfig& cfg) {
  CommandOutput out;
  const auto c = classify(need_operator(cfg, "classify"), cfg.budgets, cfg.tol);
  out.body = header("classify", cfg);
  out.body["budgets"] = {{"k_budget", cfg.budgets.k_budget}, {"xi_samples", cfg.budgets.xi_samples}, {"R", num(cfg.budgets.R)}};
  out.body["tolerances"] = {{"int_tol", num(cfg.tol.int_tol)}, {"sign_tol", num(cfg.tol.sign_tol)}};
  out.body.update(to_json(c));
  return out;
}

CommandOutput cmd_zeros(const RunConfig& cfg) {
  CommandOutput out;
  const auto z = find_zeros(need_operator(cfg, "zeros"), cfg.budgets.k_budget);
  out.body = header("zeros", cfg);
  out.body.update(to_json(z));
  if (cfg.output.csv) {
    std::vector<double> k, xi, res;
    for (const auto& w : z.witnesses) {
      k.push_back(w.k);
      xi.push_back(w.xi);
      res.push_back(w.residual);
    }
    out.files.emplace_back("zeros.csv", csv_columns({"k", "xi", "residual"}, {k, xi, res}));
  }
  return out;
}

CommandOutput cmd_solve(const RunConfig& cfg) {
  CommandOutput out;
  const auto& op = need_operator(cfg, "solve");
  const auto f = input_of(cfg);
  SolveResult r;
  std::string method;
  if (auto* t = std::get_if<TubeT>(&op)) {
    r = solve_tube(*t, f, Exec::Parallel, cfg.solve_residual.value_or(1e-5));
    method = "fiberwise periodic ODE";
  } else {
    r = solve_const(op, f, Exec::Parallel, cfg.solve_residual.value_or(1e-6));
    method = "division by the plane-wave multiplier";
  }
  out.body = header("solve", cfg);
  out.body["grid"] = to_json(cfg.grid);
  out.body["input"] = input_json(cfg);
  out.body["method"] = method;
  out.body["report"] = to_json(r.report);
  out.body["u_max_abs"] = num(max_abs(r.u.values));
  if (cfg.output.csv) out.files.emplace_back("u.csv", csv_grid(r.u));
  if (cfg.output.svg) {
    std::vector<std::pair<double, double>> prof;
    for (int i = 0; i < cfg.grid.N; ++i) {
      double m = 0;
      for (int j = 0; j < cfg.grid.M; ++j) m = std::max(m, std::abs(r.u(j, i)));
      prof.emplace_back(cfg.grid.x(i), m);
    }
    out.files.emplace_back("u_profile.svg", line_chart({"max_t |u(t, x)|", "x", "magnitude", false, true}, {{"u", prof, false}}));
  }
  return out;
}

CommandOutput cmd_spectrum(const RunConfig& cfg) {
  CommandOutput out;
  const auto f = input_of(cfg);
  const auto F = forward_mixed(f);
  const double lhs = l2_norm_sq(f), rhs = l2_norm_sq(F);
  const auto m = membership_report(F, cfg.sigma_claim, cfg.mu_claim);
  out.body = header("spectrum", cfg);
  out.body["grid"] = to_json(cfg.grid);
  out.body["input"] = input_json(cfg);
  out.body["max_abs"] = num(max_abs(F.values));
  out.body["parseval"] = {{"function_norm_sq", num(lhs)},
                          {"spectrum_norm_sq", num(rhs)},
                          {"relative_difference", num(std::abs(lhs - rhs) / std::max(lhs, 1e-300))}};
  json kp = json::array(), xp = json::array();
  for (auto [k, s] : m.k_profile) kp.push_back({k, num(s)});
  for (auto [x, s] : m.xi_profile) xp.push_back({num(x), num(s)});
  out.body["k_profile"] = kp;
  out.body["xi_profile"] = xp;
  if (cfg.output.csv) out.files.emplace_back("spectrum.csv", csv_spectrum(F));
  if (cfg.output.svg) profile_plots(m, out, "spectrum");
  return out;
}

CommandOutput cmd_fit_decay(const RunConfig& cfg) {
  CommandOutput out;
  const auto f = input_of(cfg);
  const auto m = membership_report(f, cfg.sigma_claim, cfg.mu_claim);
  out.body = header("fit-decay", cfg);
  out.body["grid"] = to_json(cfg.grid);
  out.body["input"] = input_json(cfg);
  out.body["membership"] = to_json(m, true);
  if (cfg.output.csv) {
    std::vector<double> k, sk, xi, sx;
    for (auto [a, b] : m.k_profile) k.push_back(a), sk.push_back(b);
    for (auto [a, b] : m.xi_profile) xi.push_back(a), sx.push_back(b);
    out.files.emplace_back("k_profile.csv", csv_columns({"k", "s"}, {k, sk}));
    out.files.emplace_back("xi_profile.csv", csv_columns({"xi", "s"}, {xi, sx}));
  }
  if (cfg.output.svg) profile_plots(m, out, "fit");
  return out;
}

CommandOutput sign_change_output(const RunConfig& cfg, const TubeT& t) {
  CommandOutput out;
  const double a0 = average(t.a).real();
  const cplx q0 = average(t.q);
  const auto r = sign_change_construction(a0, t.b, q0, cfg.counterexample.sign_change);
  out.body = header("counterexample", cfg);
  out.body["kind"] = "sign_change";
  out.body["note"] = "built for d_t + (a0 + i b(t)) d_x + q0; Psi_a and Psi_q carry it to the original operator";
  out.body.update(to_json(r));
  // the phase-free profile psi(s) = G(t0, s) - B feeds the Laplace lower bound
  const auto Bint = zero_mean_antiderivative(t.b);
  auto psi = [&](double s) {
    const double v = G_value(Bint, r.t0, s, r.mirrored) - r.B;
    return r.mirrored ? -v : v;
  };
  const double win = std::min({0.5, r.s0, 2 * M_PI - r.s0});
  try {
    out.body["laplace"] = to_json(laplace_lower_bound_check(psi, r.s0, 0.9 * win, {50.0, 200.0, 1000.0, 2000.0}));
  } catch (const Error& e) {
    out.body["laplace"] = to_json(e);
  }
  if (cfg.output.csv) out.files.emplace_back("u_profile.csv", csv_columns({"xi", "abs_u"}, {r.xi, r.u_abs}));
  if (cfg.output.svg) {
    std::vector<std::pair<double, double>> pts, ref;
    for (std::size_t i = 0; i < r.xi.size(); ++i) pts.emplace_back(r.xi[i], r.u_abs[i]);
    if (!pts.empty()) {
      const double K = pts.front().second * std::sqrt(pts.front().first);
      for (auto [x, y] : pts) {
        (void)y;
        ref.emplace_back(x, K / std::sqrt(x));
      }
    }
    out.files.emplace_back("u_profile.svg", line_chart({"|u(t0, xi)|", "xi", "magnitude", true, true},
                                                       {{"|u(t0, xi)|", pts, false}, {"K xi^-1/2", ref, true}}));
  }
  return out;
}

CommandOutput cmd_counterexample(const RunConfig& cfg) {
  const auto& op = need_operator(cfg, "counterexample");
  std::string kind = cfg.counterexample.kind;
  const auto c = classify(op, cfg.budgets, cfg.tol);
  const auto* tube = std::get_if<TubeT>(&op);
  if (kind == "auto") {
    if (tube && !constant_tube_form(*tube) && sign_change(tube->b, cfg.tol.sign_tol).pattern == SignPattern::ChangesSign &&
        c.verdict == Verdict::NotGH && !c.witness)
      kind = "sign_change";
    else if (c.verdict == Verdict::NotGH && c.witness)
      kind = tube ? "tube_zero" : "plane_wave";
    else
      throw refusal("no_counterexample", "the classifier reports verdict " + to_string(c.verdict) +
                                             " without a witness; there is nothing to construct");
  }
  if (kind == "sign_change") {
    if (!tube) throw precondition_error("not_a_tube", "sign_change needs a tube operator");
    return sign_change_output(cfg, *tube);
  }
  ZeroWitness w;
  if (cfg.counterexample.k0 && cfg.counterexample.xi0) {
    w.k = *cfg.counterexample.k0;
    w.xi = *cfg.counterexample.xi0;
  } else if (c.witness) {
    w = *c.witness;
  } else {
    throw refusal("no_witness", "no zero witness available; give counterexample.k0 and counterexample.xi0");
  }
  CommandOutput out;
  out.body = header("counterexample", cfg);
  out.body["kind"] = kind;
  out.body["classification"] = {{"verdict", to_string(c.verdict)}, {"theorem", c.theorem}, {"mu_validity", c.mu_validity.text()}};
  GridFunction sample;
  if (kind == "plane_wave") {
    if (tube) throw precondition_error("tube_operator", "use tube_zero for tube operators");
    auto r = plane_wave_witness(op, w, cfg.grid);
    out.body["witness"] = to_json(r);
    sample = std::move(r.u);
  } else {
    if (!tube) throw precondition_error("not_a_tube", "tube_zero needs a tube operator");
    auto r = tube_zero_witness(*tube, w.k, w.xi, cfg.grid);
    out.body["witness"] = to_json(r);
    sample = std::move(r.v);
  }
  if (cfg.output.csv || cfg.output.svg) {
    std::vector<double> xs, mx;
    for (int i = 0; i < sample.grid.N; ++i) {
      double m = 0;
      for (int j = 0; j < sample.grid.M; ++j) m = std::max(m, std::abs(sample(j, i)));
      xs.push_back(sample.grid.x(i));
      mx.push_back(m);
    }
    if (cfg.output.csv) out.files.emplace_back("witness_profile.csv", csv_columns({"x", "max_t_abs"}, {xs, mx}));
    if (cfg.output.svg) {
      std::vector<std::pair<double, double>> p;
      for (std::size_t i = 0; i < xs.size(); ++i) p.emplace_back(xs[i], mx[i]);
      out.files.emplace_back("witness_profile.svg", line_chart({"max_t |u(t, x)|", "x", "magnitude", false, false}, {{"u", p, false}}));
    }
  }
  return out;
}

CommandOutput cmd_reduce(const RunConfig& cfg) {
  const auto& op = need_operator(cfg, "reduce");
  const auto* tube = std::get_if<TubeT>(&op);
  if (!tube) throw precondition_error("not_a_tube", "reduce needs a tube operator");
  const auto red = reduce_tube(*tube);
  const auto f = test_function("gaussian_cos", cfg.grid);
  const auto chk = conjugation_residuals(red, f);
  CommandOutput out;
  out.body = header("reduce", cfg);
  out.body["reduction"] = to_json(red);
  out.body["conjugation_check"] = {{"test_function", "gaussian_cos"},
                                   {"grid", to_json(cfg.grid)},
                                   {"psi_a_residual", num(chk.psi_a_residual)},
                                   {"psi_q_residual", num(chk.psi_q_residual)},
                                   {"scale", num(chk.scale)}};
  return out;
}

CommandOutput cmd_verify_lemmas(const RunConfig& cfg) {
  CommandOutput out;
  const auto results = oracles::run_lemma_suite(cfg.seed);
  json arr = json::array();
  int passed = 0;
  for (const auto& r : results) {
    arr.push_back(to_json(r));
    passed += r.pass;
  }
  out.ok = passed == static_cast<int>(results.size());
  out.body = {{"command", "verify-lemmas"},
              {"seed", cfg.seed},
              {"lemmas", arr},
              {"summary", {{"total", results.size()}, {"passed", passed}, {"all_pass", out.ok}}}};
  return out;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

}  // namespace

GridFunction test_function(const std::string& name, const CylinderGrid& grid) {
  auto gauss = [](double x) { return std::exp(-0.5 * x * x); };
  if (name == "gaussian") return GridFunction::sample(grid, [&](double, double x) { return cplx(gauss(x)); });
  if (name == "gaussian_cos")
    return GridFunction::sample(grid, [&](double t, double x) { return cplx(std::cos(t) * gauss(x)); });
  if (name == "gaussian_mode")
    return GridFunction::sample(grid, [&](double t, double x) { return std::polar(gauss(x), t); });
  if (name == "poisson_gaussian") {
    const double r = 0.5;
    return GridFunction::sample(grid, [&](double t, double x) {
      return cplx((1 - r * r) / (1 - 2 * r * std::cos(t) + r * r) * gauss(x));
    });
  }
  throw Error(ErrorKind::Usage, "unknown_function", "unknown input function '" + name + "'");
}

GridFunction read_grid_csv(const std::string& path, const CylinderGrid& grid) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Usage, "input_not_found", "cannot open input CSV '" + path + "'");
  GridFunction f(grid);
  std::string line;
  std::getline(in, line);
  if (line.rfind("t,x,re,im", 0) != 0) throw Error(ErrorKind::Usage, "bad_csv_header", "input CSV header must be t,x,re,im");
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double t, x, re, im;
    char c1, c2, c3;
    std::stringstream ss(line);
    if (!(ss >> t >> c1 >> x >> c2 >> re >> c3 >> im))
      throw Error(ErrorKind::Usage, "bad_csv_row", "malformed CSV row " + std::to_string(n + 2) + ": '" + line + "'");
    if (n >= grid.size()) throw Error(ErrorKind::Usage, "csv_grid_mismatch", "input CSV has more rows than M*N");
    f.values[n++] = cplx(re, im);
  }
  if (n != grid.size())
    throw Error(ErrorKind::Usage, "csv_grid_mismatch",
                "input CSV has " + std::to_string(n) + " rows, grid needs " + std::to_string(grid.size()));
  return f;
}

CommandOutput run_command(const std::string& cmd, const RunConfig& cfg) {
  if (cmd == "classify") return cmd_classify(cfg);
  if (cmd == "zeros") return cmd_zeros(cfg);
  if (cmd == "solve") return cmd_solve(cfg);
  if (cmd == "spectrum") return cmd_spectrum(cfg);
  if (cmd == "fit-decay") return cmd_fit_decay(cfg);
  if (cmd == "counterexample") return cmd_counterexample(cfg);
  if (cmd == "reduce") return cmd_reduce(cfg);
  if (cmd == "verify-lemmas") return cmd_verify_lemmas(cfg);
  throw Error(ErrorKind::Usage, "unknown_command", "unknown command '" + cmd + "'");
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Global hypoellipticity classifier and spectral toolkit on T x R"};
  app.set_version_flag("--version", kVersion);
  std::string cmd, config_path;
  Overrides ov;
  std::string out_dir, formats, grid;
  int k_budget = 0;
  double xh = 0;
  unsigned seed = 0;
  std::string valid;
  for (const auto& c : kCommands) valid += (valid.empty() ? "" : ", ") + c;
  app.add_option("command", cmd, "one of: " + valid)->required()->check(CLI::IsMember(kCommands));
  app.add_option("--config", config_path, "YAML run configuration");
  auto* o_out = app.add_option("--out", out_dir, "output directory");
  auto* o_fmt = app.add_option("--format", formats, "comma list of json,csv,svg");
  auto* o_kb = app.add_option("--k-budget", k_budget, "k range for zero searches");
  auto* o_grid = app.add_option("--grid", grid, "grid size MxN");
  auto* o_x = app.add_option("--x-halfwidth", xh, "x window half-width X");
  auto* o_seed = app.add_option("--seed", seed, "seed for randomized suites");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    std::cout << dump({{"error", {{"kind", "usage"}, {"code", "invalid_arguments"}, {"message", e.what()}, {"details", json::object()}}},
                       {"command", cmd}});
    return 2;
  }
  if (*o_out) ov.out = out_dir;
  if (*o_fmt) ov.formats = formats;
  if (*o_kb) ov.k_budget = k_budget;
  if (*o_grid) ov.grid = grid;
  if (*o_x) ov.x_halfwidth = xh;
  if (*o_seed) ov.seed = seed;

  RunConfig cfg;
  std::filesystem::path dir = out_dir.empty() ? "out" : out_dir;
  const auto t_start = std::chrono::steady_clock::now();
  try {
    if (!config_path.empty()) {
      cfg = parse_config(config_path);
    } else {
      validate(cfg);
    }
    apply_overrides(cfg, ov);
    dir = cfg.output.dir;
    auto res = run_command(cmd, cfg);
    const std::string body = dump(res.body);
    if (cfg.output.json) write_atomic(dir / (cmd + ".json"), body);
    for (const auto& [name, content] : res.files) write_atomic(dir / name, content);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    json meta = {{"tool", "cylhypo"},
                 {"version", kVersion},
                 {"command", cmd},
                 {"config", config_path},
                 {"started", timestamp()},
                 {"seconds", secs},
                 {"threads",
#ifdef _OPENMP
                  omp_get_max_threads()
#else
                  1
#endif
                 },
                 {"artifacts", json::array()}};
    if (cfg.output.json) meta["artifacts"].push_back(cmd + ".json");
    for (const auto& f : res.files) meta["artifacts"].push_back(f.first);
    write_atomic(dir / (cmd + ".meta.json"), dump(meta));
    std::cout << body;
    return res.ok ? 0 : 1;
  } catch (const Error& e) {
    json err = to_json(e);
    err["command"] = cmd;
    if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) err["error"]["problems"] = ce->problems();
    std::cout << dump(err);
    if (e.kind() == ErrorKind::Usage) {
      std::cerr << "cylhypo: " << e.what() << "\n";
      return 2;
    }
    try {
      write_atomic(dir / (cmd + ".error.json"), dump(err));
    } catch (const std::exception&) {
    }
    std::cerr << "cylhypo: refused: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << dump({{"error", {{"kind", "internal"}, {"code", "internal_error"}, {"message", e.what()}, {"details", json::object()}}}, {"command", cmd}});
    std::cerr << "cylhypo: internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cylhypo::cli
