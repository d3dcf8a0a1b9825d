#include "cylhypo/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace cylhypo::cli {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(cplx z) { return json::array({num(z.real()), num(z.imag())}); }

json to_json(const ComplexPolynomial& p) {
  json a = json::array();
  for (auto c : p.coeffs()) a.push_back(to_json(c));
  return a;
}

json to_json(const TrigPolynomial& f) {
  json a = json::array();
  for (const auto& [n, c] : f.coefficients()) a.push_back({{"n", n}, {"re", num(c.real())}, {"im", num(c.imag())}});
  return a;
}

json to_json(const OperatorSpec& op) {
  json j;
  if (auto* c = std::get_if<ConstSplit>(&op)) {
    j["kind"] = "const_split";
    j["p"] = to_json(c->p);
    j["q"] = to_json(c->q);
  } else if (auto* f = std::get_if<FirstOrderT>(&op)) {
    j["kind"] = "first_order_t";
    j["c1"] = to_json(f->c1);
    j["c2"] = to_json(f->c2);
    j["c3"] = to_json(f->c3);
  } else {
    const auto& t = std::get<TubeT>(op);
    j["kind"] = "tube";
    j["a"] = to_json(t.a);
    j["b"] = to_json(t.b);
    j["q"] = to_json(t.q);
  }
  j["description"] = describe(op);
  return j;
}

json to_json(const CylinderGrid& g) { return {{"M", g.M}, {"N", g.N}, {"X", num(g.X)}}; }

json to_json(const ZeroWitness& w) { return {{"k", w.k}, {"xi", num(w.xi)}, {"residual", num(w.residual)}}; }

json to_json(const ZeroSearch& z) {
  json w = json::array();
  for (const auto& x : z.witnesses) w.push_back(to_json(x));
  return {{"witnesses", w},
          {"exhaustive", z.exhaustive()},
          {"k_budget", z.k_budget},
          {"basis", z.basis},
          {"continuum", z.continuum}};
}

namespace {

json sample_json(const LowerBoundSample& s) { return {{"k", s.k}, {"xi", num(s.xi)}, {"ratio", num(s.ratio)}}; }

}  // namespace

json to_json(const LowerBoundResult& r) {
  json j;
  j["certified"] = r.certified();
  if (r.certificate) {
    const auto& c = *r.certificate;
    j["certificate"] = {{"C", num(c.C)},           {"R", num(c.R)},
                        {"R_max", num(c.R_max)},   {"K_range", c.K_range},
                        {"grid_inf", num(c.grid_inf)}, {"xi_samples", c.xi_samples},
                        {"argmin", sample_json(c.argmin)}};
  } else {
    j["certificate"] = nullptr;
  }
  if (r.refutation) {
    json path = json::array();
    for (const auto& s : r.refutation->path) path.push_back(sample_json(s));
    j["refutation"] = {{"inner_min", num(r.refutation->inner_min)},
                       {"outer_min", num(r.refutation->outer_min)},
                       {"path", path}};
  } else {
    j["refutation"] = nullptr;
  }
  return j;
}

json to_json(const Classification& c) {
  json j;
  j["verdict"] = to_string(c.verdict);
  j["theorem"] = c.theorem;
  j["notion"] = to_string(c.notion);
  j["mu_validity"] = c.mu_validity.text();
  j["sigma_validity"] = c.sigma_validity;
  j["witness"] = c.witness ? to_json(*c.witness) : json(nullptr);
  json cert;
  json trace = json::array();
  for (const auto& t : c.trace) {
    json vals = json::object();
    for (const auto& [k, v] : t.values) vals[k] = num(v);
    trace.push_back({{"condition", t.condition}, {"values", vals}, {"holds", t.holds}, {"boundary_case", t.boundary_case}});
  }
  cert["trace"] = trace;
  cert["zero_search"] = c.zero_search ? to_json(*c.zero_search) : json(nullptr);
  cert["lower_bound"] = c.lower_bound ? to_json(*c.lower_bound) : json(nullptr);
  cert["gap"] = c.gap ? num(*c.gap) : json(nullptr);
  j["certificate"] = cert;
  j["notes"] = c.notes;
  return j;
}

json to_json(const DecayFit& f) {
  return {{"axis", to_string(f.axis)}, {"C", num(f.C)},   {"rate", num(f.rate)},
          {"order", num(f.order)},     {"rms_residual", num(f.rms_residual)}, {"points", f.points}};
}

json to_json(const MembershipReport& m, bool with_profiles) {
  json j;
  j["sigma_claim"] = num(m.sigma_claim);
  j["mu_claim"] = num(m.mu_claim);
  j["consistent"] = m.consistent;
  j["k_axis"] = {{"fit", m.k_fit ? to_json(*m.k_fit) : json(nullptr)}, {"consistent", m.k_consistent}, {"note", m.k_note}};
  j["xi_axis"] = {{"fit", m.xi_fit ? to_json(*m.xi_fit) : json(nullptr)}, {"consistent", m.xi_consistent}, {"note", m.xi_note}};
  j["truncation_warning"] = m.truncation_warning;
  j["edge_max"] = num(m.edge_max);
  j["criteria"] = {{"order_slack", kOrderSlack}, {"rms_limit", kRmsLimit}};
  if (with_profiles) {
    json kp = json::array(), xp = json::array();
    for (auto [k, s] : m.k_profile) kp.push_back({k, num(s)});
    for (auto [x, s] : m.xi_profile) xp.push_back({num(x), num(s)});
    j["k_profile"] = kp;
    j["xi_profile"] = xp;
  }
  return j;
}

json to_json(const SolveReport& r) {
  // runs of equal branches over the xi columns
  json branches = json::array();
  for (std::size_t i = 0; i < r.branches.size();) {
    std::size_t j = i;
    while (j < r.branches.size() && r.branches[j] == r.branches[i]) ++j;
    branches.push_back({{"branch", to_string(r.branches[i])}, {"first_column", i}, {"count", j - i}});
    i = j;
  }
  return {{"residual_inf", num(r.residual_inf)},
          {"tolerance", num(r.tolerance)},
          {"conditioning", num(r.conditioning)},
          {"flagged", r.flagged},
          {"fibers", {{"sol_minus", r.sol_minus}, {"sol_plus", r.sol_plus}, {"resonant", r.resonant}}},
          {"branches", branches},
          {"notes", r.notes}};
}

json to_json(const TubeReduction& r) {
  return {{"a0", num(r.a0)},
          {"q0", to_json(r.q0)},
          {"P00", to_json(OperatorSpec{r.P00})},
          {"A", to_json(r.A.periodic)},
          {"Q", to_json(r.Q.periodic)},
          {"classification", to_json(r.classification)}};
}

json to_json(const SignChangeReport& r) {
  return {{"mirrored", r.mirrored},
          {"averages", {{"a0", num(r.a0)}, {"b0", num(r.b0)}, {"q0", to_json(r.q0)}}},
          {"extremiser", {{"t0", num(r.t0)}, {"s0", num(r.s0)}, {"B", num(r.B)}}},
          {"cutoffs",
           {{"phi", {{"order", num(r.phi.order)}, {"center", num(r.tau0)}, {"delta", num(r.delta)},
                     {"support", {num(r.phi.t_lo), num(r.phi.t_hi)}}, {"plateau", {num(r.phi.p_lo), num(r.phi.p_hi)}}}},
            {"psi", {{"order", num(r.psi.order)}, {"support", "[0,inf)"}, {"one_on", "[1,inf)"}}}}},
          {"slope", {{"value", num(r.slope)}, {"window", {r.xi.empty() ? 0.0 : r.xi.front(), r.xi.empty() ? 0.0 : r.xi.back()}},
                     {"points", r.xi.size()}, {"accepted", {-0.6, -0.4}}, {"ok", r.slope_ok}}},
          {"fibers", {{"residuals", r.fiber_residuals}, {"max", num(r.fiber_residual_max)}, {"tolerance", 1e-5}, {"ok", r.fiber_ok}}},
          {"f_membership", to_json(r.f_membership, false)},
          {"passed", r.passed}};
}

json to_json(const PlaneWaveReport& r) {
  return {{"witness", to_json(r.witness)},
          {"grid", to_json(r.grid)},
          {"residual_inf", num(r.residual_inf)},
          {"edge_min", num(r.edge_min)},
          {"decay_total", num(r.decay_total)},
          {"no_decay", r.no_decay}};
}

json to_json(const TubeWitnessReport& r) {
  return {{"k0", r.k0},
          {"xi0", num(r.xi0)},
          {"condition_defect", num(r.condition_defect)},
          {"periodicity_defect", num(r.periodicity_defect)},
          {"residual_inf", num(r.residual_inf)},
          {"grid", to_json(r.grid)}};
}

json to_json(const LaplaceReport& r) {
  json pts = json::array();
  for (const auto& p : r.points)
    pts.push_back({{"lambda", num(p.lambda)}, {"lhs", num(p.lhs)}, {"rhs", num(p.rhs)}, {"holds", p.holds}, {"guaranteed", p.guaranteed}});
  return {{"s0", num(r.s0)}, {"delta", num(r.delta)}, {"M", num(r.M)}, {"lambda_threshold", num(r.lambda_threshold)},
          {"points", pts}, {"all_hold", r.all_hold}};
}

json to_json(const oracles::LemmaResult& r) {
  return {{"name", r.name}, {"pass", r.pass}, {"cases", r.cases}, {"worst", num(r.worst)}, {"detail", r.detail}};
}

json to_json(const Error& e) {
  const char* kind = e.kind() == ErrorKind::Refusal ? "refusal" : e.kind() == ErrorKind::Usage ? "usage" : "precondition";
  json details = json::object();
  for (const auto& [k, v] : e.details()) details[k] = num(v);
  return {{"error", {{"kind", kind}, {"code", e.code()}, {"message", e.what()}, {"details", details}}}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_grid(const GridFunction& f) {
  std::string s = "t,x,re,im\n";
  const auto& g = f.grid;
  for (int j = 0; j < g.M; ++j)
    for (int i = 0; i < g.N; ++i) {
      const cplx v = f(j, i);
      s += fmt17(g.t(j)) + "," + fmt17(g.x(i)) + "," + fmt17(v.real()) + "," + fmt17(v.imag()) + "\n";
    }
  return s;
}

std::string csv_spectrum(const MixedSpectrum& F) {
  std::string s = "k,xi,re,im\n";
  const auto& g = F.grid;
  for (int r = 0; r < g.M; ++r)
    for (int c = 0; c < g.N; ++c) {
      const cplx v = F(r, c);
      s += std::to_string(g.k(r)) + "," + fmt17(g.xi(c)) + "," + fmt17(v.real()) + "," + fmt17(v.imag()) + "\n";
    }
  return s;
}

std::string csv_columns(const std::vector<std::string>& header, const std::vector<std::vector<double>>& cols) {
  std::string s;
  for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
  s += "\n";
  const std::size_t rows = cols.empty() ? 0 : cols.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) s += (c ? "," : "") + fmt17(cols[c][r]);
    s += "\n";
  }
  return s;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Usage, "output_not_writable", "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::Usage, "output_not_writable", "write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace cylhypo::cli
