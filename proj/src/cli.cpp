#include "fbrank/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

#include "fbrank/groebner.hpp"
#include "fbrank/numeric.hpp"
#include "fbrank/order.hpp"
#include "fbrank/proofcheck.hpp"
#include "fbrank/systems.hpp"
#include "fbrank/text.hpp"

#ifndef FBRANK_VERSION
#define FBRANK_VERSION "0.0.0"
#endif

namespace fbrank {

using json = nlohmann::json;

std::string tool_version() { return FBRANK_VERSION; }

namespace {

struct Flags {
  std::string json_path;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::uint64_t budget = 0;
  std::string system = "It";
  int n = 1;
  std::string slack = "sym";
  std::string order = "default";
  bool ledger = false;
  std::string id;
  std::string mutation = "none";
  std::string point, from, to, op;
  int steps = 1000;
  std::string export_path;
};

// Outcome of one subcommand: payload, exit code and a one-line summary.
struct Outcome {
  json payload;
  int code = kExitPass;
  std::string summary;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::uint64_t budget_limit(const Flags& f) { return f.budget ? f.budget : StepBudget::default_limit(); }

SlackSpec slack_of(const Flags& f) {
  if (f.slack == "random") return SlackSpec::parse("random:" + std::to_string(f.seed));
  return SlackSpec::parse(f.slack);
}

SystemDescriptor system_of(const Flags& f) {
  if (f.n < 1) throw std::invalid_argument("--n must be >= 1");
  return make_system(parse_system_kind(f.system), f.n, slack_of(f));
}

json texts(const std::vector<Monomial>& ms, const VarUniverse& u) {
  json a = json::array();
  for (const auto& m : ms) a.push_back(to_text(m, u));
  return a;
}

template <class Op>
json basis_json(const GroebnerBasis<Op>& G) {
  json gens = json::array();
  for (const auto& g : G.generators) gens.push_back(to_text(g, &G.order));
  return {{"order", G.order.to_json()},
          {"generators", gens},
          {"certified", G.certified},
          {"elements-added", G.elements_added},
          {"pairs-reduced", G.pairs_reduced},
          {"pairs-skipped", G.pairs_skipped},
          {"steps", G.steps}};
}

template <class Op>
json pair_ledger(const GroebnerBasis<Op>& G, StepBudget* budget) {
  ReduceOptions ro;
  ro.budget = budget;
  auto rep = is_groebner(G.generators, G.order, ro);
  json pairs = json::array();
  for (const auto& p : rep.pairs)
    pairs.push_back({{"pair", {p.i, p.j}}, {"coprime", p.coprime}, {"chain", p.chain}, {"result", to_text(p.remainder)}});
  return {{"is-groebner", rep.is_groebner}, {"pairs", pairs}};
}

TermOrder order_of(const Flags& f, const UniversePtr& u, Mode mode) {
  if (f.order == "default") return mode == Mode::Dh ? make_h_order(u) : make_prop2_order(u);
  if (f.order == "prop2") return make_prop2_order(u);
  if (f.order == "h") return make_h_order(u);
  if (f.order == "grlex") return make_grlex_order(u);
  throw std::invalid_argument("unknown order '" + f.order + "' (default, prop2, h, grlex)");
}

Outcome cmd_build(const Flags& f) {
  auto sys = system_of(f);
  return {sys.to_json(), kExitPass, f.system + " n=" + std::to_string(f.n) + ": " +
                                        std::to_string(sys.generators.size()) + " generators"};
}

Outcome cmd_gb(const Flags& f) {
  auto sys = system_of(f);
  StepBudget budget(budget_limit(f));
  BuchbergerOptions bo;
  bo.budget = &budget;
  bo.jobs = f.jobs;
  const TermOrder order = order_of(f, sys.universe, sys.mode);
  json payload = {{"system", f.system}, {"n", f.n}, {"slack", sys.slack.to_string()}};
  std::size_t size = 0;
  if (sys.mode == Mode::Dh) {
    auto G = buchberger(sys.ops(), order, bo);
    payload["basis"] = basis_json(G);
    if (f.ledger) payload["s-pairs"] = pair_ledger(G, &budget);
    size = G.generators.size();
  } else {
    auto G = buchberger(ops_of(to_rational(sys)), order, bo);
    payload["basis"] = basis_json(G);
    if (f.ledger) payload["s-pairs"] = pair_ledger(G, &budget);
    try {
      auto st = standard_monomials(G.generators, order);
      payload["standard-monomials"] = texts(st, *sys.universe);
      payload["rank"] = st.size();
    } catch (const InfiniteStaircase& e) {
      payload["rank"] = nullptr;
      payload["staircase"] = e.what();
    }
    size = G.generators.size();
  }
  return {payload, kExitPass, "basis of " + std::to_string(size) + " elements"};
}

Outcome cmd_rank(const Flags& f) {
  auto sys = system_of(f);
  if (sys.mode == Mode::Dh) throw std::invalid_argument("rank is defined for I, It, Ip and Itp");
  StepBudget budget(budget_limit(f));
  BuchbergerOptions bo;
  bo.budget = &budget;
  bo.jobs = f.jobs;
  auto r = holonomic_rank(ops_of(to_rational(sys)), bo);
  json payload = {{"system", f.system},
                  {"n", f.n},
                  {"slack", sys.slack.to_string()},
                  {"rank", r.rank},
                  {"expected", 2 * f.n + 2},
                  {"standard-monomials", texts(r.standard, *sys.universe)},
                  {"basis-size", r.basis.generators.size()},
                  {"steps", r.basis.steps}};
  return {payload, kExitPass, std::to_string(r.rank)};
}

Outcome cmd_initial(const Flags& f) {
  auto sys = system_of(f);
  const TermOrder order = order_of(f, sys.universe, sys.mode);
  const WeightVector w = make_weight(sys.universe);
  json gens = json::array();
  for (const auto& g : sys.generators) {
    const auto& lt = g.op.leading_term(order);
    gens.push_back({{"name", g.name},
                    {"initial-monomial", to_text(lt.monomial, *sys.universe)},
                    {"initial-coefficient", to_text(lt.coeff)},
                    {"weight-initial-form", to_text(g.op.initial_form(w), &order)}});
  }
  json payload = {{"system", f.system}, {"n", f.n}, {"order", order.to_json()}, {"generators", gens}};
  return {payload, kExitPass, std::to_string(gens.size()) + " initial monomials"};
}

int status_code(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return kExitPass;
    case CheckStatus::Fail:
      return kExitFail;
    case CheckStatus::Skipped:
      return kExitBudget;
  }
  return kExitFail;
}

CheckOptions check_options(const Flags& f) {
  CheckOptions o;
  o.seed = f.seed;
  o.budget = f.budget;
  o.mutation = parse_mutation(f.mutation);
  return o;
}

Outcome cmd_check(const Flags& f) {
  auto r = run_check(f.id, f.n, check_options(f));
  return {r.to_json(), status_code(r.status), f.id + " n=" + std::to_string(f.n) + ": " + to_string(r.status)};
}

Outcome cmd_check_all(const Flags& f) {
  auto results = run_all(f.n, check_options(f), std::max(1u, f.jobs));
  int code = kExitPass;
  std::size_t pass = 0;
  for (const auto& r : results) {
    pass += r.status == CheckStatus::Pass;
    if (r.status == CheckStatus::Fail) code = kExitFail;
    if (r.status == CheckStatus::Skipped && code == kExitPass) code = kExitBudget;
  }
  json payload = ledger_json(results);
  payload["n"] = f.n;
  return {payload, code,
          std::to_string(pass) + "/" + std::to_string(results.size()) + " checks pass at n=" + std::to_string(f.n)};
}

EvalPoint read_point(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read point file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("point file '" + path + "': " + e.what());
  }
  return EvalPoint::from_json(j);
}

EvalPoint point_or_random(const std::string& path, int n, std::uint64_t seed, bool diagonal) {
  if (!path.empty()) return read_point(path);
  std::mt19937_64 rng(seed);
  return EvalPoint::random(n, rng, diagonal);
}

Outcome cmd_zeval(const Flags& f) {
  if (f.system != "I" && f.system != "It") throw std::invalid_argument("zeval applies generators of I or It");
  const bool diagonal = f.system == "It";
  // On diagonal points only the diagonal-universe generators act on Z.
  auto sys = diagonal ? make_I_tilde(f.n, false) : make_I(f.n);
  EvalPoint p = point_or_random(f.point, f.n, f.seed, diagonal);
  if (p.n != f.n) throw std::invalid_argument("point has n=" + std::to_string(p.n));
  json payload = {{"n", f.n}, {"system", f.system}, {"point", p.to_json()}, {"Z", quadrature_Z(p)}};
  json rows = json::array();
  double worst = 0;
  for (const auto& g : sys.generators) {
    if (!f.op.empty() && f.op != "all" && f.op != g.name) continue;
    Applied a = apply_to_Z(g.op, p);
    const double res = a.scale == 0 ? std::abs(a.value) : std::abs(a.value) / a.scale;
    worst = std::max(worst, res);
    rows.push_back({{"op", g.name}, {"value", a.value}, {"scale", a.scale}, {"residual", res}});
  }
  if (!f.op.empty() && rows.empty()) throw std::invalid_argument("no generator named '" + f.op + "' in " + f.system);
  if (!f.op.empty()) payload["residuals"] = rows;
  std::string summary = "Z = " + sci(payload["Z"].get<double>());
  if (!f.op.empty()) summary += ", max residual " + sci(worst);
  return {payload, kExitPass, summary};
}

Outcome cmd_pfaffian(const Flags& f) {
  StepBudget budget(budget_limit(f));
  auto P = build_pfaffian(f.n, &budget);
  auto flat = check_flatness(P);
  json vars = json::array();
  for (std::size_t v = 0; v < P.variables.size(); ++v) vars.push_back(P.variable_name(v));
  json payload = {{"n", f.n},
                  {"size", P.size()},
                  {"standard", texts(P.standard, *P.universe)},
                  {"variables", vars},
                  {"flat", flat.holds},
                  {"flatness-pairs", flat.pairs}};
  if (!flat.holds) payload["flatness-witness"] = flat.witness;
  if (f.export_path.empty()) {
    payload["system"] = P.to_json();
  } else {
    std::ofstream o(f.export_path);
    if (!o) throw std::invalid_argument("cannot write '" + f.export_path + "'");
    o << P.to_json().dump(2) << "\n";
    payload["exported-to"] = f.export_path;
  }
  return {payload, flat.holds ? kExitPass : kExitFail,
          "Pfaffian system of size " + std::to_string(P.size()) + (flat.holds ? ", flat" : ", NOT flat")};
}

Outcome cmd_transport(const Flags& f) {
  if (f.steps < 1) throw std::invalid_argument("--steps must be >= 1");
  auto P = build_pfaffian(f.n);
  std::mt19937_64 rng(f.seed);
  EvalPoint a = f.from.empty() ? EvalPoint::random(f.n, rng, true) : read_point(f.from);
  EvalPoint b = f.to.empty() ? EvalPoint::random(f.n, rng, true) : read_point(f.to);
  // A random endpoint is redrawn until the diagonal entries keep the order
  // they have at the start, so the segment avoids every x_ii = x_jj.
  auto same_order = [&] {
    for (int i = 0; i <= f.n; ++i)
      for (int j = i + 1; j <= f.n; ++j)
        if ((a.x[i][i] - a.x[j][j]) * (b.x[i][i] - b.x[j][j]) <= 0) return false;
    return true;
  };
  while (f.to.empty() && a.n == f.n && !same_order()) b = EvalPoint::random(f.n, rng, true);
  if (a.n != f.n || b.n != f.n) throw std::invalid_argument("endpoint dimension differs from --n");
  auto F = integrate_pfaffian(P, a, b, f.steps);
  json payload = {{"n", f.n}, {"from", a.to_json()}, {"to", b.to_json()}, {"steps", f.steps},
                  {"standard", texts(P.standard, *P.universe)}, {"transported", F}};
  std::string summary = "transported Z = " + sci(F[0]);
  if (f.n <= 2) {
    auto q = pfaffian_vector(P, b);
    double worst = 0;
    for (std::size_t i = 0; i < q.size(); ++i) worst = std::max(worst, std::abs(F[i] - q[i]) / std::abs(q[i]));
    payload["quadrature"] = q;
    payload["max-relative-error"] = worst;
    summary += ", max relative error " + sci(worst);
  }
  return {payload, kExitPass, summary};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Weyl-algebra Groebner engine for the Fisher-Bingham system", "fbrank"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());
  Flags f;

  auto common = [&](CLI::App* c) {
    c->add_option("--json", f.json_path, "write the JSON report to PATH");
    c->add_option("--seed", f.seed, "seed for all randomized content");
    c->add_option("--budget", f.budget, "reduction step budget (default: FBRANK_BUDGET or built-in)");
  };
  auto system = [&](CLI::App* c) {
    c->add_option("--system", f.system, "I, It, Ip, Itp or Iph")->capture_default_str();
    c->add_option("--n", f.n, "dimension of the sphere")->required();
    c->add_option("--slack", f.slack, "sym, zero, random or random:SEED")->capture_default_str();
  };
  auto jobs = [&](CLI::App* c) { c->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber); };

  std::map<std::string, Outcome (*)(const Flags&)> handlers;
  auto sub = [&](const std::string& name, const std::string& help, Outcome (*h)(const Flags&)) {
    auto* c = app.add_subcommand(name, help);
    handlers[name] = h;
    common(c);
    return c;
  };

  auto* build = sub("build", "construct a system and print its generators", cmd_build);
  system(build);
  auto* gb = sub("gb", "run Buchberger on a system", cmd_gb);
  system(gb);
  jobs(gb);
  gb->add_option("--order", f.order, "default, prop2, h or grlex")->capture_default_str();
  gb->add_flag("--ledger", f.ledger, "include the S-pair ledger of the result");
  auto* rank = sub("rank", "holonomic rank by standard monomials", cmd_rank);
  system(rank);
  jobs(rank);
  auto* initial = sub("initial", "initial monomials and (-w,w) initial forms of the generators", cmd_initial);
  system(initial);
  initial->add_option("--order", f.order, "default, prop2, h or grlex")->capture_default_str();
  auto* check = sub("check", "replay one step of the rank proof", cmd_check);
  check->add_option("--id", f.id, "check id")->required();
  check->add_option("--n", f.n, "dimension")->required();
  check->add_option("--mutation", f.mutation, "none, drop-d2, flip-sign or wrong-order")->capture_default_str();
  auto* check_all = sub("check-all", "replay every step of the rank proof", cmd_check_all);
  check_all->add_option("--n", f.n, "dimension")->required();
  check_all->add_option("--mutation", f.mutation, "none, drop-d2, flip-sign or wrong-order")->capture_default_str();
  jobs(check_all);
  auto* zeval = sub("zeval", "evaluate Z by quadrature and apply generators", cmd_zeval);
  zeval->add_option("--n", f.n, "1 or 2")->required();
  zeval->add_option("--system", f.system, "I or It")->capture_default_str();
  zeval->add_option("--point", f.point, "EvalPoint JSON file (default: random from --seed)");
  zeval->add_option("--op", f.op, "generator name, or all");
  auto* pf = sub("pfaffian", "Pfaffian system from the diagonal basis", cmd_pfaffian);
  pf->add_option("--n", f.n, "dimension")->required();
  pf->add_option("--export", f.export_path, "write the matrices to PATH");
  auto* tr = sub("transport", "RK4 transport of the Pfaffian system along a segment", cmd_transport);
  tr->add_option("--n", f.n, "dimension")->required();
  tr->add_option("--from", f.from, "start point JSON (default: random from --seed)");
  tr->add_option("--to", f.to, "end point JSON (default: random from --seed)");
  tr->add_option("--steps", f.steps, "RK4 steps")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitPass;
  } catch (const CLI::CallForVersion& e) {
    out << tool_version() << "\n";
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const auto t0 = std::chrono::steady_clock::now();
  Outcome result;
  try {
    result = handlers.at(command)(f);
  } catch (const BudgetExceeded& e) {
    result = {{{"error", e.what()}}, kExitBudget, std::string("budget exhausted: ") + e.what()};
  } catch (const std::invalid_argument& e) {
    err << "fbrank " << command << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    result = {{{"error", e.what()}}, kExitFail, std::string("error: ") + e.what()};
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json report = {{"tool", "fbrank"},
                 {"version", tool_version()},
                 {"invocation", args},
                 {"command", command},
                 {"payload", result.payload},
                 {"exit-code", result.code},
                 {"wall-time", wall}};
  if (f.json_path.empty()) {
    out << report.dump(2) << "\n";
  } else {
    std::ofstream o(f.json_path);
    if (!o) {
      err << "cannot write '" << f.json_path << "'\n";
      return kExitUsage;
    }
    o << report.dump(2) << "\n";
    out << result.summary << "\n";
  }
  if (result.code != kExitPass && f.json_path.empty()) err << result.summary << "\n";
  return result.code;
}

}  // namespace fbrank
