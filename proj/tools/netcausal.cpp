// Copyright 2026 The netcausal Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// netcausal command-line tool.  Exit codes: 0 success / Compatible,
// 1 Incompatible / bound violated, 2 Unknown, 64 usage error, 65 data error.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <random>

#include "netcausal/netcausal.hpp"

using namespace netcausal;

namespace {

struct Global {
  std::uint64_t seed = 1;
  double tol = -1;  // per-command default when negative
  bool json_out = true;
  bool csv_out = false;
  int threads = 1;
};

std::vector<int> parse_index_list(const std::string& s, int n) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    int v = 0;
    try {
      v = std::stoi(tok);
    } catch (...) {
      throw Error(Errc::Usage, "bad index '" + tok + "'");
    }
    if (v < 1 || v > n) throw Error(Errc::Usage, "index " + tok + " out of range");
    out.push_back(v - 1);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (...) {
      throw Error(Errc::Usage, "bad integer '" + tok + "'");
    }
  }
  return out;
}

void emit(const Global& g, const json& j) {
  if (g.csv_out)
    std::cout << csv_from_object(j);
  else
    std::cout << j.dump(2) << "\n";
}

CorrelationTensor read_dist(const std::string& dist, const std::string& scen) {
  if (dist.empty()) throw Error(Errc::Usage, "--dist is required");
  if (scen.empty()) return load_distribution(dist);
  Scenario sc = scenario_from_json(load_json(scen));
  return load_distribution(dist, &sc);
}

std::vector<int> lambda_cards(const std::string& s, const Scenario& sc) {
  if (s.empty()) return {};
  auto v = parse_int_list(s);
  if (v.size() == 1) v.assign(sc.m, v[0]);
  if (static_cast<int>(v.size()) != sc.m) throw Error(Errc::Usage, "--lambda-card needs 1 or m values");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netcausal: causal compatibility and Bell functionals for multisource networks"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  if (const char* env = std::getenv("NETCAUSAL_SEED")) {
    try {
      g.seed = std::stoull(env);
    } catch (...) {
      std::cerr << "error: NETCAUSAL_SEED is not an integer\n";
      return 64;
    }
  }
  app.add_option("--seed", g.seed, "RNG seed (default: $NETCAUSAL_SEED or 1)");
  app.add_option("--tol", g.tol, "numerical tolerance for the command");
  app.add_flag("--json", g.json_out, "JSON output (default)");
  app.add_flag("--csv", g.csv_out, "CSV output");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);

  // check-compat / oracle
  std::string scen, dist, cls_text = "(1)|(2)|(3)", lam, indep, export_csv;
  int restarts = 8, max_iters = 2000, cap = 16, grid = 16;
  double cval = 1.0;
  bool use_oracle = false;
  auto* cc = app.add_subcommand("check-compat", "decide compatibility with a causal class");
  cc->add_option("--scenario", scen, "scenario JSON (overrides the one in --dist)");
  cc->add_option("--dist", dist, "distribution JSON")->required();
  cc->add_option("--class", cls_text, "parent-input sets, e.g. \"(1)|(2)|(1,2,3)\"");
  cc->add_option("--lambda-card", lam, "source cardinality (one value or comma list)");
  cc->add_option("--cap", cap, "cardinality cap")->check(CLI::PositiveNumber);
  cc->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
  cc->add_option("--max-iters", max_iters)->check(CLI::PositiveNumber);
  cc->add_option("--c", cval, "class parameter c in [1,2]");
  cc->add_option("--independent", indep, "independent agents, e.g. 1,3");
  cc->add_flag("--oracle", use_oracle, "fall back to the brute-force oracle");
  cc->add_option("--oracle-grid", grid)->check(CLI::Range(1, 64));
  cc->add_option("--export-matrix", export_csv, "write the strategy matrix as CSV");

  std::string o_dist, o_scen, o_cls = "(1)|(2)|(3)", o_lam;
  int o_grid = 32;
  auto* orc = app.add_subcommand("oracle", "brute-force oracle verdict");
  orc->add_option("--scenario", o_scen);
  orc->add_option("--dist", o_dist)->required();
  orc->add_option("--class", o_cls);
  orc->add_option("--lambda-card", o_lam);
  orc->add_option("--grid", o_grid)->check(CLI::Range(1, 64));

  // bell
  std::string b_dist, b_scen, functional = "rk", b_ind;
  int settings = 2, fixI = 0, fixJ = 1;
  auto* bell = app.add_subcommand("bell", "evaluate network Bell functionals");
  bell->add_option("--dist", b_dist)->required();
  bell->add_option("--scenario", b_scen);
  bell->add_option("--functional", functional)
      ->check(CLI::IsMember({"rk", "ij", "cyclic", "svetlichny", "cca", "chsh", "chained", "ns"}));
  bell->add_option("--independent", b_ind, "independent agents, e.g. 1,3");
  bell->add_option("--settings", settings, "settings for the chained quantity")->check(CLI::Range(2, 64));
  bell->add_option("--fix-i", fixI, "complement input for I")->check(CLI::Range(0, 1));
  bell->add_option("--fix-j", fixJ, "complement input for J")->check(CLI::Range(0, 1));

  // quantum
  std::string preset = "bilocal-epr", emit_path;
  double vis = 1.0;
  auto* qu = app.add_subcommand("quantum", "simulate a preset quantum network");
  qu->add_option("--preset", preset, "bell-epr | bilocal-epr | chain:n | star:n | hybrid");
  qu->add_option("--visibility", vis, "per-source visibility v");
  qu->add_option("--emit", emit_path, "write the distribution JSON here");

  // classify
  int cn = 3, cm_ = 2, samples = 100;
  std::string dot_path;
  auto* cl = app.add_subcommand("classify", "tripartite causal hierarchy");
  cl->add_option("--n", cn);
  cl->add_option("--m", cm_);
  cl->add_option("--samples", samples)->check(CLI::PositiveNumber);
  cl->add_option("--dot", dot_path, "write the lattice as Graphviz DOT");

  // security
  std::string s_preset = "bilocal-epr", eve = "random", merge, rows_path;
  double s_vis = 0.9;
  int sweeps = 100;
  auto* se = app.add_subcommand("security", "eavesdropper bound and simulation");
  se->add_option("--preset", s_preset, "chain:n | star:n | hybrid | bilocal-epr");
  se->add_option("--visibility", s_vis);
  se->add_option("--eve", eve, "random | copy | constant | file.json");
  se->add_option("--sweeps", sweeps)->check(CLI::PositiveNumber);
  se->add_option("--merge", merge, "sources merged by the eavesdropper, e.g. 1,2");
  se->add_option("--rows", rows_path, "write per-sweep CSV rows (v,R_k,bound,D)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 64;
  }
  if (g.csv_out && g.json_out) g.json_out = false;

  try {
    json cfgj{{"seed", g.seed}, {"threads", g.threads}};
    if (*cc) {
      auto P = read_dist(dist, scen);
      SolverConfig cfg;
      cfg.seed = g.seed;
      cfg.threads = g.threads;
      cfg.restarts = restarts;
      cfg.max_iters = max_iters;
      cfg.cap = cap;
      cfg.c = cval;
      cfg.use_oracle = use_oracle;
      cfg.oracle_grid = grid;
      if (g.tol > 0) cfg.tol_feas = g.tol;
      cfg.source_cards = lambda_cards(lam, P.scenario());
      if (!indep.empty()) cfg.independent = make_independent_set(P.scenario().n, parse_index_list(indep, P.scenario().n));
      const CausalClass cls = parse_class(cls_text);
      if (!export_csv.empty())
        save_text(export_csv, strategy_matrix_csv(detail::make_model(P.scenario(), cls, cfg).matrix()));
      auto v = network_feasibility(P, cls, cfg);
      cfgj.update({{"command", "check-compat"}, {"class", cls.str()}, {"restarts", cfg.restarts},
                   {"max_iters", cfg.max_iters}, {"tol_feas", cfg.tol_feas}, {"c", cfg.c}, {"cap", cfg.cap},
                   {"lambda_card", cfg.source_cards}, {"oracle", cfg.use_oracle}});
      json out{{"config", cfgj}, {"verdict", to_json(v)}};
      emit(g, out);
      return exit_code(v.status);
    }
    if (*orc) {
      auto P = read_dist(o_dist, o_scen);
      SolverConfig cfg;
      cfg.seed = g.seed;
      if (g.tol > 0) cfg.tol_feas = g.tol;
      cfg.source_cards = lambda_cards(o_lam, P.scenario());
      const CausalClass cls = parse_class(o_cls);
      auto v = brute_force_oracle(P, cls, o_grid, cfg);
      cfgj.update({{"command", "oracle"}, {"class", cls.str()}, {"grid", o_grid}, {"tol_feas", cfg.tol_feas},
                   {"lambda_card", cfg.source_cards}});
      emit(g, json{{"config", cfgj}, {"verdict", to_json(v)}});
      return exit_code(v.status);
    }
    if (*bell) {
      auto P = read_dist(b_dist, b_scen);
      const Scenario& sc = P.scenario();
      const double tol = g.tol > 0 ? g.tol : kFuncTol;
      IndependentSet ind = b_ind.empty() ? default_independent_set(sc) : make_independent_set(sc.n, parse_index_list(b_ind, sc.n));
      cfgj.update({{"command", "bell"}, {"functional", functional}, {"independent", indices_json(ind)},
                   {"fix_i", fixI}, {"fix_j", fixJ}, {"tol", tol}});
      json res;
      bool violated = false;
      if (functional == "rk" || functional == "ij") {
        auto b = eval_Rk(P, ind, fixI, fixJ);
        res = to_json(b);
        violated = b.R > 1.0 + tol;
      } else if (functional == "cyclic") {
        const double v = eval_cyclic(P, ind, fixI, fixJ);
        res = {{"cyclic", v}, {"hv_bound", 1.0}, {"ns_bound", 2.0}};
        violated = v > 1.0 + tol;
      } else if (functional == "svetlichny") {
        const double v = eval_svetlichny(P);
        res = {{"svetlichny", v}, {"bound", 4.0}};
        violated = v > 4.0 + tol;
      } else if (functional == "cca") {
        const double v = eval_cca(P);
        res = {{"cca", v}, {"bound", 6.0}};
        violated = v > 6.0 + tol;
      } else if (functional == "chsh") {
        const double v = chsh_quantity(P);
        res = {{"C2", v}, {"bound", 2.0}, {"I2", i2_from_chsh(std::min(4.0, v))}};
        violated = v > 2.0 + tol;
      } else if (functional == "chained") {
        const double v = chained_bell(P, settings);
        res = {{"chained", v}, {"settings", settings}, {"local_min", settings - 1.0}};
        violated = v < settings - 1.0 - tol;
      } else {
        auto r = check_nonsignaling(P, tol);
        res = to_json(r);
        violated = !r.passed;
      }
      emit(g, json{{"config", cfgj}, {"result", res}, {"violated", violated}});
      return violated ? 1 : 0;
    }
    if (*qu) {
      auto q = preset_network(preset, vis);
      auto P = network_correlations(q);
      if (!emit_path.empty()) save_text(emit_path, to_json(P).dump(2) + "\n");
      auto b = eval_Rk(P, q.independent);
      cfgj.update({{"command", "quantum"}, {"preset", preset}, {"visibility", vis}, {"emit", emit_path}});
      json out{{"config", cfgj},
               {"independent", indices_json(q.independent)},
               {"bell", to_json(b)},
               {"nonsignaling", to_json(check_nonsignaling(P))},
               {"separable_factorization", check_separable_factorization(P, q.independent, q)}};
      if (emit_path.empty()) out["distribution"] = to_json(P);
      emit(g, out);
      return 0;
    }
    if (*cl) {
      if (cn != 3 || cm_ != 2) throw Error(Errc::Usage, "classify supports --n 3 --m 2 only");
      SolverConfig cfg;
      cfg.seed = g.seed;
      auto rep = classify_hierarchy(samples, g.seed, cfg);
      if (!dot_path.empty()) save_text(dot_path, hierarchy_dot(rep));
      cfgj.update({{"command", "classify"}, {"n", cn}, {"m", cm_}, {"samples", samples}, {"dot", dot_path}});
      emit(g, json{{"config", cfgj}, {"hierarchy", to_json(rep)}});
      return 0;
    }
    if (*se) {
      auto q = preset_network(s_preset, s_vis);
      auto cmod = components_from_quantum(q);
      std::vector<std::vector<int>> groups;
      if (!merge.empty()) {
        auto mg = parse_index_list(merge, q.scenario.m);
        std::vector<char> in(q.scenario.m, 0);
        for (int j : mg) in[j] = 1;
        groups.push_back(mg);
        for (int j = 0; j < q.scenario.m; ++j)
          if (!in[j]) groups.push_back({j});
      } else {
        groups = singleton_groups(q.scenario.m);
      }
      std::mt19937_64 rng(g.seed);
      std::optional<EveModel> fixed;
      if (eve == "copy") fixed = copy_eve(cmod, groups);
      else if (eve == "constant") fixed = constant_eve(cmod, groups);
      else if (eve != "random") {
        fixed = eve_from_json(load_json(eve), cmod);
        groups = fixed->groups;
      }
      auto cx = prepare_security(cmod, q.independent, groups);
      int viol = 0;
      double worst = 0;
      std::string rows = csv_row({"v", "R_k", "bound", "D"});
      SecurityReport last;
      const int n = fixed ? 1 : sweeps;
      for (int s = 0; s < n; ++s) {
        EveModel ev = fixed ? *fixed : random_eve(cmod, rng, groups);
        last = simulate_eavesdropper(cx, ev);
        viol += !last.satisfied;
        worst = std::max(worst, *last.D_observed);
        rows += csv_row({json(s_vis).dump(), json(last.R).dump(), json(last.bound).dump(),
                         json(*last.D_observed).dump()});
      }
      if (!rows_path.empty()) save_text(rows_path, rows);
      cfgj.update({{"command", "security"}, {"preset", s_preset}, {"visibility", s_vis}, {"eve", eve},
                   {"sweeps", n}, {"merge", merge}});
      json rep = to_json(last);
      rep["D_observed"] = worst;
      rep["satisfied"] = viol == 0;
      emit(g, json{{"config", cfgj}, {"report", rep}, {"violations", viol}});
      return viol ? 1 : 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Errc::Usage ? 64 : 65;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 65;
  }
  return 64;
}
