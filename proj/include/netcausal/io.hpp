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

// JSON and CSV formats.
//
// Indices in files are 1-based (sources in "sharing"); tables are flat with
// the outputs (a_1..a_n) fast and the inputs (x_1..x_n) slow, each a
// little-endian mixed radix with agent 1 fastest.

#pragma once

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "netcausal/compat.hpp"
#include "netcausal/functionals.hpp"
#include "netcausal/hierarchy.hpp"
#include "netcausal/scenario.hpp"
#include "netcausal/security.hpp"

namespace netcausal {

using json = nlohmann::ordered_json;

inline constexpr const char* kFormat = "netcausal/1";

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Data, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::Data, "malformed JSON in '" + path + "': " + e.what());
  }
}

inline void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Data, "cannot write '" + path + "'");
  out << text;
}

inline void check_format(const json& j) {
  if (j.contains("format") && j["format"] != kFormat)
    throw Error(Errc::Data, "unsupported format " + j["format"].dump());
}

inline json to_json(const Scenario& sc) {
  json sh = json::array();
  for (auto& s : sc.sharing) {
    json a = json::array();
    for (int j : s) a.push_back(j + 1);
    sh.push_back(a);
  }
  return json{{"format", kFormat}, {"agents", sc.n},     {"sources", sc.m},
              {"sharing", sh},     {"inputs", sc.inputs}, {"outputs", sc.outputs}};
}

inline Scenario scenario_from_json(const json& j) {
  try {
    check_format(j);
    const int n = j.at("agents").get<int>(), m = j.at("sources").get<int>();
    std::vector<std::vector<int>> sh;
    for (auto& s : j.at("sharing")) {
      std::vector<int> v;
      for (auto& e : s) v.push_back(e.get<int>() - 1);
      sh.push_back(v);
    }
    auto in = j.contains("inputs") ? j["inputs"].get<std::vector<int>>() : std::vector<int>(n, 2);
    auto out = j.contains("outputs") ? j["outputs"].get<std::vector<int>>() : std::vector<int>(n, 2);
    for (auto& s : sh)
      for (int& v : s)
        if (v < 0) v = m;  // 0 in a 1-based file: reported as BadIndex
    return build_scenario(n, m, sh, in, out);
  } catch (const json::exception& e) {
    throw Error(Errc::Data, std::string("bad scenario JSON: ") + e.what());
  }
}

inline json to_json(const CorrelationTensor& P) {
  return json{{"format", kFormat}, {"scenario", to_json(P.scenario())}, {"table", P.table()}};
}

// "scenario" may be inline or a path relative to base_dir.
inline CorrelationTensor distribution_from_json(const json& j, const std::string& base_dir = ".",
                                                const Scenario* given = nullptr, double tol = kNormTol) {
  try {
    check_format(j);
    Scenario sc;
    if (given) {
      sc = *given;
    } else if (!j.contains("scenario")) {
      throw Error(Errc::Data, "distribution has no scenario");
    } else if (j["scenario"].is_string()) {
      auto p = std::filesystem::path(j["scenario"].get<std::string>());
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      sc = scenario_from_json(load_json(p.string()));
    } else {
      sc = scenario_from_json(j["scenario"]);
    }
    auto t = j.at("table").get<std::vector<double>>();
    return CorrelationTensor(sc, std::move(t), tol);
  } catch (const json::exception& e) {
    throw Error(Errc::Data, std::string("bad distribution JSON: ") + e.what());
  }
}

inline CorrelationTensor load_distribution(const std::string& path, const Scenario* given = nullptr,
                                           double tol = kNormTol) {
  auto dir = std::filesystem::path(path).parent_path().string();
  return distribution_from_json(load_json(path), dir.empty() ? "." : dir, given, tol);
}

inline json to_json(const NsReport& r) {
  json j{{"passed", r.passed}, {"max_violation", r.max_violation}, {"tol", r.tol}};
  j["violating_party"] = r.violating_party ? json(*r.violating_party + 1) : json(nullptr);
  return j;
}

inline json indices_json(const IndependentSet& s) {
  json a = json::array();
  for (int i : s.indices) a.push_back(i + 1);
  return a;
}

inline json to_json(const BellReport& b) {
  return json{{"I", b.I},
              {"J", b.J},
              {"R_k", b.R},
              {"k", b.k},
              {"bound_class", b.bound_class},
              {"violates", {{"classical", b.violates_classical},
                            {"quantum", b.violates_quantum},
                            {"nonsignaling", b.violates_nonsignaling}}}};
}

inline json to_json(const Verdict& v) {
  json j{{"status", status_name(v.status)},
         {"certificate", certificate_name(v.certificate)},
         {"residual", std::isfinite(v.residual) ? json(v.residual) : json(nullptr)},
         {"cardinality_used", v.cardinality_used},
         {"cardinality_capped", v.capped},
         {"binding", v.binding},
         {"restarts_run", v.restarts_run},
         {"detail", v.detail}};
  if (v.status == Status::Compatible) j["weights"] = v.weights;
  return j;
}

inline json to_json(const SecurityReport& r) {
  return json{{"R_k", r.R},
              {"k", r.k},
              {"independent", indices_json(r.independent)},
              {"bound", r.bound},
              {"D_observed", r.D_observed ? json(*r.D_observed) : json(nullptr)},
              {"D_average", r.D_average},
              {"satisfied", r.satisfied}};
}

inline json to_json(const HierarchyReport& r) {
  json nodes = json::array();
  for (std::size_t g = 0; g < r.groups.size(); ++g) {
    json mem = json::array();
    for (auto& c : r.groups[g].members) mem.push_back(c.str());
    nodes.push_back({{"id", g},
                     {"label", r.groups[g].label},
                     {"members", mem},
                     {"svetlichny_listed", r.groups[g].svetlichny_listed},
                     {"ns_flagged", r.groups[g].ns_flagged}});
  }
  json edges = json::array();
  for (auto [a, b] : r.edges) edges.push_back({{"from", a}, {"to", b}, {"kind", "implies"}});
  json coll = json::array();
  for (auto& c : r.collapses)
    coll.push_back({{"g1", c.g1.str()},
                    {"g2", c.g2.str()},
                    {"forward", implication_name(c.forward)},
                    {"backward", implication_name(c.backward)},
                    {"status", (c.forward != Implication::Refuted && c.backward != Implication::Refuted)
                                   ? "asserted collapse, numerically unrefuted"
                                   : "refuted"},
                    {"note", c.note}});
  json levels = json::object();
  for (auto& [L, cs] : r.levels) {
    json a = json::array();
    for (auto& c : cs) a.push_back(c.str());
    levels[std::to_string(L)] = a;
  }
  json sv = json::array();
  for (auto& [c, b] : r.svetlichny_bounds) sv.push_back({{"class", c.str()}, {"svetlichny_max", b}});
  return json{{"raw_classes", r.raw},
              {"mirror_orbits", r.orbits},
              {"equivalence_classes", r.groups.size()},
              {"levels", levels},
              {"nodes", nodes},
              {"edges", edges},
              {"collapses", coll},
              {"star_marginal_locality", {{"samples", r.marginal_samples}, {"local", r.marginal_local}}},
              {"cyclic_vs_glhv", {{"result", implication_name(r.cyclic_vs_local.kind)},
                                  {"reason", r.cyclic_vs_local.reason}}},
              {"parity_witness", {{"cca", r.witness_cca}, {"svetlichny", r.witness_svetlichny}}},
              {"svetlichny_bounds", sv},
              {"cyclic_cca_max", r.cyclic_cca_bound}};
}

// ---------------------------------------------------------------------------
// RFC 4180 CSV.

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) {
    if (c == '"') o += '"';
    o += c;
  }
  return o + "\"";
}

inline std::string csv_row(const std::vector<std::string>& f) {
  std::string s;
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + csv_field(f[i]);
  return s + "\r\n";
}

inline std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

// Header + one row from the scalar members of an object (nested objects are
// flattened with '.', arrays serialized as JSON text).
inline std::string csv_from_object(const json& j) {
  std::vector<std::string> h, r;
  std::function<void(const std::string&, const json&)> walk = [&](const std::string& pre, const json& o) {
    for (auto it = o.begin(); it != o.end(); ++it) {
      const std::string k = pre.empty() ? it.key() : pre + "." + it.key();
      if (it->is_object()) {
        walk(k, *it);
      } else {
        h.push_back(k);
        r.push_back(scalar_text(*it));
      }
    }
  };
  walk("", j);
  return csv_row(h) + csv_row(r);
}

inline std::string strategy_matrix_csv(const StrategyMatrix& M) {
  std::string s;
  std::vector<std::string> h{"row"};
  for (std::size_t c = 0; c < M.n_cols(); ++c) h.push_back("col" + std::to_string(c));
  s += csv_row(h);
  const Scenario& sc = M.scenario;
  for (std::size_t xi = 0; xi < sc.n_x; ++xi)
    for (std::size_t ai = 0; ai < sc.n_a; ++ai) {
      std::vector<std::string> r{std::to_string(sc.index(ai, xi))};
      for (std::size_t c = 0; c < M.n_cols(); ++c) r.push_back(M.cols[c][xi] == ai ? "1" : "0");
      s += csv_row(r);
    }
  return s;
}

// Eve model file: {"groups": [[1],[2]], "tables": [{"n_e":2,"n_z":2,"ctx_agent":null,"p":[...]}]}
inline EveModel eve_from_json(const json& j, const ComponentModel& cm) {
  try {
    EveModel ev;
    for (auto& g : j.at("groups")) {
      std::vector<int> v;
      for (auto& e : g) v.push_back(e.get<int>() - 1);
      ev.groups.push_back(v);
    }
    detail::check_groups(cm, ev.groups);
    auto K = detail::group_cards(cm, ev.groups);
    std::size_t g = 0;
    for (auto& t : j.at("tables")) {
      EveTable et;
      et.n_e = t.value("n_e", 2);
      et.n_z = t.value("n_z", 2);
      et.K = g < K.size() ? K[g] : 1;
      if (t.contains("ctx_agent") && !t["ctx_agent"].is_null()) {
        et.ctx_agent = t["ctx_agent"].get<int>() - 1;
        if (et.ctx_agent < 0 || et.ctx_agent >= cm.scenario.n) throw Error(Errc::BadIndex, "ctx_agent out of range");
        et.n_ctx = cm.scenario.outputs[et.ctx_agent] * cm.scenario.inputs[et.ctx_agent];
      }
      et.p = t.at("p").get<std::vector<double>>();
      ev.tables.push_back(et);
      ++g;
    }
    return ev;
  } catch (const json::exception& e) {
    throw Error(Errc::Data, std::string("bad eve JSON: ") + e.what());
  }
}

}  // namespace netcausal
