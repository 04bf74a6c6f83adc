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

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "netcausal/netcausal.hpp"

using namespace netcausal;

namespace {

std::string tmp_dir() {
  auto d = std::filesystem::temp_directory_path() / "netcausal_io_test";
  std::filesystem::create_directories(d);
  return d.string();
}

}  // namespace

TEST(Json, ScenarioRoundTrip) {
  auto sc = build_scenario(3, 2, {{0}, {0, 1}, {1}}, {2, 3, 2}, {2, 2, 4});
  auto j = to_json(sc);
  EXPECT_EQ(j["format"], "netcausal/1");
  EXPECT_EQ(j["sharing"][1], json::array({1, 2}));  // 1-based on disk
  EXPECT_EQ(scenario_from_json(j), sc);
}

TEST(Json, DistributionRoundTripIsBitExact) {
  std::mt19937_64 rng(3);
  auto q = random_separable_plan(preset_bilocal_epr(0.83), rng);
  auto P = network_correlations(q);
  auto text = to_json(P).dump();
  auto Q = distribution_from_json(json::parse(text));
  EXPECT_EQ(Q.scenario(), P.scenario());
  EXPECT_EQ(Q.table(), P.table());
}

TEST(Json, ScenarioByRelativePath) {
  const auto d = tmp_dir();
  save_text(d + "/sc.json", to_json(bell_scenario()).dump());
  json dist{{"format", "netcausal/1"}, {"scenario", "sc.json"}, {"table", std::vector<double>(16, 0.25)}};
  save_text(d + "/p.json", dist.dump());
  auto P = load_distribution(d + "/p.json");
  EXPECT_EQ(P.scenario(), bell_scenario());
}

TEST(Json, Errors) {
  auto code = [](const std::function<void()>& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::Usage;
  };
  EXPECT_EQ(code([] { load_json("/nonexistent/x.json"); }), Errc::Data);
  EXPECT_EQ(code([] { scenario_from_json(json{{"format", "other/2"}, {"agents", 2}}); }), Errc::Data);
  EXPECT_EQ(code([] { scenario_from_json(json{{"agents", 2}}); }), Errc::Data);
  EXPECT_EQ(code([] { scenario_from_json(json{{"agents", 2}, {"sources", 1}, {"sharing", {{0}, {1}}}}); }),
            Errc::BadIndex);
  auto j = to_json(uniform_tensor(bell_scenario()));
  j["table"][0] = 0.3;
  EXPECT_EQ(code([&] { distribution_from_json(j); }), Errc::Data);
  j.erase("scenario");
  EXPECT_EQ(code([&] { distribution_from_json(j); }), Errc::Data);
  const auto d = tmp_dir();
  save_text(d + "/bad.json", "{not json");
  EXPECT_EQ(code([&] { load_json(d + "/bad.json"); }), Errc::Data);
}

TEST(Json, ReportsSerialize) {
  auto P = network_correlations(preset_bilocal_epr());
  auto v = network_feasibility(P, local_class(3));
  auto j = to_json(v);
  EXPECT_EQ(j["status"], "Incompatible");
  EXPECT_EQ(j["certificate"], "inequality");
  auto b = to_json(eval_Rk(P, default_independent_set(P.scenario())));
  EXPECT_EQ(b["k"], 2);
  EXPECT_EQ(b["violates"]["classical"], true);
  auto ns = to_json(check_nonsignaling(P));
  EXPECT_TRUE(ns["violating_party"].is_null());
}

TEST(Csv, Rfc4180) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_row({"x", "y\nz"}), "x,\"y\nz\"\r\n");
  json j{{"a", 1}, {"b", {{"c", "t,u"}, {"d", nullptr}}}, {"e", {1, 2}}};
  EXPECT_EQ(csv_from_object(j), "a,b.c,b.d,e\r\n1,\"t,u\",,\"[1,2]\"\r\n");
}

TEST(Csv, StrategyMatrix) {
  auto M = StrategyModel(bell_scenario(), local_class(2)).matrix();
  auto s = strategy_matrix_csv(M);
  std::size_t lines = 0;
  for (std::size_t p = 0; (p = s.find("\r\n", p)) != std::string::npos; p += 2) ++lines;
  EXPECT_EQ(lines, 17u);  // header + 16 rows
}

TEST(Eve, FromJson) {
  auto cm = components_from_quantum(preset_bilocal_epr(0.85));
  json t0{{"n_e", 2}, {"n_z", 1}, {"p", std::vector<double>(2 * 5, 0.5)}};
  json j{{"groups", {{1}, {2}}}, {"tables", {t0, t0}}};
  auto ev = eve_from_json(j, cm);
  EXPECT_EQ(ev.tables[0].K, 5);
  auto r = simulate_eavesdropper(cm, default_independent_set(cm.scenario), ev);
  EXPECT_NEAR(*r.D_observed, 0.0, 1e-15);
  j["groups"] = {{1}, {3}};
  EXPECT_THROW(eve_from_json(j, cm), Error);
}
