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

#include <cmath>
#include <random>

#include "netcausal/netcausal.hpp"

using namespace netcausal;

namespace {

CorrelationTensor pr_box() {
  return tensor_from(bell_scenario(), [](const int* a, const int* x) {
    return ((a[0] ^ a[1]) == (x[0] & x[1])) ? 0.5 : 0.0;
  });
}

// Oracle: sum over joint source values of prod_k mu_k(l_k) * column(l).
std::vector<double> product_model(const StrategyModel& m, const std::vector<std::vector<double>>& mu) {
  const Scenario& sc = m.scenario();
  std::vector<double> t(sc.d, 0.0);
  std::vector<std::uint32_t> col(sc.n_x);
  for (std::size_t c = 0; c < m.n_cols(); ++c) {
    auto lam = m.joint().decode(c);
    double w = 1;
    for (std::size_t k = 0; k < lam.size(); ++k) w *= mu[k][lam[k]];
    m.column(lam.data(), col.data());
    for (std::size_t xi = 0; xi < sc.n_x; ++xi) t[sc.index(col[xi], xi)] += w;
  }
  return t;
}

double linf(const std::vector<double>& a, const std::vector<double>& b) {
  double r = 0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

}  // namespace

TEST(Lp, DeterministicAndPr) {
  StrategyModel m(bell_scenario(), local_class(2));
  auto M = m.matrix();
  auto v = lp_membership(M.column(5), M);
  EXPECT_EQ(v.status, Status::Compatible);
  auto w = lp_membership(pr_box(), M);
  EXPECT_EQ(w.status, Status::Incompatible);
  EXPECT_EQ(w.certificate, Certificate::Lp);
  EXPECT_NEAR(w.residual, 0.125, 1e-9);
  try {
    lp_membership(parity_witness(), M);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionMismatch);
  }
}

TEST(Lp, ChshThresholdOnPrMixture) {
  auto M = StrategyModel(bell_scenario(), local_class(2)).matrix();
  auto U = uniform_tensor(bell_scenario());
  EXPECT_EQ(lp_membership(mix(pr_box(), U, 0.5), M).status, Status::Compatible);
  EXPECT_EQ(lp_membership(mix(pr_box(), U, 0.51), M).status, Status::Incompatible);
}

TEST(Oracle, AgreesWithLp) {
  auto sc = bell_scenario();
  StrategyModel m(sc, local_class(2));
  auto M = m.matrix();
  std::mt19937_64 rng(17);
  int certified = 0;
  for (int it = 0; it < 30; ++it) {
    auto w = detail::dirichlet1(M.n_cols(), rng);
    const double t = std::uniform_real_distribution<>(0, 1)(rng);
    auto P = mix(pr_box(), CorrelationTensor(sc, M.apply(w), 1e-9), t);
    auto a = lp_membership(P, M, 1e-7);
    auto b = brute_force_oracle(P, local_class(2), 32);
    if (b.status == Status::Unknown) continue;
    ++certified;
    EXPECT_EQ(a.status, b.status) << "instance " << it;
    if (b.status == Status::Compatible) {
      ASSERT_EQ(b.weights.size(), 1u);
      EXPECT_LE(linf(M.apply(b.weights[0]), P.table()), 1e-7);
    }
  }
  EXPECT_GT(certified, 20);
}

TEST(Oracle, MultiBlockGridHit) {
  auto sc = bilocal_scenario();
  SolverConfig cfg;
  cfg.source_cards = {2, 2};
  auto model = detail::make_model(sc, local_class(3), cfg);
  ASSERT_EQ(model.n_cols(), 4u);
  // block 0 is solved exactly, block 1 must sit on the grid
  std::vector<std::vector<double>> mu{{0.4, 0.6}, {0.25, 0.75}};
  CorrelationTensor P(sc, product_model(model, mu), 1e-9);
  auto v = brute_force_oracle(P, local_class(3), 4, cfg);
  EXPECT_EQ(v.status, Status::Compatible);
  EXPECT_LE(v.residual, cfg.tol_feas);
}

TEST(Oracle, Preconditions) {
  auto sc = bilocal_scenario();
  EXPECT_THROW(brute_force_oracle(parity_witness(), local_class(3), 16), Error);  // 256 columns
  EXPECT_THROW(brute_force_oracle(pr_box(), local_class(2), 65), Error);
}

TEST(Feasibility, QuantumBilocalRefutedByInequality) {
  auto P = network_correlations(preset_bilocal_epr());
  auto v = network_feasibility(P, local_class(3));
  EXPECT_EQ(v.status, Status::Incompatible);
  EXPECT_EQ(v.certificate, Certificate::Inequality);
  EXPECT_EQ(v.binding, "R_k<=c");
  // with c = sqrt2 the inequality no longer fires
  SolverConfig cfg;
  cfg.c = std::sqrt(2.0);
  cfg.restarts = 2;
  cfg.max_iters = 200;
  auto w = network_feasibility(P, local_class(3), cfg);
  EXPECT_NE(w.certificate, Certificate::Inequality);
}

TEST(Feasibility, SoundCompatibleOnSampledBoxes) {
  auto sc = bilocal_scenario();
  StrategyModel m(sc, local_class(3), 16, 1, 4);
  std::mt19937_64 rng(8);
  for (int it = 0; it < 3; ++it) {
    auto P = sample_compatible(m, rng);
    SolverConfig cfg;
    cfg.seed = it + 1;
    auto v = network_feasibility(P, local_class(3), cfg);
    ASSERT_EQ(v.status, Status::Compatible) << v.detail;
    auto model = detail::make_model(sc, local_class(3), cfg);
    EXPECT_LE(linf(product_model(model, v.weights), P.table()), cfg.tol_feas);
    for (auto& mu : v.weights) {
      double s = 0;
      for (double x : mu) {
        EXPECT_GE(x, 0.0);
        s += x;
      }
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
  }
}

TEST(Feasibility, NoisyQuantumBoxIsBilocal) {
  auto P = network_correlations(preset_bilocal_epr());
  auto v = network_feasibility(mix(P, uniform_tensor(P.scenario()), 0.3), local_class(3));
  EXPECT_EQ(v.status, Status::Compatible);
  EXPECT_LE(v.residual, 1e-7);
}

TEST(Feasibility, SignalingIsRefuted) {
  auto sig = tensor_from(bell_scenario(), [](const int* a, const int* x) { return a[1] == x[0] ? 0.5 : 0.0; });
  auto v = network_feasibility(sig, local_class(2));
  EXPECT_EQ(v.status, Status::Incompatible);
  EXPECT_EQ(v.certificate, Certificate::Inequality);
  // agent 2 reading x1 is exactly what (1)|(1,2) allows; 4 x 16 response
  // pairs need a cap of 64 for the alphabet to be exhaustive
  SolverConfig cfg;
  cfg.cap = 64;
  auto w = network_feasibility(sig, parse_class("(1)|(1,2)"), cfg);
  EXPECT_EQ(w.status, Status::Compatible);
  EXPECT_EQ(causal_marginal_violation(sig, parse_class("(1)|(1,2)")).value, 0.0);
}

TEST(Feasibility, RelaxedClassContainsPr) {
  SolverConfig cfg;
  cfg.cap = 64;
  auto v = network_feasibility(pr_box(), parse_class("(1)|(1,2)"), cfg);
  EXPECT_EQ(v.status, Status::Compatible);
  EXPECT_FALSE(v.capped);
  // the capped default alphabet cannot certify anything negative
  auto u = brute_force_oracle(pr_box(), parse_class("(1)|(1,2)"), 32);
  EXPECT_NE(u.status, Status::Incompatible);
  // R_1 = C2 / 2 fires for the local class
  auto w = network_feasibility(pr_box(), local_class(2));
  EXPECT_EQ(w.status, Status::Incompatible);
  EXPECT_EQ(w.certificate, Certificate::Inequality);
  SolverConfig nocert;
  nocert.c = 2.0;
  auto x = network_feasibility(pr_box(), local_class(2), nocert);
  EXPECT_EQ(x.status, Status::Incompatible);
  EXPECT_EQ(x.certificate, Certificate::Lp);
}

TEST(Feasibility, SeedDeterminism) {
  auto P = network_correlations(preset_bilocal_epr());
  auto Q = mix(P, uniform_tensor(P.scenario()), 0.4);
  SolverConfig cfg;
  cfg.seed = 42;
  auto a = network_feasibility(Q, local_class(3), cfg), b = network_feasibility(Q, local_class(3), cfg);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.residual, b.residual);
}

TEST(Feasibility, ThreadsGiveSameVerdict) {
  auto P = network_correlations(preset_bilocal_epr());
  auto Q = mix(P, uniform_tensor(P.scenario()), 0.45);
  SolverConfig c1, c2;
  c2.threads = 3;
  EXPECT_EQ(network_feasibility(Q, local_class(3), c1).status, network_feasibility(Q, local_class(3), c2).status);
}

TEST(Config, Validation) {
  auto P = pr_box();
  SolverConfig c;
  c.c = 2.5;
  EXPECT_THROW(network_feasibility(P, local_class(2), c), Error);
  c = {};
  c.tol_feas = 0;
  EXPECT_THROW(network_feasibility(P, local_class(2), c), Error);
  c = {};
  c.source_cards = {20};
  try {
    network_feasibility(P, local_class(2), c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Overflow);
  }
  EXPECT_THROW(network_feasibility(P, local_class(3)), Error);
}

TEST(Ray, PrBoxHalf) {
  auto r = star_ray_membership(pr_box(), local_class(2));
  EXPECT_NEAR(r.t_star, 0.5, 1e-3);
  EXPECT_TRUE(r.hi_certified);
  EXPECT_EQ(r.unknown, 0);
}

TEST(Ray, UniformIsCompatible) {
  auto r = star_ray_membership(uniform_tensor(bell_scenario()), local_class(2));
  EXPECT_DOUBLE_EQ(r.t_star, 1.0);
}

TEST(Ray, LocalCertificateIsMonotone) {
  // R_2 of the noisy quantum box scales as sqrt(2 t)
  auto P = network_correlations(preset_bilocal_epr());
  auto U = uniform_tensor(P.scenario());
  for (double t : {0.2, 0.5, 0.8})
    EXPECT_NEAR(eval_Rk(mix(P, U, t), default_independent_set(P.scenario())).R, std::sqrt(2.0 * t), 1e-12);
}
