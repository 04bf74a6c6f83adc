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

// Oracle for chains A - B - ... whose qubit order already matches agent order:
// P(a|x) = Tr[(rho_1 (x) ... ) prod_i (1 + (-1)^a_i O_i)/2].
CorrelationTensor chain_oracle(const QuantumNetwork& q) {
  const Scenario& sc = q.scenario;
  CMat rho = q.states[0].rho;
  for (std::size_t j = 1; j < q.states.size(); ++j) rho = kron(rho, q.states[j].rho);
  std::vector<double> t(sc.d);
  for (std::size_t xi = 0; xi < sc.n_x; ++xi) {
    auto x = sc.x_radix.decode(xi);
    for (std::size_t ai = 0; ai < sc.n_a; ++ai) {
      auto a = sc.a_radix.decode(ai);
      CMat op(1, 1);
      op(0, 0) = 1.0;
      for (int i = 0; i < sc.n; ++i) {
        const CMat& O = q.plan.obs[i][x[i]].op;
        CMat proj = 0.5 * (CMat::Identity(O.rows(), O.cols()) + (a[i] ? -1.0 : 1.0) * O);
        op = kron(op, proj);
      }
      t[sc.index(ai, xi)] = (rho * op).trace().real();
    }
  }
  return CorrelationTensor(sc, t, 1e-9);
}

double maxdiff(const CorrelationTensor& A, const CorrelationTensor& B) {
  double m = 0;
  for (std::size_t i = 0; i < A.size(); ++i) m = std::max(m, std::abs(A.table()[i] - B.table()[i]));
  return m;
}

}  // namespace

TEST(States, GhzAndNoise) {
  auto s = make_ghz(3, 0.5);
  EXPECT_EQ(s.rho.rows(), 8);
  EXPECT_NEAR(s.rho(0, 7).real(), 0.25, 1e-15);
  EXPECT_NEAR(s.rho(1, 1).real(), 0.5 / 8, 1e-15);
  double w = 0;
  for (auto& [p, m] : state_components(s)) w += p;
  EXPECT_NEAR(w, 1.0, 1e-15);
  try {
    make_epr(1.2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BadVisibility);
  }
  EXPECT_THROW(make_ghz(17), Error);
  EXPECT_THROW(make_ghz(1), Error);
}

TEST(States, ValidateRejectsBadOperators) {
  CMat r = CMat::Identity(2, 2);
  EXPECT_THROW(validate_state(r), Error);  // trace 2
  r(0, 0) = 1.5;
  r(1, 1) = -0.5;
  EXPECT_THROW(validate_state(r), Error);  // not PSD
}

TEST(Observables, Dichotomic) {
  EXPECT_NO_THROW(check_dichotomic(pauli::X()));
  EXPECT_THROW(check_dichotomic(pauli::X() * 2.0), Error);
  CMat nh = pauli::X();
  nh(0, 1) = 2.0;
  EXPECT_THROW(check_dichotomic(nh), Error);
  auto o = observable_from_bloch({{0, 0, 1}, {1, 0, 0}});
  EXPECT_EQ(o.qubits(), 2);
  EXPECT_TRUE(o.separable());
}

TEST(Bell, EprTsirelson) {
  auto q = preset_bell_epr();
  auto P = network_correlations(q);
  EXPECT_NEAR(chsh_quantity(P), 2 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(chained_bell(P, 2), 2 - std::sqrt(2.0), 1e-12);
  EXPECT_LT(maxdiff(P, chain_oracle(q)), 1e-12);
}

TEST(Bell, CorrelatorScalesWithVisibility) {
  for (double v : {0.0, 0.3, 0.7, 1.0}) {
    auto P = network_correlations(preset_bell_epr(v));
    EXPECT_NEAR(chsh_quantity(P), v * 2 * std::sqrt(2.0), 1e-12);
  }
}

TEST(Bilocal, QuantumValue) {
  auto q = preset_bilocal_epr();
  auto P = network_correlations(q);
  auto b = eval_Rk(P, q.independent);
  EXPECT_NEAR(b.I, 0.5, 1e-12);
  EXPECT_NEAR(b.J, 0.5, 1e-12);
  EXPECT_NEAR(b.R, std::sqrt(2.0), 1e-9);
  EXPECT_EQ(b.bound_class, "quantum");
  EXPECT_TRUE(check_nonsignaling(P).passed);
  EXPECT_TRUE(check_separable_factorization(P, q.independent, q));
  EXPECT_LT(maxdiff(P, chain_oracle(q)), 1e-12);
}

TEST(Bilocal, VisibilityProductScaling) {
  // each independent source contributes a factor v to I and J
  for (double v : {0.2, 0.5, 1 / std::sqrt(2.0), 0.9}) {
    auto q = preset_bilocal_epr(v);
    auto b = eval_Rk(network_correlations(q), q.independent);
    EXPECT_NEAR(b.R, v * std::sqrt(2.0), 1e-12);
  }
}

TEST(Paths, DenseMatchesFactorized) {
  std::mt19937_64 rng(21);
  for (auto base : {preset_bilocal_epr(0.8), preset_chain(4, 0.9), preset_star(3, 0.7)}) {
    for (int it = 0; it < 5; ++it) {
      auto q = random_separable_plan(base, rng);
      auto A = network_correlations_factorized(q.scenario, q.states, q.plan);
      auto B = network_correlations_dense(q.scenario, q.states, q.plan);
      EXPECT_LT(maxdiff(A, B), 1e-10);
    }
  }
}

TEST(Paths, RandomPlansMatchOracle) {
  std::mt19937_64 rng(4);
  for (int it = 0; it < 20; ++it) {
    auto q = random_separable_plan(preset_chain(4, 0.8), rng);
    EXPECT_LT(maxdiff(network_correlations(q), chain_oracle(q)), 1e-10);
  }
}

TEST(Presets, TopologiesReachQuantumValue) {
  for (int n : {3, 4, 5}) {
    auto q = preset_chain(n);
    EXPECT_NEAR(eval_Rk(network_correlations(q), q.independent).R, std::sqrt(2.0), 1e-9) << "chain " << n;
  }
  for (int n : {2, 3}) {
    auto q = preset_star(n);
    EXPECT_NEAR(eval_Rk(network_correlations(q), q.independent).R, std::sqrt(2.0), 1e-9) << "star " << n;
  }
  auto h = preset_hybrid();
  EXPECT_EQ(h.independent.k(), 3);
  auto P = network_correlations(h);
  EXPECT_NEAR(eval_Rk(P, h.independent).R, std::sqrt(2.0), 1e-9);
  EXPECT_TRUE(check_nonsignaling(P).passed);
}

TEST(Ceiling, RandomSeparablePlans) {
  std::mt19937_64 rng(99);
  auto base = preset_bilocal_epr();
  for (int it = 0; it < 300; ++it) {
    auto q = random_separable_plan(base, rng);
    EXPECT_LE(eval_Rk(network_correlations(q), q.independent).R, std::sqrt(2.0) + 1e-9);
  }
}

TEST(Separability, MatrixFormProductIsRecognized) {
  auto q = preset_bilocal_epr();
  CMat zz = kron(pauli::Z(), pauli::Z());
  q.plan.obs[1][0] = observable_from_matrix(zz);
  auto P = network_correlations(q);
  EXPECT_TRUE(check_separable_factorization(P, q.independent, q));
}

TEST(Separability, EntanglingMeasurementFails) {
  auto q = preset_bilocal_epr();
  CMat cn(4, 4);
  cn << 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, -1;
  q.plan.obs[1][0] = observable_from_matrix(cn);
  auto P = network_correlations(q);
  EXPECT_FALSE(check_separable_factorization(P, q.independent, q));
}

TEST(Plans, Inconsistent) {
  auto q = preset_bilocal_epr();
  q.plan.obs[0][0] = observable_from_bloch({{0, 0, 1}, {0, 0, 1}});  // A holds one qubit
  try {
    network_correlations(q);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InconsistentPlan);
  }
  q = preset_bilocal_epr();
  q.plan.obs[0].pop_back();
  EXPECT_THROW(network_correlations(q), Error);
}

TEST(Plans, TooManyQubits) {
  // nine EPR pairs on a chain of ten agents: 18 qubits
  EXPECT_THROW(preset_chain(10), Error);
}
