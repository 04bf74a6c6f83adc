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

// Independent oracle: correlators straight from the table.
double corr(const CorrelationTensor& P, std::vector<int> x) {
  const Scenario& sc = P.scenario();
  double e = 0;
  for (std::size_t ai = 0; ai < sc.n_a; ++ai) {
    auto a = sc.a_radix.decode(ai);
    int par = 0;
    for (int v : a) par ^= v;
    e += (par ? -1.0 : 1.0) * P(a, x);
  }
  return e;
}

CorrelationTensor random_box(const Scenario& sc, std::mt19937_64& rng) {
  std::gamma_distribution<double> g(1.0);
  std::vector<double> t(sc.d);
  for (std::size_t x = 0; x < sc.n_x; ++x) {
    double s = 0;
    for (std::size_t a = 0; a < sc.n_a; ++a) s += t[sc.index(a, x)] = g(rng);
    for (std::size_t a = 0; a < sc.n_a; ++a) t[sc.index(a, x)] /= s;
  }
  return CorrelationTensor(sc, t, 1e-9);
}

CorrelationTensor deterministic3(int fa, int fb, int fc) {
  return tensor_from(bilocal_scenario(), [=](const int* a, const int* x) {
    return (a[0] == ((fa >> x[0]) & 1) && a[1] == ((fb >> x[1]) & 1) && a[2] == ((fc >> x[2]) & 1)) ? 1.0 : 0.0;
  });
}

}  // namespace

TEST(IndependentSet, DefaultAndValidation) {
  auto sc = bilocal_scenario();
  EXPECT_EQ(default_independent_set(sc).indices, (std::vector<int>{0, 2}));
  EXPECT_THROW(make_independent_set(3, {}), Error);
  EXPECT_THROW(make_independent_set(3, {0, 0}), Error);
  EXPECT_THROW(make_independent_set(3, {3}), Error);
}

TEST(Rk, MatchesOracleOnRandomBoxes) {
  std::mt19937_64 rng(11);
  auto sc = bilocal_scenario();
  auto ind = default_independent_set(sc);
  for (int it = 0; it < 50; ++it) {
    auto P = random_box(sc, rng);
    double I = 0, J = 0;
    for (int x1 = 0; x1 < 2; ++x1)
      for (int x3 = 0; x3 < 2; ++x3) {
        I += corr(P, {x1, 0, x3}) / 4;
        J += ((x1 + x3) % 2 ? -1 : 1) * corr(P, {x1, 1, x3}) / 4;
      }
    auto b = eval_Rk(P, ind);
    EXPECT_NEAR(b.I, I, 1e-12);
    EXPECT_NEAR(b.J, J, 1e-12);
    EXPECT_NEAR(b.R, std::sqrt(std::abs(I)) + std::sqrt(std::abs(J)), 1e-12);
  }
}

TEST(Rk, IAndJAreLinear) {
  std::mt19937_64 rng(5);
  auto sc = bilocal_scenario();
  auto ind = default_independent_set(sc);
  for (int it = 0; it < 20; ++it) {
    auto P = random_box(sc, rng), Q = random_box(sc, rng);
    const double t = std::uniform_real_distribution<>(0, 1)(rng);
    auto a = eval_IJ(P, ind), b = eval_IJ(Q, ind), c = eval_IJ(mix(P, Q, t), ind);
    EXPECT_NEAR(c.I, t * a.I + (1 - t) * b.I, 1e-12);
    EXPECT_NEAR(c.J, t * a.J + (1 - t) * b.J, 1e-12);
    EXPECT_NEAR(eval_svetlichny(mix(P, Q, t)), t * eval_svetlichny(P) + (1 - t) * eval_svetlichny(Q), 1e-12);
  }
}

TEST(Rk, UniformBoxIsZero) {
  auto U = uniform_tensor(bilocal_scenario());
  auto b = eval_Rk(U, default_independent_set(U.scenario()));
  EXPECT_DOUBLE_EQ(b.R, 0.0);
  EXPECT_EQ(b.bound_class, "classical");
}

TEST(Rk, DeterministicLocalBoxesStayClassical) {
  auto ind = make_independent_set(3, {0, 2});
  double best = 0;
  for (int fa = 0; fa < 4; ++fa)
    for (int fb = 0; fb < 4; ++fb)
      for (int fc = 0; fc < 4; ++fc) best = std::max(best, eval_Rk(deterministic3(fa, fb, fc), ind).R);
  EXPECT_NEAR(best, 1.0, 1e-12);
}

TEST(Rk, ParityWitness) {
  auto P = parity_witness();
  auto b = eval_Rk(P, make_independent_set(3, {0, 2}));
  EXPECT_NEAR(b.I, 0.5, 1e-12);
  EXPECT_NEAR(b.J, 0.5, 1e-12);
  EXPECT_NEAR(b.R, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(eval_cyclic(P, make_independent_set(3, {0, 2})), 1.0, 1e-12);
}

TEST(Rk, RejectsNonBinary) {
  auto sc = build_scenario(2, 1, {{0}, {0}}, {2, 3}, {2, 2});
  EXPECT_THROW(eval_Rk(uniform_tensor(sc), default_independent_set(sc)), Error);
  EXPECT_THROW(eval_IJ(uniform_tensor(bell_scenario()), make_independent_set(2, {0}), 2, 1), Error);
}

TEST(Tripartite, ExhaustiveLocalBounds) {
  double sv = -1e9, cc = -1e9;
  for (int fa = 0; fa < 4; ++fa)
    for (int fb = 0; fb < 4; ++fb)
      for (int fc = 0; fc < 4; ++fc) {
        auto P = deterministic3(fa, fb, fc);
        sv = std::max(sv, std::abs(eval_svetlichny(P)));
        cc = std::max(cc, std::abs(eval_cca(P)));
      }
  EXPECT_DOUBLE_EQ(sv, 4.0);
  EXPECT_DOUBLE_EQ(cc, 6.0);
  EXPECT_DOUBLE_EQ(class_linear_bound(local_class(3), svetlichny_coeffs()), 4.0);
  EXPECT_DOUBLE_EQ(class_linear_bound(local_class(3), cca_coeffs()), 6.0);
}

TEST(Tripartite, AlgebraicMaximum) {
  auto A = and_parity_box();
  EXPECT_DOUBLE_EQ(eval_cca(A), 8.0);
  EXPECT_TRUE(check_nonsignaling(A).passed);
  // the parity witness reaches only 2 on this functional
  EXPECT_DOUBLE_EQ(eval_cca(parity_witness()), 2.0);
  EXPECT_DOUBLE_EQ(eval_svetlichny(parity_witness()), 0.0);
}

TEST(Tripartite, WrongArity) {
  EXPECT_THROW(eval_svetlichny(uniform_tensor(bell_scenario())), Error);
}

TEST(Chsh, PrBoxAndUniform) {
  auto PR = tensor_from(bell_scenario(), [](const int* a, const int* x) {
    return ((a[0] ^ a[1]) == (x[0] & x[1])) ? 0.5 : 0.0;
  });
  EXPECT_DOUBLE_EQ(chsh_quantity(PR), 4.0);
  EXPECT_DOUBLE_EQ(chained_bell(PR, 2), 0.0);
  EXPECT_DOUBLE_EQ(i2_from_chsh(4.0), 0.0);
  auto U = uniform_tensor(bell_scenario());
  EXPECT_DOUBLE_EQ(chsh_quantity(U), 0.0);
  EXPECT_DOUBLE_EQ(chained_bell(U, 2), 2.0);
  EXPECT_THROW(i2_from_chsh(4.5), Error);
}

TEST(Chained, EqualsChshFormWhenSignsAlign) {
  std::mt19937_64 rng(3);
  StrategyModel m(bell_scenario(), local_class(2));
  auto M = m.matrix();
  int checked = 0;
  for (int it = 0; it < 200; ++it) {
    std::vector<double> w(M.n_cols());
    std::gamma_distribution<double> g(1.0);
    double s = 0;
    for (auto& v : w) s += v = g(rng);
    for (auto& v : w) v /= s;
    CorrelationTensor P(bell_scenario(), M.apply(w), 1e-9);
    auto E = [&](int x, int y) { return corr(P, {x, y}); };
    if (E(0, 0) + E(1, 0) >= 0 && E(0, 1) - E(1, 1) >= 0) {
      EXPECT_NEAR(chained_bell(P, 2), i2_from_chsh(chsh_quantity(P)), 1e-12);
      ++checked;
    }
    EXPECT_GE(chained_bell(P, 2), 1.0 - 1e-12);  // local minimum is s - 1
  }
  EXPECT_GT(checked, 0);
}

TEST(Chained, MoreSettings) {
  auto sc = build_scenario(2, 1, {{0}, {0}}, {3, 3}, {2, 2});
  // perfectly correlated box: only the closing link contributes
  auto P = tensor_from(sc, [](const int* a, const int*) { return a[0] == a[1] ? 0.5 : 0.0; });
  EXPECT_DOUBLE_EQ(chained_bell(P, 3), 1.0);
  EXPECT_THROW(chained_bell(P, 4), Error);
}

TEST(Distance, Variational) {
  EXPECT_DOUBLE_EQ(variational_distance({1, 0}, {0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(variational_distance({0.5, 0.5}, {0.5, 0.5}), 0.0);
  EXPECT_THROW(variational_distance({1}, {0.5, 0.5}), Error);
}
