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

// Network Bell functionals on binary correlation tables.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "netcausal/scenario.hpp"

namespace netcausal {

inline constexpr double kFuncTol = 1e-9;

struct IndependentSet {
  std::vector<int> indices;  // 0-based, sorted

  int k() const { return static_cast<int>(indices.size()); }
  bool contains(int i) const {
    return std::find(indices.begin(), indices.end(), i) != indices.end();
  }
};

inline IndependentSet make_independent_set(int n, std::vector<int> idx) {
  std::sort(idx.begin(), idx.end());
  if (idx.empty()) throw Error(Errc::OutOfRange, "independent set must be non-empty");
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    throw Error(Errc::Data, "independent set has repeated agents");
  for (int v : idx)
    if (v < 0 || v >= n) throw Error(Errc::BadIndex, "independent agent out of range");
  return IndependentSet{std::move(idx)};
}

// Greedy: agents in index order that share no source with any agent already picked.
inline IndependentSet default_independent_set(const Scenario& sc) {
  std::vector<int> pick;
  for (int i = 0; i < sc.n; ++i) {
    bool ok = true;
    for (int j : pick)
      if (sc.shares_source(i, j)) ok = false;
    if (ok) pick.push_back(i);
  }
  return IndependentSet{pick};
}

struct BellReport {
  double I = 0, J = 0;
  double R = 0;
  int k = 0;
  // thresholds: classical 1, quantum sqrt2, non-signaling 2
  bool violates_classical = false;
  bool violates_quantum = false;
  bool violates_nonsignaling = false;
  std::string bound_class;  // smallest of classical/quantum/nonsignaling containing R
};

namespace detail {
inline void require_binary(const Scenario& sc) {
  if (!sc.binary()) throw Error(Errc::NonBinary, "functional needs binary inputs and outputs");
}
}  // namespace detail

struct IJ {
  double I = 0, J = 0;
};

// fixI / fixJ: value taken by the complement agents' inputs in I and J.
inline IJ eval_IJ(const CorrelationTensor& P, const IndependentSet& ind, int fixI = 0,
                  int fixJ = 1) {
  const Scenario& sc = P.scenario();
  detail::require_binary(sc);
  for (int v : ind.indices)
    if (v < 0 || v >= sc.n) throw Error(Errc::BadIndex, "independent agent out of range");
  if (fixI < 0 || fixI > 1 || fixJ < 0 || fixJ > 1)
    throw Error(Errc::OutOfRange, "complement input must be 0 or 1");
  const int k = ind.k();
  IJ r;
  std::vector<int> x(sc.n);
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    int sign = 1;
    for (int t = 0; t < k; ++t) {
      int bit = (mask >> t) & 1;
      x[ind.indices[t]] = bit;
      if (bit) sign = -sign;
    }
    for (int i = 0; i < sc.n; ++i)
      if (!ind.contains(i)) x[i] = fixI;
    r.I += correlator(P, x);
    for (int i = 0; i < sc.n; ++i)
      if (!ind.contains(i)) x[i] = fixJ;
    r.J += sign * correlator(P, x);
  }
  const double norm = std::ldexp(1.0, -k);
  r.I *= norm;
  r.J *= norm;
  return r;
}

inline double rk_value(double I, double J, int k) {
  return std::pow(std::abs(I), 1.0 / k) + std::pow(std::abs(J), 1.0 / k);
}

inline BellReport eval_Rk(const CorrelationTensor& P, const IndependentSet& ind, int fixI = 0,
                          int fixJ = 1) {
  IJ ij = eval_IJ(P, ind, fixI, fixJ);
  BellReport b;
  b.I = ij.I;
  b.J = ij.J;
  b.k = ind.k();
  b.R = rk_value(ij.I, ij.J, b.k);
  b.violates_classical = b.R > 1.0 + kFuncTol;
  b.violates_quantum = b.R > std::sqrt(2.0) + kFuncTol;
  b.violates_nonsignaling = b.R > 2.0 + kFuncTol;
  b.bound_class = !b.violates_classical ? "classical"
                  : !b.violates_quantum ? "quantum"
                  : !b.violates_nonsignaling ? "nonsignaling"
                                             : "none";
  return b;
}

// |I| + |J|; bound 1 (hidden-variable / quantum), 2 (non-signaling).
inline double eval_cyclic(const CorrelationTensor& P, const IndependentSet& ind, int fixI = 0,
                          int fixJ = 1) {
  IJ ij = eval_IJ(P, ind, fixI, fixJ);
  return std::abs(ij.I) + std::abs(ij.J);
}

namespace detail {
inline void require_tripartite(const Scenario& sc) {
  if (sc.n != 3) throw Error(Errc::WrongArity, "functional needs exactly three agents");
  require_binary(sc);
}
inline double E3(const CorrelationTensor& P, int x1, int x2, int x3) {
  return correlator(P, std::vector<int>{x1, x2, x3});
}
}  // namespace detail

// Coefficients over x = x1 + 2 x2 + 4 x3.
inline const int* svetlichny_coeffs() {
  static const int c[8] = {-1, 1, 1, 1, 1, 1, 1, -1};  // minus at weight 0 and 3
  return c;
}
inline const int* cca_coeffs() {
  static const int c[8] = {1, 1, 1, 1, 1, 1, 1, -1};
  return c;
}

inline double eval_tripartite_linear(const CorrelationTensor& P, const int* coeff) {
  detail::require_tripartite(P.scenario());
  double s = 0;
  for (int x = 0; x < 8; ++x) s += coeff[x] * detail::E3(P, x & 1, (x >> 1) & 1, (x >> 2) & 1);
  return s;
}

inline double eval_svetlichny(const CorrelationTensor& P) {
  return eval_tripartite_linear(P, svetlichny_coeffs());
}
inline double eval_cca(const CorrelationTensor& P) {
  return eval_tripartite_linear(P, cca_coeffs());
}

// C2 = |<A0B0>+<A1B0>| + |<A0B1>-<A1B1>|
inline double chsh_quantity(const CorrelationTensor& P) {
  const Scenario& sc = P.scenario();
  if (sc.n != 2) throw Error(Errc::WrongArity, "CHSH needs two agents");
  detail::require_binary(sc);
  auto E = [&](int x, int y) { return correlator(P, std::vector<int>{x, y}); };
  return std::abs(E(0, 0) + E(1, 0)) + std::abs(E(0, 1) - E(1, 1));
}

// Chain of 2s settings B_{s-1} - A_0 - B_0 - A_1 - ... - A_{s-1}, closed by
// P(a=b | A_{s-1}, B_{s-1}); every link of the open chain contributes P(a!=b).
// For s=2 this is 2 - (E00+E10+E01-E11)/2.
inline double chained_bell(const CorrelationTensor& P, int s) {
  const Scenario& sc = P.scenario();
  if (sc.n != 2) throw Error(Errc::WrongArity, "chained Bell needs two agents");
  if (s < 2 || sc.inputs[0] < s || sc.inputs[1] < s)
    throw Error(Errc::WrongArity, "chained Bell needs s >= 2 settings per agent");
  if (!sc.binary_outputs()) throw Error(Errc::NonBinary, "chained Bell needs binary outputs");
  auto peq = [&](int x, int y) {
    std::vector<int> xv{x, y};
    return P({0, 0}, xv) + P({1, 1}, xv);
  };
  auto pne = [&](int x, int y) { return 1.0 - peq(x, y); };
  double v = pne(0, s - 1);
  for (int i = 0; i + 1 < s; ++i) v += pne(i, i) + pne(i + 1, i);
  v += peq(s - 1, s - 1);
  return v;
}

inline double i2_from_chsh(double C2) {
  if (!(C2 >= -1e-12 && C2 <= 4 + 1e-12)) throw Error(Errc::OutOfRange, "C2 must lie in [0,4]");
  return 2.0 - 0.5 * C2;
}

inline double variational_distance(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw Error(Errc::Mismatch, "distributions differ in support size");
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

}  // namespace netcausal
