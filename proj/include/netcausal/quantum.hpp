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

// Exact density-matrix simulation of networks of EPR/GHZ sources with local
// dichotomic measurements.
//
// Qubit layout: source-major (source 0 most significant in the Kronecker
// product); the q-th qubit of a source goes to its q-th holder.  An agent's
// local qubits are ordered by source id.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "netcausal/functionals.hpp"
#include "netcausal/scenario.hpp"

namespace netcausal {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

inline constexpr int kMaxQubits = 16;
inline constexpr int kMaxGeneralQubits = 12;  // dense contraction path
inline constexpr double kEigSnap = 1e-8;

namespace pauli {
inline CMat I() { return CMat::Identity(2, 2); }
inline CMat X() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline CMat Y() {
  CMat m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
inline CMat Z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

inline CMat kron(const CMat& A, const CMat& B) {
  CMat K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

struct SourceState {
  std::string kind;  // "epr", "ghz"
  int qubits = 2;
  double visibility = 1.0;
  CMat pure;  // rho at v = 1
  CMat rho;
};

inline void validate_state(const CMat& rho) {
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
    throw Error(Errc::Data, "density operator must have unit trace");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw Error(Errc::Data, "density operator must be Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-12)
    throw Error(Errc::Data, "density operator must be positive semidefinite");
}

inline SourceState make_ghz(int p, double v = 1.0) {
  if (!(v >= 0.0 && v <= 1.0)) throw Error(Errc::BadVisibility, "visibility must lie in [0,1]");
  if (p < 2 || p > kMaxQubits) throw Error(Errc::OutOfRange, "GHZ needs 2..16 parties");
  const Eigen::Index D = Eigen::Index(1) << p;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(D);
  psi(0) = psi(D - 1) = 1.0 / std::sqrt(2.0);
  SourceState s;
  s.kind = p == 2 ? "epr" : "ghz";
  s.qubits = p;
  s.visibility = v;
  s.pure = psi * psi.adjoint();
  s.rho = v * s.pure + (1.0 - v) * CMat::Identity(D, D) / double(D);
  validate_state(s.rho);
  return s;
}

// |Phi+> = (|00> + |11>)/sqrt2, mixed with white noise at weight 1-v.
inline SourceState make_epr(double v = 1.0) { return make_ghz(2, v); }

// Classical decomposition of the noise: v * pure + sum_b (1-v)/D |b><b|.
inline std::vector<std::pair<double, CMat>> state_components(const SourceState& s) {
  std::vector<std::pair<double, CMat>> out;
  if (s.visibility > 0) out.emplace_back(s.visibility, s.pure);
  if (s.visibility < 1) {
    const Eigen::Index D = s.rho.rows();
    for (Eigen::Index b = 0; b < D; ++b) {
      CMat e = CMat::Zero(D, D);
      e(b, b) = 1.0;
      out.emplace_back((1.0 - s.visibility) / double(D), e);
    }
  }
  return out;
}

struct Observable {
  CMat op;
  std::vector<CMat> factors;  // per local qubit, empty if not declared separable

  int qubits() const {
    int q = 0;
    for (Eigen::Index d = op.rows(); d > 1; d >>= 1) ++q;
    return q;
  }
  bool separable() const { return !factors.empty(); }
};

inline void check_dichotomic(const CMat& M) {
  if (M.rows() != M.cols()) throw Error(Errc::InconsistentPlan, "observable must be square");
  if ((M - M.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw Error(Errc::InconsistentPlan, "observable must be Hermitian");
  if ((M * M - CMat::Identity(M.rows(), M.cols())).cwiseAbs().maxCoeff() > 1e-10)
    throw Error(Errc::InconsistentPlan, "observable must square to the identity");
}

inline Observable observable_from_matrix(const CMat& M) {
  check_dichotomic(M);
  return Observable{M, {}};
}

inline Observable observable_from_factors(const std::vector<CMat>& f) {
  if (f.empty()) throw Error(Errc::InconsistentPlan, "no factors");
  CMat op = f[0];
  check_dichotomic(f[0]);
  for (std::size_t i = 1; i < f.size(); ++i) {
    check_dichotomic(f[i]);
    op = kron(op, f[i]);
  }
  return Observable{op, f};
}

// n . sigma per qubit; a zero vector means the identity.
inline CMat bloch(const std::array<double, 3>& n) {
  const double r = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  if (r < 1e-15) return pauli::I();
  return (n[0] * pauli::X() + n[1] * pauli::Y() + n[2] * pauli::Z()) / r;
}

inline Observable observable_from_bloch(const std::vector<std::array<double, 3>>& dirs) {
  std::vector<CMat> f;
  for (auto& d : dirs) f.push_back(bloch(d));
  return observable_from_factors(f);
}

// obs[agent][input]
struct MeasurementPlan {
  std::vector<std::vector<Observable>> obs;
};

struct QuantumNetwork {
  Scenario scenario;
  std::vector<SourceState> states;
  MeasurementPlan plan;
  IndependentSet independent;
};

namespace detail {

struct Layout {
  int total = 0;
  std::vector<int> offset;                  // first global qubit of each source
  std::vector<std::vector<int>> agent_q;    // global qubits per agent (local order)
  std::vector<int> owner;                   // agent per global qubit
};

inline Layout layout(const Scenario& sc, const std::vector<SourceState>& states) {
  if (static_cast<int>(states.size()) != sc.m)
    throw Error(Errc::InconsistentPlan, "need one state per source");
  Layout L;
  L.agent_q.assign(sc.n, {});
  for (int j = 0; j < sc.m; ++j) {
    if (states[j].qubits != static_cast<int>(sc.holders[j].size()))
      throw Error(Errc::InconsistentPlan, "source " + std::to_string(j + 1) + " has " +
                                              std::to_string(states[j].qubits) +
                                              " qubits but " +
                                              std::to_string(sc.holders[j].size()) + " holders");
    L.offset.push_back(L.total);
    for (int q = 0; q < states[j].qubits; ++q) L.owner.push_back(sc.holders[j][q]);
    L.total += states[j].qubits;
  }
  for (int j = 0; j < sc.m; ++j)
    for (int q = 0; q < states[j].qubits; ++q) L.agent_q[sc.holders[j][q]].push_back(L.offset[j] + q);
  for (auto& v : L.agent_q) std::sort(v.begin(), v.end());
  if (L.total > kMaxQubits) throw Error(Errc::TooLarge, "more than 16 qubits");
  return L;
}

inline void check_plan(const Scenario& sc, const Layout& L, const MeasurementPlan& plan) {
  if (!sc.binary_outputs())
    throw Error(Errc::InconsistentPlan, "dichotomic measurements need binary outputs");
  if (static_cast<int>(plan.obs.size()) != sc.n)
    throw Error(Errc::InconsistentPlan, "plan needs one entry per agent");
  for (int i = 0; i < sc.n; ++i) {
    if (static_cast<int>(plan.obs[i].size()) != sc.inputs[i])
      throw Error(Errc::InconsistentPlan, "agent " + std::to_string(i + 1) +
                                              " needs one observable per input");
    const Eigen::Index dim = Eigen::Index(1) << L.agent_q[i].size();
    for (auto& o : plan.obs[i]) {
      if (o.op.rows() != dim)
        throw Error(Errc::InconsistentPlan, "observable of agent " + std::to_string(i + 1) +
                                                " acts on the wrong number of qubits");
      if (o.separable() && o.factors.size() != L.agent_q[i].size())
        throw Error(Errc::InconsistentPlan, "factor count disagrees with held qubits");
    }
  }
}

// Split a 2^q operator as u (x) v with u a 2x2 dichotomic factor, if its
// operator-Schmidt rank is one.
inline bool split_first(const CMat& M, CMat& u, CMat& v) {
  const Eigen::Index R = M.rows() / 2;
  CMat re(4, R * R);
  for (int i1 = 0; i1 < 2; ++i1)
    for (int j1 = 0; j1 < 2; ++j1)
      for (Eigen::Index i2 = 0; i2 < R; ++i2)
        for (Eigen::Index j2 = 0; j2 < R; ++j2)
          re(i1 * 2 + j1, i2 * R + j2) = M(i1 * R + i2, j1 * R + j2);
  Eigen::JacobiSVD<CMat> svd(re, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv.size() > 1 && sv(1) > 1e-10 * sv(0)) return false;
  u = CMat(2, 2);
  for (int i = 0; i < 4; ++i) u(i / 2, i % 2) = sv(0) * svd.matrixU()(i, 0);
  v = CMat(R, R);
  for (Eigen::Index i = 0; i < R * R; ++i) v(i / R, i % R) = std::conj(svd.matrixV()(i, 0));
  // u = c H with H^2 = I
  const cplx c = std::sqrt((u * u)(0, 0));
  if (std::abs(c) < 1e-12) return false;
  u /= c;
  v *= c;
  return true;
}

inline std::vector<CMat> try_factorize(const CMat& op, int nq) {
  std::vector<CMat> f;
  CMat rest = op;
  for (int q = 0; q + 1 < nq; ++q) {
    CMat u, v;
    if (!split_first(rest, u, v)) return {};
    f.push_back(u);
    rest = v;
  }
  f.push_back(rest);
  return f;
}

// Local factor of agent i's observable on one of its qubits.  A matrix-given
// observable is factorized when possible, otherwise the normalized partial
// trace is used.
inline CMat local_factor(const Observable& o, int local_q, int nq) {
  if (o.separable()) return o.factors[local_q];
  if (auto f = try_factorize(o.op, nq); !f.empty()) return f[local_q];
  const Eigen::Index D = o.op.rows();
  CMat f = CMat::Zero(2, 2);
  const int shift = nq - 1 - local_q;
  for (Eigen::Index r = 0; r < D; ++r)
    for (Eigen::Index c = 0; c < D; ++c) {
      // same bits outside local_q
      if (((r ^ c) & ~(Eigen::Index(1) << shift)) != 0) continue;
      f((r >> shift) & 1, (c >> shift) & 1) += o.op(r, c);
    }
  return f / double(D / 2);
}

}  // namespace detail

// Source-factorized correlators: C(S, x) = prod_j Tr[rho_j (x)_q O_q].
inline CorrelationTensor network_correlations_factorized(const Scenario& sc,
                                                         const std::vector<SourceState>& states,
                                                         const MeasurementPlan& plan) {
  auto L = detail::layout(sc, states);
  detail::check_plan(sc, L, plan);
  for (auto& row : plan.obs)
    for (auto& o : row)
      if (!o.separable()) throw Error(Errc::InconsistentPlan, "factorized path needs separable plan");
  const int n = sc.n;
  if (n > 20) throw Error(Errc::TooLarge, "too many agents");
  // per source cache: key (holder subset mask, holder inputs) -> value
  std::vector<std::map<std::pair<unsigned, std::size_t>, double>> cache(sc.m);
  auto local_pos = [&](int agent, int gq) {
    const auto& v = L.agent_q[agent];
    return static_cast<int>(std::find(v.begin(), v.end(), gq) - v.begin());
  };
  auto source_val = [&](int j, unsigned S, const int* x) {
    unsigned hm = 0;
    std::size_t hx = 0, mul = 1;
    const auto& h = sc.holders[j];
    for (std::size_t t = 0; t < h.size(); ++t) {
      if (S >> h[t] & 1u) hm |= 1u << t;
      hx += std::size_t(x[h[t]]) * mul;
      mul *= std::size_t(sc.inputs[h[t]]);
    }
    auto key = std::make_pair(hm, hx);
    auto it = cache[j].find(key);
    if (it != cache[j].end()) return it->second;
    CMat op;
    for (std::size_t t = 0; t < h.size(); ++t) {
      const int gq = L.offset[j] + int(t);
      CMat f = (hm >> t & 1u) ? plan.obs[h[t]][x[h[t]]].factors[local_pos(h[t], gq)] : pauli::I();
      op = t == 0 ? f : kron(op, f);
    }
    const double v = (states[j].rho * op).trace().real();
    cache[j].emplace(key, v);
    return v;
  };
  std::vector<double> t(sc.d, 0.0);
  std::vector<int> x(n), a(n);
  std::vector<double> C(std::size_t(1) << n);
  for (std::size_t xi = 0; xi < sc.n_x; ++xi) {
    sc.x_radix.decode(xi, x.data());
    for (unsigned S = 0; S < (1u << n); ++S) {
      double c = 1;
      for (int j = 0; j < sc.m && c != 0; ++j) c *= source_val(j, S, x.data());
      C[S] = c;
    }
    for (std::size_t ai = 0; ai < sc.n_a; ++ai) {
      double p = 0;
      for (unsigned S = 0; S < (1u << n); ++S) {
        const int par = std::popcount(static_cast<unsigned>(ai) & S) & 1;
        p += par ? -C[S] : C[S];
      }
      p = std::ldexp(p, -n);
      t[sc.index(ai, xi)] = std::max(0.0, p);
    }
  }
  // clamp noise and renormalize per input
  for (std::size_t xi = 0; xi < sc.n_x; ++xi) {
    double s = 0;
    for (std::size_t ai = 0; ai < sc.n_a; ++ai) s += t[sc.index(ai, xi)];
    for (std::size_t ai = 0; ai < sc.n_a; ++ai) t[sc.index(ai, xi)] /= s;
  }
  return CorrelationTensor(sc, std::move(t), 1e-9);
}

// Dense contraction; works for any (entangling) local observables.
inline CorrelationTensor network_correlations_dense(const Scenario& sc,
                                                    const std::vector<SourceState>& states,
                                                    const MeasurementPlan& plan) {
  auto L = detail::layout(sc, states);
  detail::check_plan(sc, L, plan);
  if (L.total > kMaxGeneralQubits)
    throw Error(Errc::TooLarge, "dense contraction limited to 12 qubits");
  const int Q = L.total;
  CMat rho = states[0].rho;
  for (int j = 1; j < sc.m; ++j) rho = kron(rho, states[j].rho);
  // permute to agent-major order
  std::vector<int> order;
  for (int i = 0; i < sc.n; ++i)
    for (int q : L.agent_q[i]) order.push_back(q);
  const Eigen::Index D = Eigen::Index(1) << Q;
  std::vector<Eigen::Index> perm(D);
  for (Eigen::Index s = 0; s < D; ++s) {
    Eigen::Index t = 0;
    for (int pos = 0; pos < Q; ++pos) {
      const int gq = order[pos];
      const Eigen::Index bit = (s >> (Q - 1 - gq)) & 1;
      t |= bit << (Q - 1 - pos);
    }
    perm[s] = t;
  }
  CMat r2(D, D);
  for (Eigen::Index i = 0; i < D; ++i)
    for (Eigen::Index j = 0; j < D; ++j) r2(perm[i], perm[j]) = rho(i, j);

  // projectors[i][x][a]
  std::vector<std::vector<std::array<CMat, 2>>> proj(sc.n);
  for (int i = 0; i < sc.n; ++i)
    for (auto& o : plan.obs[i]) {
      CMat Id = CMat::Identity(o.op.rows(), o.op.cols());
      proj[i].push_back({(Id + o.op) / 2.0, (Id - o.op) / 2.0});
    }
  std::vector<double> t(sc.d, 0.0);
  std::vector<int> x(sc.n), a(sc.n);
  // recursive partial contraction, agent 0 is most significant
  std::function<void(int, const CMat&)> rec = [&](int lvl, const CMat& T) {
    if (lvl == sc.n) {
      const double p = std::max(0.0, T(0, 0).real());
      t[sc.index(sc.a_radix.encode(a), sc.x_radix.encode(x))] = p;
      return;
    }
    const Eigen::Index du = Eigen::Index(1) << L.agent_q[lvl].size();
    const Eigen::Index R = T.rows() / du;
    for (int xv = 0; xv < sc.inputs[lvl]; ++xv)
      for (int av = 0; av < 2; ++av) {
        const CMat& Pm = proj[lvl][xv][av];
        CMat out = CMat::Zero(R, R);
        for (Eigen::Index u = 0; u < du; ++u)
          for (Eigen::Index up = 0; up < du; ++up) {
            const cplx w = Pm(up, u);
            if (std::abs(w) < 1e-15) continue;
            out += w * T.block(u * R, up * R, R, R);
          }
        x[lvl] = xv;
        a[lvl] = av;
        rec(lvl + 1, out);
      }
  };
  rec(0, r2);
  for (std::size_t xi = 0; xi < sc.n_x; ++xi) {
    double s = 0;
    for (std::size_t ai = 0; ai < sc.n_a; ++ai) s += t[sc.index(ai, xi)];
    for (std::size_t ai = 0; ai < sc.n_a; ++ai) t[sc.index(ai, xi)] /= s;
  }
  return CorrelationTensor(sc, std::move(t), 1e-9);
}

inline CorrelationTensor network_correlations(const Scenario& sc,
                                              const std::vector<SourceState>& states,
                                              const MeasurementPlan& plan) {
  bool sep = true;
  for (auto& row : plan.obs)
    for (auto& o : row) sep = sep && o.separable();
  return sep ? network_correlations_factorized(sc, states, plan)
             : network_correlations_dense(sc, states, plan);
}

inline CorrelationTensor network_correlations(const QuantumNetwork& q) {
  return network_correlations(q.scenario, q.states, q.plan);
}

// Global correlators vs. the product of per-source correlators.
inline bool check_separable_factorization(const CorrelationTensor& P, const IndependentSet& ind,
                                          const QuantumNetwork& q, double tol = 1e-9) {
  const Scenario& sc = q.scenario;
  if (!(P.scenario() == sc)) throw Error(Errc::InconsistentPlan, "tensor/network mismatch");
  for (int v : ind.indices)
    if (v < 0 || v >= sc.n) throw Error(Errc::InconsistentPlan, "independent agent out of range");
  auto L = detail::layout(sc, q.states);
  detail::check_plan(sc, L, q.plan);
  std::vector<int> x(sc.n);
  for (std::size_t xi = 0; xi < sc.n_x; ++xi) {
    sc.x_radix.decode(xi, x.data());
    double pred = 1;
    for (int j = 0; j < sc.m; ++j) {
      CMat op;
      const auto& h = sc.holders[j];
      for (std::size_t t = 0; t < h.size(); ++t) {
        const int agent = h[t];
        const int gq = L.offset[j] + int(t);
        const auto& aq = L.agent_q[agent];
        const int lq = static_cast<int>(std::find(aq.begin(), aq.end(), gq) - aq.begin());
        CMat f = detail::local_factor(q.plan.obs[agent][x[agent]], lq, int(aq.size()));
        op = t == 0 ? f : kron(op, f);
      }
      pred *= (q.states[j].rho * op).trace().real();
    }
    if (std::abs(correlator(P, xi) - pred) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Preset networks with the separable "active source" construction: every
// independent agent picks one source on which it measures (Z +- X)/sqrt2; the
// other holders of that source measure Z (first one) / identity at y=0 and X
// at y=1.  All remaining qubits measure X, which is +1-correlated on EPR/GHZ.

inline QuantumNetwork separable_preset(const Scenario& sc, std::vector<SourceState> states,
                                       const IndependentSet& ind) {
  for (int j = 0; j < sc.m; ++j)
    for (int i : ind.indices)
      for (int k : ind.indices)
        if (i < k && std::find(sc.holders[j].begin(), sc.holders[j].end(), i) != sc.holders[j].end() &&
            std::find(sc.holders[j].begin(), sc.holders[j].end(), k) != sc.holders[j].end())
          throw Error(Errc::InconsistentPlan, "independent agents share a source");
  std::vector<int> active(sc.m, -1);
  for (int i : ind.indices) {
    bool done = false;
    for (int j : sc.sharing[i])
      if (active[j] < 0) {
        active[j] = i;
        done = true;
        break;
      }
    if (!done) throw Error(Errc::InconsistentPlan, "independent agent without a free source");
  }
  auto L = detail::layout(sc, states);
  const CMat Zm = pauli::Z(), Xm = pauli::X(), Im = pauli::I();
  const CMat Ap = (Zm + Xm) / std::sqrt(2.0), Am = (Zm - Xm) / std::sqrt(2.0);
  MeasurementPlan plan;
  plan.obs.resize(sc.n);
  for (int i = 0; i < sc.n; ++i) {
    const bool indep = ind.contains(i);
    for (int xv = 0; xv < sc.inputs[i]; ++xv) {
      std::vector<CMat> f;
      for (int gq : L.agent_q[i]) {
        int j = 0;
        while (j + 1 < sc.m && L.offset[j + 1] <= gq) ++j;
        const int pos = gq - L.offset[j];
        if (active[j] < 0) {
          f.push_back(Xm);
        } else if (indep) {
          f.push_back(xv == 0 ? Ap : Am);
        } else {
          // first non-independent holder of the source takes Z at y=0
          int first = -1;
          for (std::size_t t = 0; t < sc.holders[j].size(); ++t)
            if (!ind.contains(sc.holders[j][t])) {
              first = int(t);
              break;
            }
          if (xv == 0)
            f.push_back(pos == first ? Zm : Im);
          else
            f.push_back(Xm);
        }
      }
      plan.obs[i].push_back(observable_from_factors(f));
    }
  }
  return QuantumNetwork{sc, std::move(states), std::move(plan), ind};
}

inline QuantumNetwork preset_bell_epr(double v = 1.0) {
  Scenario sc = bell_scenario();
  std::vector<SourceState> st{make_epr(v)};
  const CMat Zm = pauli::Z(), Xm = pauli::X();
  MeasurementPlan plan;
  plan.obs = {{observable_from_factors({(Zm + Xm) / std::sqrt(2.0)}),
               observable_from_factors({(Zm - Xm) / std::sqrt(2.0)})},
              {observable_from_factors({Zm}), observable_from_factors({Xm})}};
  return QuantumNetwork{sc, std::move(st), std::move(plan), IndependentSet{{0}}};
}

// n agents in a line, n-1 EPR sources; independent agents 1,3,5,...
inline QuantumNetwork preset_chain(int n, double v = 1.0) {
  if (n < 2 || 2 * (n - 1) > kMaxQubits) throw Error(Errc::TooLarge, "chain length out of range");
  std::vector<std::vector<int>> sh(n);
  for (int j = 0; j + 1 < n; ++j) {
    sh[j].push_back(j);
    sh[j + 1].push_back(j);
  }
  Scenario sc = binary_scenario(n, n - 1, sh);
  std::vector<int> ind;
  for (int i = 0; i < n; i += 2) ind.push_back(i);
  return separable_preset(sc, std::vector<SourceState>(n - 1, make_epr(v)),
                          make_independent_set(n, ind));
}

inline QuantumNetwork preset_bilocal_epr(double v = 1.0) { return preset_chain(3, v); }

// Agents A_1..A_n then the centre B (agent n+1); source i between A_i and B.
inline QuantumNetwork preset_star(int n, double v = 1.0) {
  if (n < 1 || 2 * n > kMaxQubits) throw Error(Errc::TooLarge, "star size out of range");
  std::vector<std::vector<int>> sh(n + 1);
  for (int i = 0; i < n; ++i) {
    sh[i] = {i};
    sh[n].push_back(i);
  }
  Scenario sc = binary_scenario(n + 1, n, sh);
  std::vector<int> ind;
  for (int i = 0; i < n; ++i) ind.push_back(i);
  return separable_preset(sc, std::vector<SourceState>(n, make_epr(v)),
                          make_independent_set(n + 1, ind));
}

// Agents A1, A2, B1, B2, B3, C1 (0..5).  Sources: GHZ(A1,A2,B1), GHZ(B1,B2,B3),
// EPR(B3,C1), EPR(A2,B3).  Independent observers A1, B2, C1.
inline QuantumNetwork preset_hybrid(double v = 1.0) {
  std::vector<std::vector<int>> sh = {{0}, {0, 3}, {0, 1}, {1}, {1, 2, 3}, {2}};
  Scenario sc = binary_scenario(6, 4, sh);
  std::vector<SourceState> st{make_ghz(3, v), make_ghz(3, v), make_epr(v), make_epr(v)};
  return separable_preset(sc, std::move(st), make_independent_set(6, {0, 3, 5}));
}

// Uniformly random Bloch direction per qubit, per input, per agent.
template <class Rng>
inline QuantumNetwork random_separable_plan(const QuantumNetwork& base, Rng& rng) {
  auto L = detail::layout(base.scenario, base.states);
  std::normal_distribution<double> g(0.0, 1.0);
  QuantumNetwork q = base;
  for (int i = 0; i < q.scenario.n; ++i)
    for (int xv = 0; xv < q.scenario.inputs[i]; ++xv) {
      std::vector<std::array<double, 3>> dirs(L.agent_q[i].size());
      for (auto& d : dirs) {
        do {
          d = {g(rng), g(rng), g(rng)};
        } while (d[0] * d[0] + d[1] * d[1] + d[2] * d[2] < 1e-12);
      }
      q.plan.obs[i][xv] = observable_from_bloch(dirs);
    }
  return q;
}

}  // namespace netcausal
