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

// Eavesdropper bounds on k-independent networks and explicit eavesdropper
// simulations.
//
// Every source is modelled as a classical mixture of components (the noisy
// quantum sources split as v*pure + sum_b (1-v)/D |b><b|; classical sources
// are their hidden values).  The eavesdropper holds one system per source
// group, correlated with that group's component.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "netcausal/compat.hpp"
#include "netcausal/functionals.hpp"
#include "netcausal/quantum.hpp"
#include "netcausal/scenario.hpp"
#include "netcausal/strategy.hpp"

namespace netcausal {

inline double eavesdropper_bound(double R, int k) {
  if (k < 1) throw Error(Errc::OutOfRange, "k must be at least 1");
  if (!(R >= -kFuncTol && R <= 2.0 + kFuncTol)) throw Error(Errc::OutOfRange, "R_k must lie in [0,2]");
  return std::max(0.0, k * (2.0 - R));
}

struct SecurityReport {
  double R = 0;
  int k = 0;
  double bound = 0;
  std::optional<double> D_observed;  // worst conditioning cell
  double D_average = 0;              // weighted by P(a_I, x) over uniform x, z
  bool satisfied = true;
  IndependentSet independent;        // after any group reduction
};

// Source model as a finite mixture: P = sum_k prod_j w_j(k_j) P_k.
struct ComponentModel {
  Scenario scenario;
  std::vector<std::vector<double>> weights;  // per source
  std::vector<std::vector<double>> tables;   // per joint component (source 0 fastest)
  Radix joint;

  std::vector<double> mixture() const {
    std::vector<double> t(scenario.d, 0.0);
    std::vector<int> k(weights.size());
    for (std::size_t c = 0; c < tables.size(); ++c) {
      joint.decode(c, k.data());
      double w = 1;
      for (std::size_t j = 0; j < k.size(); ++j) w *= weights[j][k[j]];
      for (std::size_t i = 0; i < t.size(); ++i) t[i] += w * tables[c][i];
    }
    return t;
  }
};

inline ComponentModel components_from_quantum(const QuantumNetwork& q) {
  ComponentModel cm;
  cm.scenario = q.scenario;
  std::vector<std::vector<std::pair<double, CMat>>> comp;
  for (auto& s : q.states) {
    comp.push_back(state_components(s));
    std::vector<double> w;
    for (auto& [wt, r] : comp.back()) w.push_back(wt);
    cm.weights.push_back(w);
    cm.joint.base.push_back(static_cast<int>(w.size()));
  }
  if (double(cm.joint.size()) * double(q.scenario.d) > 5e7)
    throw Error(Errc::TooLarge, "too many source components");
  std::vector<int> k(comp.size());
  for (std::size_t c = 0; c < cm.joint.size(); ++c) {
    cm.joint.decode(c, k.data());
    auto st = q.states;
    for (std::size_t j = 0; j < st.size(); ++j) st[j].rho = comp[j][k[j]].second;
    cm.tables.push_back(network_correlations(q.scenario, st, q.plan).table());
  }
  return cm;
}

// Classical sources: component = hidden value, weights = mu.
inline ComponentModel components_from_classical(const StrategyModel& model,
                                                const std::vector<std::vector<double>>& mu) {
  const Scenario& sc = model.scenario();
  for (auto& al : model.alphabets())
    if (al.source < 0) throw Error(Errc::Data, "classical eavesdropping needs every agent on a source");
  ComponentModel cm;
  cm.scenario = sc;
  cm.weights = mu;
  cm.joint = model.joint();
  std::vector<int> lam(model.n_blocks());
  std::vector<std::uint32_t> col(sc.n_x);
  for (std::size_t c = 0; c < model.n_cols(); ++c) {
    model.joint().decode(c, lam.data());
    model.column(lam.data(), col.data());
    std::vector<double> t(sc.d, 0.0);
    for (std::size_t xi = 0; xi < sc.n_x; ++xi) t[sc.index(col[xi], xi)] = 1.0;
    cm.tables.push_back(std::move(t));
  }
  return cm;
}

// p(e | z, k_group [, a_h, x_h]) for one eavesdropper system.
struct EveTable {
  int n_e = 2, n_z = 2, K = 1;
  int ctx_agent = -1;  // optionally conditions on one agent's (a, x)
  int n_ctx = 1;
  std::vector<double> p;  // [((ctx * K + k) * n_z + z) * n_e + e]

  double at(int e, int z, int k, int ctx = 0) const {
    return p[((std::size_t(ctx) * K + k) * n_z + z) * n_e + e];
  }
};

struct EveModel {
  std::vector<std::vector<int>> groups;  // partition of sources
  std::vector<EveTable> tables;          // one per group
};

namespace detail {

inline std::vector<int> group_cards(const ComponentModel& cm, const std::vector<std::vector<int>>& groups) {
  std::vector<int> K;
  for (auto& g : groups) {
    int c = 1;
    for (int j : g) c *= cm.joint.base[j];
    K.push_back(c);
  }
  return K;
}

inline void check_groups(const ComponentModel& cm, const std::vector<std::vector<int>>& groups) {
  std::vector<int> seen(cm.scenario.m, 0);
  for (auto& g : groups)
    for (int j : g) {
      if (j < 0 || j >= cm.scenario.m) throw Error(Errc::BadIndex, "eve group names an unknown source");
      ++seen[j];
    }
  for (int s : seen)
    if (s != 1) throw Error(Errc::Data, "eve groups must partition the sources");
}

inline int group_component(const ComponentModel& cm, const std::vector<int>& g, const int* k) {
  int c = 0, mul = 1;
  for (int j : g) {
    c += k[j] * mul;
    mul *= cm.joint.base[j];
  }
  return c;
}

}  // namespace detail

inline std::vector<std::vector<int>> singleton_groups(int m) {
  std::vector<std::vector<int>> g;
  for (int j = 0; j < m; ++j) g.push_back({j});
  return g;
}

inline EveModel constant_eve(const ComponentModel& cm, std::vector<std::vector<int>> groups = {}) {
  if (groups.empty()) groups = singleton_groups(cm.scenario.m);
  detail::check_groups(cm, groups);
  EveModel ev;
  ev.groups = groups;
  for (int K : detail::group_cards(cm, groups)) {
    EveTable t;
    t.K = K;
    t.p.assign(std::size_t(K) * 2 * 2, 0.5);
    ev.tables.push_back(t);
  }
  return ev;
}

// e = component of the group (ignores z).
inline EveModel copy_eve(const ComponentModel& cm, std::vector<std::vector<int>> groups = {}) {
  if (groups.empty()) groups = singleton_groups(cm.scenario.m);
  detail::check_groups(cm, groups);
  EveModel ev;
  ev.groups = groups;
  for (int K : detail::group_cards(cm, groups)) {
    EveTable t;
    t.K = K;
    t.n_e = K;
    t.n_z = 1;
    t.p.assign(std::size_t(K) * K, 0.0);
    for (int k = 0; k < K; ++k) t.p[std::size_t(k) * K + k] = 1.0;
    ev.tables.push_back(t);
  }
  return ev;
}

// Random stochastic tables; with ctx_agents[g] >= 0 the table also reads that
// agent's (a, x).
template <class Rng>
inline EveModel random_eve(const ComponentModel& cm, Rng& rng, std::vector<std::vector<int>> groups = {},
                           int n_e = 2, int n_z = 2, std::vector<int> ctx_agents = {}) {
  if (groups.empty()) groups = singleton_groups(cm.scenario.m);
  detail::check_groups(cm, groups);
  EveModel ev;
  ev.groups = groups;
  auto K = detail::group_cards(cm, groups);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    EveTable t;
    t.K = K[g];
    t.n_e = n_e;
    t.n_z = n_z;
    if (g < ctx_agents.size() && ctx_agents[g] >= 0) {
      t.ctx_agent = ctx_agents[g];
      t.n_ctx = cm.scenario.outputs[t.ctx_agent] * cm.scenario.inputs[t.ctx_agent];
    }
    const std::size_t rows = std::size_t(t.n_ctx) * t.K * t.n_z;
    for (std::size_t r = 0; r < rows; ++r)
      for (double v : detail::dirichlet1(std::size_t(n_e), rng)) t.p.push_back(v);
    ev.tables.push_back(t);
  }
  return ev;
}

// Agents whose group sets are disjoint (merged sources shrink the set).
inline IndependentSet reduced_independent_set(const Scenario& sc, const IndependentSet& ind,
                                              const std::vector<std::vector<int>>& groups) {
  std::vector<int> gid(sc.m, 0);
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (int j : groups[g]) gid[j] = static_cast<int>(g);
  std::vector<int> keep;
  std::vector<char> used(groups.size(), 0);
  for (int i : ind.indices) {
    bool ok = true;
    for (int j : sc.sharing[i]) ok = ok && !used[gid[j]];
    if (!ok) continue;
    for (int j : sc.sharing[i]) used[gid[j]] = 1;
    keep.push_back(i);
  }
  return make_independent_set(sc.n, keep);
}

// Joint P(a, e | x, z), indexed ((e * n_ze + z) * d + cell).  Only for small
// models; used for the direct checks.
inline std::vector<double> joint_with_eve(const ComponentModel& cm, const EveModel& ev, std::size_t& n_e,
                                          std::size_t& n_z) {
  const Scenario& sc = cm.scenario;
  Radix er, zr;
  for (auto& t : ev.tables) {
    er.base.push_back(t.n_e);
    zr.base.push_back(t.n_z);
  }
  n_e = er.size();
  n_z = zr.size();
  if (double(cm.tables.size()) * double(sc.d) * double(n_e * n_z) > 2e8)
    throw Error(Errc::TooLarge, "joint eavesdropper table too large");
  std::vector<double> out(n_e * n_z * sc.d, 0.0);
  std::vector<int> k(sc.m), a(sc.n), x(sc.n), e(ev.tables.size()), z(ev.tables.size());
  std::vector<int> kg(ev.groups.size());
  for (std::size_t c = 0; c < cm.tables.size(); ++c) {
    cm.joint.decode(c, k.data());
    double w = 1;
    for (int j = 0; j < sc.m; ++j) w *= cm.weights[j][k[j]];
    if (w == 0) continue;
    for (std::size_t g = 0; g < ev.groups.size(); ++g) kg[g] = detail::group_component(cm, ev.groups[g], k.data());
    for (std::size_t xi = 0; xi < sc.n_x; ++xi) {
      sc.x_radix.decode(xi, x.data());
      for (std::size_t ai = 0; ai < sc.n_a; ++ai) {
        const double pk = cm.tables[c][sc.index(ai, xi)];
        if (pk == 0) continue;
        sc.a_radix.decode(ai, a.data());
        for (std::size_t ei = 0; ei < n_e; ++ei) {
          er.decode(ei, e.data());
          for (std::size_t zi = 0; zi < n_z; ++zi) {
            zr.decode(zi, z.data());
            double pe = 1;
            for (std::size_t g = 0; g < ev.tables.size() && pe != 0; ++g) {
              const auto& t = ev.tables[g];
              const int ctx = t.ctx_agent < 0 ? 0 : a[t.ctx_agent] + sc.outputs[t.ctx_agent] * x[t.ctx_agent];
              pe *= t.at(e[g], z[g], kg[g], ctx);
            }
            out[(ei * n_z + zi) * sc.d + sc.index(ai, xi)] += w * pk * pe;
          }
        }
      }
    }
  }
  return out;
}

// max over x, x', z, e of |p(e|x,z) - p(e|x',z)|.
inline double eve_signaling(const ComponentModel& cm, const EveModel& ev) {
  bool ctx = false;
  for (auto& t : ev.tables) ctx = ctx || t.ctx_agent >= 0;
  if (!ctx) return 0.0;  // tables read only the sources, which ignore x
  const Scenario& sc = cm.scenario;
  std::size_t ne, nz;
  auto J = joint_with_eve(cm, ev, ne, nz);
  double worst = 0;
  for (std::size_t ei = 0; ei < ne; ++ei)
    for (std::size_t zi = 0; zi < nz; ++zi) {
      std::vector<double> pe(sc.n_x, 0.0);
      for (std::size_t xi = 0; xi < sc.n_x; ++xi)
        for (std::size_t ai = 0; ai < sc.n_a; ++ai) pe[xi] += J[(ei * nz + zi) * sc.d + sc.index(ai, xi)];
      auto [mn, mx] = std::minmax_element(pe.begin(), pe.end());
      worst = std::max(worst, *mx - *mn);
    }
  return worst;
}

// Everything that does not depend on the eavesdropper's tables.
struct SecurityContext {
  const ComponentModel* cm = nullptr;
  std::vector<std::vector<int>> groups;
  IndependentSet independent;
  double R = 0, bound = 0;
  Eigen::MatrixXd M;  // rows (a_I, x), cols joint component: w_k P_k(a_I|x)
};

inline SecurityContext prepare_security(const ComponentModel& cm, const IndependentSet& ind,
                                        const std::vector<std::vector<int>>& groups) {
  const Scenario& sc = cm.scenario;
  if (!sc.binary()) throw Error(Errc::NonBinary, "security bounds need binary inputs and outputs");
  detail::check_groups(cm, groups);
  SecurityContext cx;
  cx.cm = &cm;
  cx.groups = groups;
  cx.independent = reduced_independent_set(sc, ind, groups);
  if (cx.independent.k() == 0) throw Error(Errc::Data, "no independent agent survives the merging");
  CorrelationTensor P(sc, cm.mixture(), 1e-9);
  cx.R = eval_Rk(P, cx.independent).R;
  cx.bound = eavesdropper_bound(std::min(2.0, cx.R), cx.independent.k());
  const std::size_t nI = std::size_t(1) << cx.independent.k();
  const std::size_t K = cm.tables.size();
  std::vector<int> a(sc.n), k(sc.m);
  std::vector<std::size_t> aI(sc.n_a);
  for (std::size_t ai = 0; ai < sc.n_a; ++ai) {
    sc.a_radix.decode(ai, a.data());
    std::size_t r = 0;
    for (int t = 0; t < cx.independent.k(); ++t) r |= std::size_t(a[cx.independent.indices[t]]) << t;
    aI[ai] = r;
  }
  cx.M = Eigen::MatrixXd::Zero(Eigen::Index(nI * sc.n_x), Eigen::Index(K));
  for (std::size_t c = 0; c < K; ++c) {
    cm.joint.decode(c, k.data());
    double w = 1;
    for (int j = 0; j < sc.m; ++j) w *= cm.weights[j][k[j]];
    for (std::size_t xi = 0; xi < sc.n_x; ++xi)
      for (std::size_t ai = 0; ai < sc.n_a; ++ai)
        cx.M(Eigen::Index(aI[ai] + nI * xi), Eigen::Index(c)) += w * cm.tables[c][sc.index(ai, xi)];
  }
  return cx;
}

inline SecurityReport simulate_eavesdropper(const SecurityContext& cx, const EveModel& ev,
                                            double tol = kNsTol) {
  const ComponentModel& cm = *cx.cm;
  const Scenario& sc = cm.scenario;
  if (ev.groups != cx.groups || ev.groups.size() != ev.tables.size())
    throw Error(Errc::Mismatch, "eve groups differ from the prepared context");
  auto Kg = detail::group_cards(cm, ev.groups);
  for (std::size_t g = 0; g < ev.tables.size(); ++g) {
    const auto& t = ev.tables[g];
    if (t.K != Kg[g] || t.p.size() != std::size_t(t.n_ctx) * t.K * t.n_z * t.n_e)
      throw Error(Errc::Mismatch, "eve table shape does not match the source model");
    for (std::size_t r = 0; r < t.p.size(); r += t.n_e) {
      double s = 0;
      for (int e = 0; e < t.n_e; ++e) {
        if (t.p[r + e] < 0) throw Error(Errc::Data, "negative eve probability");
        s += t.p[r + e];
      }
      if (std::abs(s - 1) > 1e-9) throw Error(Errc::Data, "eve table rows must be normalized");
    }
  }
  if (const double sig = eve_signaling(cm, ev); sig > tol)
    throw Error(Errc::SignalingEve, "p(e|x,z) depends on x by " + std::to_string(sig));

  SecurityReport rep;
  rep.independent = cx.independent;
  rep.k = cx.independent.k();
  rep.R = cx.R;
  rep.bound = cx.bound;

  Radix er, zr;
  for (auto& t : ev.tables) {
    er.base.push_back(t.n_e);
    zr.base.push_back(t.n_z);
  }
  const std::size_t ne = er.size(), nz = zr.size();
  const std::size_t nI = std::size_t(1) << rep.k;
  // Q[(aI, x), (e, z)] = P(a_I, e | x, z)
  Eigen::MatrixXd Q;
  bool ctx = false;
  for (auto& t : ev.tables) ctx = ctx || t.ctx_agent >= 0;
  std::vector<int> a(sc.n), k(sc.m), e(ev.tables.size()), z(ev.tables.size());
  if (!ctx) {
    const std::size_t K = cm.tables.size();
    Eigen::MatrixXd Em(Eigen::Index(ne * nz), Eigen::Index(K));
    std::vector<int> kg(ev.groups.size());
    for (std::size_t c = 0; c < K; ++c) {
      cm.joint.decode(c, k.data());
      for (std::size_t g = 0; g < ev.groups.size(); ++g) kg[g] = detail::group_component(cm, ev.groups[g], k.data());
      for (std::size_t ei = 0; ei < ne; ++ei) {
        er.decode(ei, e.data());
        for (std::size_t zi = 0; zi < nz; ++zi) {
          zr.decode(zi, z.data());
          double pe = 1;
          for (std::size_t g = 0; g < ev.tables.size(); ++g) pe *= ev.tables[g].at(e[g], z[g], kg[g]);
          Em(Eigen::Index(ei * nz + zi), Eigen::Index(c)) = pe;
        }
      }
    }
    Q = cx.M * Em.transpose();
  } else {
    std::size_t ne2, nz2;
    auto J = joint_with_eve(cm, ev, ne2, nz2);
    Q = Eigen::MatrixXd::Zero(Eigen::Index(nI * sc.n_x), Eigen::Index(ne * nz));
    for (std::size_t ai = 0; ai < sc.n_a; ++ai) {
      sc.a_radix.decode(ai, a.data());
      std::size_t r = 0;
      for (int t = 0; t < rep.k; ++t) r |= std::size_t(a[rep.independent.indices[t]]) << t;
      for (std::size_t ez = 0; ez < ne * nz; ++ez)
        for (std::size_t xi = 0; xi < sc.n_x; ++xi)
          Q(Eigen::Index(r + nI * xi), Eigen::Index(ez)) += J[ez * sc.d + sc.index(ai, xi)];
    }
  }
  // eve's marginals p(e_g | z_g), taken at x = 0 (x-independent by the check above)
  std::vector<std::vector<double>> marg(ev.tables.size());
  for (std::size_t g = 0; g < ev.tables.size(); ++g)
    marg[g].assign(std::size_t(ev.tables[g].n_e) * ev.tables[g].n_z, 0.0);
  for (std::size_t ei = 0; ei < ne; ++ei) {
    er.decode(ei, e.data());
    for (std::size_t zi = 0; zi < nz; ++zi) {
      zr.decode(zi, z.data());
      double pez = 0;
      for (std::size_t r = 0; r < nI; ++r) pez += Q(Eigen::Index(r), Eigen::Index(ei * nz + zi));
      for (std::size_t g = 0; g < ev.tables.size(); ++g) {
        double share = 1;
        for (std::size_t h = 0; h < ev.tables.size(); ++h)
          if (h != g) share *= ev.tables[h].n_z;
        marg[g][std::size_t(z[g]) * ev.tables[g].n_e + e[g]] += pez / share;
      }
    }
  }
  double worst = 0, avg = 0, mass = 0;
  for (std::size_t row = 0; row < nI * sc.n_x; ++row)
    for (std::size_t zi = 0; zi < nz; ++zi) {
      zr.decode(zi, z.data());
      double p = 0;
      for (std::size_t ei = 0; ei < ne; ++ei) p += Q(Eigen::Index(row), Eigen::Index(ei * nz + zi));
      if (p <= 1e-12) continue;
      double dist = 0;
      for (std::size_t ei = 0; ei < ne; ++ei) {
        er.decode(ei, e.data());
        double prod = 1;
        for (std::size_t g = 0; g < ev.tables.size(); ++g)
          prod *= marg[g][std::size_t(z[g]) * ev.tables[g].n_e + e[g]];
        dist += std::abs(Q(Eigen::Index(row), Eigen::Index(ei * nz + zi)) / p - prod);
      }
      dist *= 0.5;
      worst = std::max(worst, dist);
      avg += p * dist;
      mass += p;
    }
  rep.D_observed = worst;
  rep.D_average = mass > 0 ? avg / mass : 0;
  rep.satisfied = worst <= rep.bound + kFuncTol;
  return rep;
}

inline SecurityReport simulate_eavesdropper(const ComponentModel& cm, const IndependentSet& ind,
                                            const EveModel& ev, double tol = kNsTol) {
  return simulate_eavesdropper(prepare_security(cm, ind, ev.groups), ev, tol);
}

// ---------------------------------------------------------------------------

struct PresetSpec {
  std::string kind;  // chain, star, hybrid, bilocal, bell
  int n = 0;
};

inline PresetSpec parse_preset(const std::string& s) {
  PresetSpec p;
  const auto colon = s.find(':');
  p.kind = s.substr(0, colon);
  if (colon != std::string::npos) {
    try {
      p.n = std::stoi(s.substr(colon + 1));
    } catch (...) {
      throw Error(Errc::Usage, "bad preset size in '" + s + "'");
    }
  }
  return p;
}

inline QuantumNetwork preset_network(const std::string& spec, double v = 1.0) {
  auto p = parse_preset(spec);
  if (p.kind == "chain") return preset_chain(p.n, v);
  if (p.kind == "star") return preset_star(p.n, v);
  if (p.kind == "hybrid") return preset_hybrid(v);
  if (p.kind == "bilocal-epr" || p.kind == "bilocal") return preset_bilocal_epr(v);
  if (p.kind == "bell-epr") return preset_bell_epr(v);
  throw Error(Errc::Usage, "unknown preset '" + spec + "'");
}

}  // namespace netcausal
