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

// Tripartite (n = 3, m = 2) causal hierarchy: class enumeration, graph
// rewrites to input-to-output form, grouping, and sampled implication tests.
//
// Equivalence here is always "non-signaling equivalence": two classes are
// equivalent when they admit the same non-signaling boxes.

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "netcausal/compat.hpp"
#include "netcausal/functionals.hpp"
#include "netcausal/scenario.hpp"
#include "netcausal/strategy.hpp"

namespace netcausal {

// All label sets {I_1,...,I_n} with i in I_i (raw, unreduced).
inline std::vector<CausalClass> enumerate_ionbdags(int n = 3, int m = 2) {
  if (n != 3 || m != 2) throw Error(Errc::OutOfRange, "hierarchy is implemented for n=3, m=2 only");
  std::vector<CausalClass> out;
  std::vector<std::vector<std::vector<int>>> opts(n);
  for (int i = 0; i < n; ++i)
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (!(mask >> i & 1u)) continue;
      std::vector<int> s;
      for (int j = 0; j < n; ++j)
        if (mask >> j & 1u) s.push_back(j);
      opts[i].push_back(s);
    }
  for (auto& a : opts[0])
    for (auto& b : opts[1])
      for (auto& c : opts[2]) out.push_back(make_class({a, b, c}));
  return out;
}

inline int relaxation_level(const CausalClass& c) { return c.relaxations(); }

// A1 <-> A3 mirror of the bilocal topology.
inline CausalClass mirror(const CausalClass& c) {
  const int n = static_cast<int>(c.parents.size());
  std::vector<std::vector<int>> p(n);
  for (int i = 0; i < n; ++i) {
    for (int v : c.parents[n - 1 - i]) p[i].push_back(n - 1 - v);
    std::sort(p[i].begin(), p[i].end());
  }
  return CausalClass{p};
}

inline CausalClass canonical(const CausalClass& c) {
  CausalClass m = mirror(c);
  return m.parents < c.parents ? m : c;
}

// Some agent ordering where every agent sees the inputs of all earlier
// agents: a Bayes chain then reproduces every non-signaling box.
inline bool is_ns_born(const CausalClass& c) {
  std::vector<int> perm(c.parents.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (std::size_t t = 0; t < perm.size() && ok; ++t)
      for (std::size_t s = 0; s < t && ok; ++s) {
        auto& I = c.parents[perm[t]];
        ok = std::find(I.begin(), I.end(), perm[s]) != I.end();
      }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// An agent that sees every input can absorb the relaxations other agents
// take from its input.
inline CausalClass case2_reduce(const CausalClass& c) {
  const int n = static_cast<int>(c.parents.size());
  std::vector<int> full;
  for (int j = 0; j < n; ++j)
    if (static_cast<int>(c.parents[j].size()) == n) full.push_back(j);
  CausalClass r = c;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(c.parents[i].size()) == n) continue;
    std::vector<int> keep;
    for (int v : c.parents[i])
      if (v == i || std::find(full.begin(), full.end(), v) == full.end()) keep.push_back(v);
    r.parents[i] = keep;
  }
  return r;
}

// ---------------------------------------------------------------------------
// General NBDAG edge sets and the rewrite to input-to-output form.

struct Node {
  enum Kind { Source, Input, Output } kind;
  int index;
  bool operator==(const Node&) const = default;
};

struct NbdagEdgeSet {
  Scenario scenario;
  std::vector<std::pair<Node, Node>> edges;  // beyond the base GLHV edges
};

inline CausalClass reduce_by_lemmas(const NbdagEdgeSet& g) {
  const Scenario& sc = g.scenario;
  const int n = sc.n, m = sc.m;
  auto id = [&](const Node& v) {
    const int lim = v.kind == Node::Source ? m : n;
    if (v.index < 0 || v.index >= lim) throw Error(Errc::BadIndex, "edge endpoint out of range");
    return v.kind == Node::Source ? v.index : v.kind == Node::Input ? m + v.index : m + n + v.index;
  };
  const int N = m + 2 * n;
  std::vector<std::vector<int>> adj(N);
  for (int j = 0; j < m; ++j)
    for (int i : sc.holders[j]) adj[j].push_back(m + n + i);
  for (int i = 0; i < n; ++i) adj[m + i].push_back(m + n + i);
  for (auto& [u, v] : g.edges) adj[id(u)].push_back(id(v));
  // cycle check
  std::vector<int> state(N, 0);
  std::function<bool(int)> dfs = [&](int u) {
    state[u] = 1;
    for (int w : adj[u]) {
      if (state[w] == 1) return true;
      if (state[w] == 0 && dfs(w)) return true;
    }
    state[u] = 2;
    return false;
  };
  for (int u = 0; u < N; ++u)
    if (state[u] == 0 && dfs(u)) throw Error(Errc::CyclicInput, "edge set has a directed cycle");

  std::vector<std::set<int>> I(n);
  for (int i = 0; i < n; ++i) I[i].insert(i);
  for (auto& [u, v] : g.edges) {
    const bool u_agent = u.kind != Node::Source, v_agent = v.kind != Node::Source;
    if (u_agent && v_agent) {
      // an upstream agent (a_j, x_j) feeding agent i amounts to x_j in I_i
      if (u.index != v.index) I[v.index].insert(u.index);
    } else if (u.kind == Node::Source && v.kind == Node::Input) {
      for (int k : sc.holders[u.index]) I[k].insert(v.index);
    } else if (u.kind == Node::Input && v.kind == Node::Source) {
      for (int k : sc.holders[v.index]) I[k].insert(u.index);
    } else if (u.kind == Node::Source && v.kind == Node::Output) {
      const auto& h = sc.holders[u.index];
      if (std::find(h.begin(), h.end(), v.index) == h.end())
        throw Error(Errc::Data, "source-to-output edge changes the sharing map");
    } else {
      throw Error(Errc::Data, "unsupported edge kind");
    }
  }
  std::vector<std::vector<int>> p(n);
  for (int i = 0; i < n; ++i) p[i].assign(I[i].begin(), I[i].end());
  return CausalClass{p};
}

// ---------------------------------------------------------------------------
// Witness boxes and sampling.

inline CorrelationTensor parity_witness() {
  return tensor_from(bilocal_scenario(), [](const int* a, const int* x) {
    return ((a[0] ^ a[1] ^ a[2]) == (x[0] & (x[1] ^ x[2]))) ? 0.25 : 0.0;
  });
}

inline CorrelationTensor and_parity_box() {
  return tensor_from(bilocal_scenario(), [](const int* a, const int* x) {
    return ((a[0] ^ a[1] ^ a[2]) == (x[0] & x[1] & x[2])) ? 0.25 : 0.0;
  });
}

// a1 ^= r1, a2 ^= r1 ^ r2, a3 ^= r2 with uniform bits r_j on the sources:
// keeps the class, kills every marginal, so the result is non-signaling.
inline CorrelationTensor pad_bilocal(const CorrelationTensor& Q) {
  const Scenario& sc = Q.scenario();
  if (!(sc == bilocal_scenario())) throw Error(Errc::Mismatch, "padding needs the bilocal scenario");
  std::vector<double> t(sc.d, 0.0);
  for (std::size_t xi = 0; xi < sc.n_x; ++xi)
    for (std::size_t ai = 0; ai < sc.n_a; ++ai) {
      const double q = Q.at(ai, xi);
      if (q == 0) continue;
      for (int r1 = 0; r1 < 2; ++r1)
        for (int r2 = 0; r2 < 2; ++r2) {
          const std::size_t a = ai ^ std::size_t(r1 | ((r1 ^ r2) << 1) | (r2 << 2));
          t[sc.index(a, xi)] += 0.25 * q;
        }
    }
  return CorrelationTensor(sc, std::move(t), 1e-9);
}

// Dirichlet(1) weights per source over a capped strategy alphabet.
template <class Rng>
inline CorrelationTensor sample_compatible(const StrategyModel& model, Rng& rng) {
  std::vector<std::vector<double>> mu;
  for (int k : model.cards()) mu.push_back(detail::dirichlet1(std::size_t(k), rng));
  detail::ColumnCache cc(model);
  return CorrelationTensor(model.scenario(), detail::reconstruct(model.scenario(), cc, mu), 1e-9);
}

// Non-signaling boxes compatible with g: padded class samples (mixed and
// deterministic), alternated.
template <class Rng>
inline std::vector<CorrelationTensor> sample_ns_compatible(const CausalClass& g, int count, Rng& rng,
                                                           int cap = 16) {
  const Scenario sc = bilocal_scenario();
  StrategyModel model(sc, g, cap, rng());
  std::vector<CorrelationTensor> out;
  std::vector<int> lam(model.n_blocks());
  std::vector<std::uint32_t> col(sc.n_x);
  for (int s = 0; s < count; ++s) {
    if (s % 2 == 0) {
      out.push_back(pad_bilocal(sample_compatible(model, rng)));
    } else {
      for (std::size_t k = 0; k < lam.size(); ++k)
        lam[k] = std::uniform_int_distribution<int>(0, model.cards()[k] - 1)(rng);
      model.column(lam.data(), col.data());
      std::vector<double> t(sc.d, 0.0);
      for (std::size_t xi = 0; xi < sc.n_x; ++xi) t[sc.index(col[xi], xi)] = 1.0;
      out.push_back(pad_bilocal(CorrelationTensor(sc, std::move(t))));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Implication tests.

struct Implication {
  enum Kind { Implies, Refuted, Inconclusive } kind = Inconclusive;
  std::optional<CorrelationTensor> witness;
  std::string reason;
  int samples = 0;
};

inline const char* implication_name(Implication::Kind k) {
  return k == Implication::Implies ? "implies" : k == Implication::Refuted ? "refuted" : "inconclusive";
}

// Refutation only needs a certified Incompatible sample, so no search is run.
template <class Rng>
inline Implication test_implication(const CausalClass& g1, const CausalClass& g2, int samples, Rng& rng,
                                    const SolverConfig& cfg = {}) {
  if (g1.parents.size() != g2.parents.size()) throw Error(Errc::Mismatch, "classes differ in arity");
  Implication r;
  if (g1.subset_of(g2)) {
    r.kind = Implication::Implies;
    r.reason = "every relaxation of " + g1.str() + " is present in " + g2.str();
    return r;
  }
  auto boxes = sample_ns_compatible(g1, samples, rng, cfg.cap);
  for (auto& P : boxes) {
    ++r.samples;
    auto c = inequality_certificates(P, g2, cfg);
    if (c.refuted) {
      r.kind = Implication::Refuted;
      r.witness = P;
      r.reason = c.detail;
      return r;
    }
  }
  r.reason = "numerically unrefuted over " + std::to_string(r.samples) + " samples";
  return r;
}

// Bayes chain P = p(a1|x1) p(a3|x1,x3,a1) p(a2|x,a1,a3), valid for every
// non-signaling tripartite box.  Returns the reconstruction.
inline CorrelationTensor bayes_chain_reconstruct(const CorrelationTensor& P) {
  const Scenario& sc = P.scenario();
  if (sc.n != 3) throw Error(Errc::WrongArity, "Bayes chain is tripartite");
  const int A1 = sc.outputs[0], A2 = sc.outputs[1], A3 = sc.outputs[2];
  std::vector<double> t(sc.d, 0.0);
  std::vector<int> x(3);
  for (std::size_t xi = 0; xi < sc.n_x; ++xi) {
    sc.x_radix.decode(xi, x.data());
    const std::vector<int> x1{x[0], 0, 0}, x13{x[0], 0, x[2]};  // NS: the rest is irrelevant
    for (int a1 = 0; a1 < A1; ++a1) {
      double p1 = 0;
      for (int b = 0; b < A2; ++b)
        for (int c = 0; c < A3; ++c) p1 += P({a1, b, c}, x1);
      for (int a3 = 0; a3 < A3; ++a3) {
        double p13 = 0, p13x = 0;
        for (int b = 0; b < A2; ++b) {
          p13 += P({a1, b, a3}, x13);
          p13x += P({a1, b, a3}, x);
        }
        const double c3 = p1 > 0 ? p13 / p1 : 0;  // p(a3|x1,x3,a1)
        for (int a2 = 0; a2 < A2; ++a2) {
          const double c2 = p13x > 0 ? P({a1, a2, a3}, x) / p13x : 0;  // p(a2|x,a1,a3)
          t[sc.index(sc.a_radix.encode(std::vector<int>{a1, a2, a3}), xi)] = p1 * c3 * c2;
        }
      }
    }
  }
  return CorrelationTensor(sc, std::move(t), 1e-9);
}

// ---------------------------------------------------------------------------
// The full report.

struct HierarchyGroup {
  std::string label;  // "ns-born", "red", "grey", ""
  std::vector<CausalClass> members;  // canonical orbit representatives
  bool svetlichny_listed = false;
  bool ns_flagged = false;  // the cyclic class refuted against GLHV by the parity witness
};

struct PairCheck {
  CausalClass g1, g2;
  Implication::Kind forward, backward;
  std::string note;
};

struct HierarchyReport {
  int raw = 0, orbits = 0;
  std::map<int, std::vector<CausalClass>> levels;  // L -> canonical classes
  std::vector<HierarchyGroup> groups;
  std::vector<PairCheck> collapses;
  std::vector<std::pair<int, int>> edges;  // group implications (Hasse)
  int marginal_samples = 0, marginal_local = 0;
  Implication cyclic_vs_local;
  double witness_cca = 0, witness_svetlichny = 0;
  std::vector<std::pair<CausalClass, double>> svetlichny_bounds;  // class bound
  double cyclic_cca_bound = 0;
  int samples = 0;
};

inline std::vector<CausalClass> svetlichny_listed() {
  return {parse_class("(1)|(2)|(3)"),     parse_class("(1)|(1,2)|(3)"),
          parse_class("(1)|(2)|(2,3)"),   parse_class("(1,2)|(1,2)|(3)"),
          parse_class("(1)|(1,2)|(1,3)"), parse_class("(1)|(1,2)|(2,3)"),
          parse_class("(1,2)|(1,2)|(1,3)")};
}
inline CausalClass cyclic_class() { return parse_class("(1,3)|(1,2)|(2,3)"); }

inline HierarchyReport classify_hierarchy(int samples = 100, std::uint64_t seed = 1,
                                          const SolverConfig& cfg = {}) {
  HierarchyReport rep;
  rep.samples = samples;
  auto raw = enumerate_ionbdags(3, 2);
  rep.raw = static_cast<int>(raw.size());
  std::map<std::vector<std::vector<int>>, CausalClass> orb;
  for (auto& c : raw) orb.emplace(canonical(c).parents, canonical(c));
  rep.orbits = static_cast<int>(orb.size());
  for (auto& [k, c] : orb) rep.levels[c.relaxations()].push_back(c);

  // grouping: ns-born orbits collapse to the top; otherwise the case-2 image
  std::map<std::vector<std::vector<int>>, std::vector<CausalClass>> grp;
  std::vector<CausalClass> top;
  for (auto& [k, c] : orb) {
    if (is_ns_born(c))
      top.push_back(c);
    else
      grp[canonical(case2_reduce(c)).parents].push_back(c);
  }
  auto listed = svetlichny_listed();
  auto is_listed = [&](const CausalClass& c) {
    for (auto& l : listed)
      if (canonical(l).parents == c.parents) return true;
    return false;
  };
  rep.groups.push_back({"ns-born", top, false, false});
  for (auto& [k, mem] : grp) {
    HierarchyGroup g;
    g.members = mem;
    if (mem.size() > 1) {
      g.label = "red";
    } else if (is_listed(mem[0])) {
      g.label = "grey";
      g.svetlichny_listed = true;
    } else if (mem[0].parents == canonical(cyclic_class()).parents) {
      g.label = "grey";
      g.ns_flagged = true;
    }
    rep.groups.push_back(g);
  }

  // group lattice edges: g -> h when some member of g is a subset of one of h
  const int G = static_cast<int>(rep.groups.size());
  std::vector<std::vector<char>> reach(G, std::vector<char>(G, 0));
  for (int a = 0; a < G; ++a)
    for (int b = 0; b < G; ++b) {
      if (a == b) continue;
      for (auto& x : rep.groups[a].members)
        for (auto& y : rep.groups[b].members)
          if (x.subset_of(y) || x.subset_of(mirror(y))) reach[a][b] = 1;
    }
  for (int a = 0; a < G; ++a)
    for (int b = 0; b < G; ++b) {
      if (!reach[a][b] || reach[b][a]) continue;
      bool direct = true;
      for (int c = 0; c < G && direct; ++c)
        if (c != a && c != b && reach[a][c] && reach[c][b] && !reach[c][a] && !reach[b][c]) direct = false;
      if (direct) rep.edges.emplace_back(a, b);
    }

  // the asserted collapses, both directions
  std::mt19937_64 rng(seed);
  auto pair = [&](const char* s1, const char* s2) {
    PairCheck pc{parse_class(s1), parse_class(s2), Implication::Inconclusive, Implication::Inconclusive, ""};
    auto f = test_implication(pc.g1, pc.g2, samples, rng, cfg);
    auto b = test_implication(pc.g2, pc.g1, samples, rng, cfg);
    pc.forward = f.kind;
    pc.backward = b.kind;
    pc.note = f.reason + "; " + b.reason;
    rep.collapses.push_back(pc);
  };
  pair("(1)|(2)|(1,2,3)", "(1)|(2,3)|(1,2,3)");
  pair("(1)|(2)|(1,2,3)", "(1,3)|(2,3)|(1,2,3)");
  pair("(1)|(2,3)|(1,2,3)", "(1,3)|(2,3)|(1,2,3)");
  pair("(1)|(1,2,3)|(3)", "(1)|(1,2,3)|(2,3)");

  // star-class marginals are bipartite-local
  {
    const CausalClass star = parse_class("(1,3)|(2,3)|(1,2,3)");
    StrategyModel model(bilocal_scenario(), star, cfg.cap, rng());
    StrategyModel bell(bell_scenario(), local_class(2));
    auto M = bell.matrix();
    for (int s = 0; s < samples; ++s) {
      auto P = sample_compatible(model, rng);
      auto mg = marginalize(P, {0, 1}, {0, 0, 0});
      ++rep.marginal_samples;
      // a bipartite LHV test only needs the deterministic Bell strategies
      CorrelationTensor bip(bell_scenario(), mg.table(), 1e-9);
      rep.marginal_local += lp_membership(bip, M, 1e-7).status == Status::Compatible;
    }
  }

  // cyclic class vs GLHV: the parity witness
  {
    const auto B = parity_witness();
    rep.witness_cca = eval_cca(B);
    rep.witness_svetlichny = eval_svetlichny(B);
    Implication im;
    auto c = inequality_certificates(B, local_class(3), cfg);
    im.kind = c.refuted ? Implication::Refuted : Implication::Inconclusive;
    im.reason = c.detail;
    im.witness = B;
    im.samples = 1;
    rep.cyclic_vs_local = im;
  }
  for (auto& l : listed) rep.svetlichny_bounds.emplace_back(l, class_linear_bound(l, svetlichny_coeffs()));
  rep.cyclic_cca_bound = class_linear_bound(cyclic_class(), cca_coeffs());
  return rep;
}

// Graphviz rendering of the group lattice.
inline std::string hierarchy_dot(const HierarchyReport& rep) {
  std::string s = "digraph hierarchy {\n  rankdir=BT;\n  node [shape=box];\n";
  for (std::size_t g = 0; g < rep.groups.size(); ++g) {
    auto& G = rep.groups[g];
    std::string lbl;
    for (auto& m : G.members) lbl += (lbl.empty() ? "" : "\\n") + m.str();
    std::string color = G.label == "red" ? "mistyrose" : G.label == "grey" ? "lightgrey"
                        : G.label == "ns-born" ? "orange" : "white";
    s += "  g" + std::to_string(g) + " [label=\"" + lbl + "\", style=filled, fillcolor=" + color + "];\n";
  }
  for (auto [a, b] : rep.edges) s += "  g" + std::to_string(a) + " -> g" + std::to_string(b) + ";\n";
  return s + "}\n";
}

}  // namespace netcausal
