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

// Scenario skeleton, causal-class labels and dense correlation tables.
//
// Table layout: index = a_index + n_a * x_index, where a_index and x_index
// are little-endian mixed-radix numbers (agent 1 is the fastest digit).

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "netcausal/error.hpp"

namespace netcausal {

inline constexpr double kNormTol = 1e-12;
inline constexpr double kNsTol = 1e-9;
inline constexpr std::size_t kMaxDense = 1000000;

// Little-endian mixed radix; digit 0 varies fastest.
struct Radix {
  std::vector<int> base;

  std::size_t size() const {
    std::size_t s = 1;
    for (int b : base) s *= static_cast<std::size_t>(b);
    return s;
  }
  std::size_t encode(const int* digits) const {
    std::size_t idx = 0, mul = 1;
    for (std::size_t i = 0; i < base.size(); ++i) {
      idx += static_cast<std::size_t>(digits[i]) * mul;
      mul *= static_cast<std::size_t>(base[i]);
    }
    return idx;
  }
  std::size_t encode(const std::vector<int>& d) const { return encode(d.data()); }
  void decode(std::size_t idx, int* digits) const {
    for (std::size_t i = 0; i < base.size(); ++i) {
      digits[i] = static_cast<int>(idx % static_cast<std::size_t>(base[i]));
      idx /= static_cast<std::size_t>(base[i]);
    }
  }
  std::vector<int> decode(std::size_t idx) const {
    std::vector<int> d(base.size());
    decode(idx, d.data());
    return d;
  }
};

struct Scenario {
  int n = 0;  // agents
  int m = 0;  // sources
  std::vector<std::vector<int>> sharing;  // 0-based source ids per agent, sorted
  std::vector<int> inputs;
  std::vector<int> outputs;

  // derived
  std::vector<std::vector<int>> holders;  // agents per source, ascending
  Radix a_radix, x_radix;
  std::size_t n_a = 1, n_x = 1, d = 1;

  std::size_t index(std::size_t a_idx, std::size_t x_idx) const {
    return a_idx + n_a * x_idx;
  }
  bool binary() const {
    for (int i = 0; i < n; ++i)
      if (inputs[i] != 2 || outputs[i] != 2) return false;
    return true;
  }
  bool binary_outputs() const {
    return std::all_of(outputs.begin(), outputs.end(), [](int o) { return o == 2; });
  }
  bool shares_source(int i, int j) const {
    for (int s : sharing[i])
      if (std::find(sharing[j].begin(), sharing[j].end(), s) != sharing[j].end())
        return true;
    return false;
  }
  bool operator==(const Scenario& o) const {
    return n == o.n && m == o.m && sharing == o.sharing && inputs == o.inputs &&
           outputs == o.outputs;
  }
};

// sharing uses 0-based source ids.
inline Scenario build_scenario(int n, int m, std::vector<std::vector<int>> sharing,
                               std::vector<int> inputs, std::vector<int> outputs) {
  if (n <= 0 || m < 0) throw Error(Errc::Data, "agent count must be positive");
  if (static_cast<int>(sharing.size()) != n || static_cast<int>(inputs.size()) != n ||
      static_cast<int>(outputs.size()) != n)
    throw Error(Errc::Mismatch, "sharing/inputs/outputs must have one entry per agent");
  Scenario s;
  s.n = n;
  s.m = m;
  s.holders.assign(m, {});
  for (int i = 0; i < n; ++i) {
    if (inputs[i] < 1 || outputs[i] < 1)
      throw Error(Errc::Data, "cardinalities must be >= 1 (agent " + std::to_string(i + 1) + ")");
    std::sort(sharing[i].begin(), sharing[i].end());
    sharing[i].erase(std::unique(sharing[i].begin(), sharing[i].end()), sharing[i].end());
    for (int src : sharing[i]) {
      if (src < 0 || src >= m)
        throw Error(Errc::BadIndex, "agent " + std::to_string(i + 1) + " lists source " +
                                        std::to_string(src + 1) + " but m=" + std::to_string(m));
      s.holders[src].push_back(i);
    }
  }
  for (int j = 0; j < m; ++j)
    if (s.holders[j].empty())
      throw Error(Errc::EmptySource, "source " + std::to_string(j + 1) + " is not shared by any agent");
  s.sharing = std::move(sharing);
  s.inputs = std::move(inputs);
  s.outputs = std::move(outputs);
  s.a_radix.base = s.outputs;
  s.x_radix.base = s.inputs;
  double dd = 1;
  for (int i = 0; i < n; ++i) dd *= double(s.inputs[i]) * double(s.outputs[i]);
  if (dd > double(kMaxDense))
    throw Error(Errc::TooLarge, "dense table dimension " + std::to_string(dd) + " exceeds 1e6");
  s.n_a = s.a_radix.size();
  s.n_x = s.x_radix.size();
  s.d = s.n_a * s.n_x;
  return s;
}

inline Scenario binary_scenario(int n, int m, std::vector<std::vector<int>> sharing) {
  return build_scenario(n, m, std::move(sharing), std::vector<int>(n, 2), std::vector<int>(n, 2));
}

inline Scenario bilocal_scenario() { return binary_scenario(3, 2, {{0}, {0, 1}, {1}}); }
inline Scenario bell_scenario() { return binary_scenario(2, 1, {{0}, {0}}); }

// ---------------------------------------------------------------------------

struct CausalClass {
  std::vector<std::vector<int>> parents;  // 0-based, sorted; i in parents[i]

  bool operator==(const CausalClass& o) const { return parents == o.parents; }
  bool operator<(const CausalClass& o) const { return parents < o.parents; }
  int n() const { return static_cast<int>(parents.size()); }
  int relaxations() const {
    int L = 0;
    for (auto& p : parents) L += static_cast<int>(p.size()) - 1;
    return L;
  }
  bool is_local() const {
    for (std::size_t i = 0; i < parents.size(); ++i)
      if (parents[i].size() != 1) return false;
    return true;
  }
  bool subset_of(const CausalClass& o) const {
    if (o.parents.size() != parents.size()) return false;
    for (std::size_t i = 0; i < parents.size(); ++i)
      if (!std::includes(o.parents[i].begin(), o.parents[i].end(), parents[i].begin(),
                         parents[i].end()))
        return false;
    return true;
  }
  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < parents.size(); ++i) {
      if (i) s += ",";
      s += "(";
      for (std::size_t k = 0; k < parents[i].size(); ++k) {
        if (k) s += ",";
        s += std::to_string(parents[i][k] + 1);
      }
      s += ")";
    }
    return s + "}";
  }
};

inline CausalClass make_class(std::vector<std::vector<int>> parents) {
  const int n = static_cast<int>(parents.size());
  for (int i = 0; i < n; ++i) {
    auto& p = parents[i];
    for (int v : p)
      if (v < 0 || v >= n) throw Error(Errc::BadIndex, "parent input out of range");
    if (std::find(p.begin(), p.end(), i) == p.end()) p.push_back(i);
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
  }
  return CausalClass{std::move(parents)};
}

inline CausalClass local_class(int n) {
  std::vector<std::vector<int>> p(n);
  for (int i = 0; i < n; ++i) p[i] = {i};
  return CausalClass{p};
}

// Builds from 1-based labels, e.g. {{1},{1,2},{2}}.  Own input must be listed.
inline CausalClass class_from_labels(const std::vector<std::vector<int>>& labels) {
  std::vector<std::vector<int>> p(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (int v : labels[i]) p[i].push_back(v - 1);
    if (std::find(p[i].begin(), p[i].end(), int(i)) == p[i].end())
      throw Error(Errc::Data, "class label for agent " + std::to_string(i + 1) +
                                  " must contain its own input");
  }
  return make_class(std::move(p));
}

// Parses "(1)|(2)|(1,2,3)" or "{(1),(2),(1,2,3)}".
inline CausalClass parse_class(const std::string& text) {
  std::vector<std::vector<int>> labels;
  std::vector<int> cur;
  bool open = false;
  std::string num;
  auto flush = [&] {
    if (!num.empty()) {
      cur.push_back(std::stoi(num));
      num.clear();
    }
  };
  for (char c : text) {
    if (c == '(') {
      if (open) throw Error(Errc::Usage, "nested '(' in class label");
      open = true;
      cur.clear();
    } else if (c == ')') {
      if (!open) throw Error(Errc::Usage, "unbalanced ')' in class label");
      flush();
      labels.push_back(cur);
      open = false;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      if (!open) throw Error(Errc::Usage, "digit outside parentheses in class label");
      num += c;
    } else if (c == ',' || c == ' ') {
      if (open) flush();
    } else if (c == '|' || c == '{' || c == '}') {
      if (open) throw Error(Errc::Usage, "separator inside parentheses");
    } else {
      throw Error(Errc::Usage, std::string("unexpected character '") + c + "' in class label");
    }
  }
  if (open) throw Error(Errc::Usage, "unterminated class label");
  if (labels.empty()) throw Error(Errc::Usage, "empty class label");
  return class_from_labels(labels);
}

inline void check_class(const Scenario& sc, const CausalClass& cls) {
  if (cls.n() != sc.n)
    throw Error(Errc::Mismatch, "class has " + std::to_string(cls.n()) + " agents, scenario " +
                                    std::to_string(sc.n));
  for (int i = 0; i < sc.n; ++i) {
    const auto& p = cls.parents[i];
    if (std::find(p.begin(), p.end(), i) == p.end())
      throw Error(Errc::Data, "agent output must have its own input as parent");
    for (int v : p)
      if (v < 0 || v >= sc.n) throw Error(Errc::BadIndex, "parent input out of range");
  }
}

// ---------------------------------------------------------------------------

class CorrelationTensor {
 public:
  CorrelationTensor() = default;
  CorrelationTensor(Scenario sc, std::vector<double> table, double tol = kNormTol)
      : sc_(std::move(sc)), t_(std::move(table)) {
    if (t_.size() != sc_.d)
      throw Error(Errc::Mismatch, "table length " + std::to_string(t_.size()) +
                                      " != d = " + std::to_string(sc_.d));
    for (std::size_t x = 0; x < sc_.n_x; ++x) {
      double s = 0;
      for (std::size_t a = 0; a < sc_.n_a; ++a) {
        double p = t_[sc_.index(a, x)];
        if (!(p >= -tol) || !std::isfinite(p))
          throw Error(Errc::Data, "negative or non-finite probability at index " +
                                      std::to_string(sc_.index(a, x)));
        s += p;
      }
      if (std::abs(s - 1.0) > tol)
        throw Error(Errc::Data, "input " + std::to_string(x) + " sums to " + std::to_string(s));
    }
  }

  const Scenario& scenario() const { return sc_; }
  const std::vector<double>& table() const { return t_; }
  std::size_t size() const { return t_.size(); }
  double at(std::size_t a_idx, std::size_t x_idx) const { return t_[sc_.index(a_idx, x_idx)]; }
  double operator()(const std::vector<int>& a, const std::vector<int>& x) const {
    return at(sc_.a_radix.encode(a), sc_.x_radix.encode(x));
  }

 private:
  Scenario sc_;
  std::vector<double> t_;
};

inline CorrelationTensor uniform_tensor(const Scenario& sc) {
  return CorrelationTensor(sc, std::vector<double>(sc.d, 1.0 / double(sc.n_a)));
}

// f(a, x) with digit arrays of length n.
inline CorrelationTensor tensor_from(const Scenario& sc,
                                     const std::function<double(const int*, const int*)>& f,
                                     double tol = kNormTol) {
  std::vector<double> t(sc.d);
  std::vector<int> a(sc.n), x(sc.n);
  for (std::size_t xi = 0; xi < sc.n_x; ++xi) {
    sc.x_radix.decode(xi, x.data());
    for (std::size_t ai = 0; ai < sc.n_a; ++ai) {
      sc.a_radix.decode(ai, a.data());
      t[sc.index(ai, xi)] = f(a.data(), x.data());
    }
  }
  return CorrelationTensor(sc, std::move(t), tol);
}

// t*P + (1-t)*Q, same scenario.
inline CorrelationTensor mix(const CorrelationTensor& P, const CorrelationTensor& Q, double t) {
  if (!(P.scenario() == Q.scenario())) throw Error(Errc::Mismatch, "mixing different scenarios");
  std::vector<double> v(P.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = t * P.table()[i] + (1 - t) * Q.table()[i];
  return CorrelationTensor(P.scenario(), std::move(v), 1e-9);
}

// ---------------------------------------------------------------------------

struct NsReport {
  double max_violation = 0;
  std::optional<int> violating_party;  // 0-based agent whose outputs carry the signal
  std::optional<int> signaling_input;  // 0-based agent whose input leaks
  bool passed = true;
  double tol = kNsTol;
};

namespace detail {

// Marginal table over the agents in `keep` (bitmask), for every full x.
// Result indexed by (sub a index over kept agents) + n_sub * x_index.
inline std::vector<double> marginal_full_x(const CorrelationTensor& P, unsigned keep,
                                           std::size_t& n_sub) {
  const Scenario& sc = P.scenario();
  Radix sub;
  for (int i = 0; i < sc.n; ++i)
    if (keep >> i & 1u) sub.base.push_back(sc.outputs[i]);
  n_sub = sub.size();
  std::vector<double> out(n_sub * sc.n_x, 0.0);
  std::vector<int> a(sc.n), as;
  as.reserve(sc.n);
  for (std::size_t ai = 0; ai < sc.n_a; ++ai) {
    sc.a_radix.decode(ai, a.data());
    as.clear();
    for (int i = 0; i < sc.n; ++i)
      if (keep >> i & 1u) as.push_back(a[i]);
    std::size_t si = sub.encode(as);
    for (std::size_t xi = 0; xi < sc.n_x; ++xi) out[si + n_sub * xi] += P.at(ai, xi);
  }
  return out;
}

// max over x, x' differing only in the inputs of `vary` (bitmask) of the
// L-inf difference of marginals over `keep`.
inline double dependence(const CorrelationTensor& P, unsigned keep, unsigned vary) {
  const Scenario& sc = P.scenario();
  std::size_t n_sub = 0;
  auto mg = marginal_full_x(P, keep, n_sub);
  double worst = 0;
  std::vector<int> x(sc.n), y(sc.n);
  for (std::size_t xi = 0; xi < sc.n_x; ++xi) {
    sc.x_radix.decode(xi, x.data());
    bool base = true;
    for (int i = 0; i < sc.n; ++i)
      if ((vary >> i & 1u) && x[i] != 0) base = false;
    if (!base) continue;
    // compare against every x' agreeing outside `vary`
    for (std::size_t yi = 0; yi < sc.n_x; ++yi) {
      sc.x_radix.decode(yi, y.data());
      bool same = true;
      for (int i = 0; i < sc.n && same; ++i)
        if (!(vary >> i & 1u) && x[i] != y[i]) same = false;
      if (!same || yi == xi) continue;
      for (std::size_t s = 0; s < n_sub; ++s)
        worst = std::max(worst, std::abs(mg[s + n_sub * xi] - mg[s + n_sub * yi]));
    }
  }
  return worst;
}

}  // namespace detail

// For each agent j: the marginal over all other outputs must not depend on x_j.
inline NsReport check_nonsignaling(const CorrelationTensor& P, double tol = kNsTol) {
  const Scenario& sc = P.scenario();
  NsReport r;
  r.tol = tol;
  const unsigned all = (sc.n >= 32) ? ~0u : ((1u << sc.n) - 1u);
  int worst_j = -1;
  for (int j = 0; j < sc.n; ++j) {
    if (sc.inputs[j] < 2 || sc.n == 1) continue;
    double v = detail::dependence(P, all & ~(1u << j), 1u << j);
    if (v > r.max_violation) {
      r.max_violation = v;
      worst_j = j;
    }
  }
  r.passed = r.max_violation <= tol;
  if (!r.passed) {
    r.signaling_input = worst_j;
    // Receiver: the single agent whose own marginal moves most with x_j.
    int recv = -1;
    double best = -1;
    for (int i = 0; i < sc.n; ++i) {
      if (i == worst_j) continue;
      double v = detail::dependence(P, 1u << i, 1u << worst_j);
      if (v > best + 1e-15) {
        best = v;
        recv = i;
      }
    }
    r.violating_party = recv;
  }
  return r;
}

// <prod_i (-1)^{a_i}> at joint input index x_idx.
inline double correlator(const CorrelationTensor& P, std::size_t x_idx) {
  const Scenario& sc = P.scenario();
  if (!sc.binary_outputs()) throw Error(Errc::NonBinary, "correlator needs binary outputs");
  if (x_idx >= sc.n_x) throw Error(Errc::BadIndex, "input index out of range");
  double e = 0;
  for (std::size_t ai = 0; ai < sc.n_a; ++ai) {
    const int parity = std::popcount(static_cast<unsigned long long>(ai)) & 1;
    e += (parity ? -1.0 : 1.0) * P.at(ai, x_idx);
  }
  return e;
}

inline double correlator(const CorrelationTensor& P, const std::vector<int>& x) {
  return correlator(P, P.scenario().x_radix.encode(x));
}

// Sub-scenario over `keep` (0-based, any order -> sorted); dropped agents'
// inputs fixed by `fixed` (indexed by agent; entries for kept agents ignored).
// Sources held only by dropped agents are removed and the rest renumbered.
inline CorrelationTensor marginalize(const CorrelationTensor& P, std::vector<int> keep,
                                     const std::vector<int>& fixed) {
  const Scenario& sc = P.scenario();
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.empty()) throw Error(Errc::BadIndex, "must keep at least one agent");
  for (int k : keep)
    if (k < 0 || k >= sc.n) throw Error(Errc::BadIndex, "kept agent out of range");
  if (static_cast<int>(fixed.size()) != sc.n)
    throw Error(Errc::BadIndex, "fixed inputs must have one entry per agent");
  std::vector<char> kept(sc.n, 0);
  for (int k : keep) kept[k] = 1;
  for (int i = 0; i < sc.n; ++i)
    if (!kept[i] && (fixed[i] < 0 || fixed[i] >= sc.inputs[i]))
      throw Error(Errc::BadIndex, "fixed input out of range for agent " + std::to_string(i + 1));

  std::vector<int> remap(sc.m, -1);
  int m2 = 0;
  for (int k : keep)
    for (int s : sc.sharing[k])
      if (remap[s] < 0) remap[s] = 0;
  for (int s = 0; s < sc.m; ++s)
    if (remap[s] == 0) remap[s] = m2++;
  std::vector<std::vector<int>> sh;
  std::vector<int> in, out;
  for (int k : keep) {
    std::vector<int> v;
    for (int s : sc.sharing[k]) v.push_back(remap[s]);
    sh.push_back(v);
    in.push_back(sc.inputs[k]);
    out.push_back(sc.outputs[k]);
  }
  Scenario sub = build_scenario(static_cast<int>(keep.size()), m2, sh, in, out);
  std::vector<double> t(sub.d, 0.0);
  std::vector<int> a(sc.n), x(sc.n), as(keep.size()), xs(keep.size());
  for (std::size_t xi = 0; xi < sc.n_x; ++xi) {
    sc.x_radix.decode(xi, x.data());
    bool ok = true;
    for (int i = 0; i < sc.n && ok; ++i)
      if (!kept[i] && x[i] != fixed[i]) ok = false;
    if (!ok) continue;
    for (std::size_t k = 0; k < keep.size(); ++k) xs[k] = x[keep[k]];
    std::size_t sx = sub.x_radix.encode(xs);
    for (std::size_t ai = 0; ai < sc.n_a; ++ai) {
      sc.a_radix.decode(ai, a.data());
      for (std::size_t k = 0; k < keep.size(); ++k) as[k] = a[keep[k]];
      t[sub.index(sub.a_radix.encode(as), sx)] += P.at(ai, xi);
    }
  }
  return CorrelationTensor(sub, std::move(t), 1e-9);
}

}  // namespace netcausal
