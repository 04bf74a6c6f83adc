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

// Deterministic response functions and strategy matrices.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "netcausal/scenario.hpp"

namespace netcausal {

inline constexpr double kOverflowGuard = 4294967296.0;  // 2^32
inline constexpr std::size_t kMaterializeGuard = std::size_t(1) << 22;

// f_i(x_{I_i}, lambda_{Lambda_i}) as a lookup table.
struct LocalResponse {
  int agent = 0;
  std::vector<int> parents;  // I_i
  std::vector<int> sources;  // Lambda_i
  Radix domain;              // parent input cards, then source cards
  int n_out = 1;
  std::vector<int> table;    // one output per domain cell

  // x: full joint input digits; lam: full joint source digits.
  int eval(const int* x, const int* lam) const {
    std::size_t idx = 0, mul = 1, k = 0;
    for (int p : parents) {
      idx += std::size_t(x[p]) * mul;
      mul *= std::size_t(domain.base[k++]);
    }
    for (int s : sources) {
      idx += std::size_t(lam[s]) * mul;
      mul *= std::size_t(domain.base[k++]);
    }
    return table[idx];
  }
};

inline double count_local_responses(const Scenario& sc, const CausalClass& cls, int agent,
                                    const std::vector<int>& source_cards) {
  double cells = 1;
  for (int p : cls.parents[agent]) cells *= sc.inputs[p];
  for (int s : sc.sharing[agent]) cells *= source_cards[s];
  return std::pow(double(sc.outputs[agent]), cells);
}

// All responses, ordered lexicographically by output tuple (cell 0 most significant).
inline std::vector<LocalResponse> enumerate_local_responses(const Scenario& sc,
                                                            const CausalClass& cls, int agent,
                                                            const std::vector<int>& source_cards) {
  check_class(sc, cls);
  if (agent < 0 || agent >= sc.n) throw Error(Errc::BadIndex, "agent out of range");
  if (static_cast<int>(source_cards.size()) != sc.m)
    throw Error(Errc::Mismatch, "need one cardinality per source");
  for (int c : source_cards)
    if (c < 1) throw Error(Errc::Data, "source cardinality must be positive");
  const double count = count_local_responses(sc, cls, agent, source_cards);
  if (count >= kOverflowGuard)
    throw Error(Errc::Overflow, "agent " + std::to_string(agent + 1) + " has " +
                                    std::to_string(count) + " responses (guard 2^32)");
  if (count > double(kMaterializeGuard))
    throw Error(Errc::TooLarge, "too many responses to materialize");

  LocalResponse proto;
  proto.agent = agent;
  proto.parents = cls.parents[agent];
  proto.sources = sc.sharing[agent];
  for (int p : proto.parents) proto.domain.base.push_back(sc.inputs[p]);
  for (int s : proto.sources) proto.domain.base.push_back(source_cards[s]);
  proto.n_out = sc.outputs[agent];
  const std::size_t cells = proto.domain.size();
  const std::size_t total = static_cast<std::size_t>(count);

  std::vector<LocalResponse> out(total, proto);
  for (std::size_t r = 0; r < total; ++r) {
    auto& t = out[r].table;
    t.assign(cells, 0);
    std::size_t v = r;
    for (std::size_t c = cells; c-- > 0;) {
      t[c] = static_cast<int>(v % std::size_t(proto.n_out));
      v /= std::size_t(proto.n_out);
    }
  }
  return out;
}

namespace detail {
inline void check_responses(const Scenario& sc, const std::vector<LocalResponse>& rs) {
  if (static_cast<int>(rs.size()) != sc.n)
    throw Error(Errc::Mismatch, "need exactly one response per agent");
  for (int i = 0; i < sc.n; ++i) {
    if (rs[i].agent != i || rs[i].sources != sc.sharing[i] || rs[i].n_out != sc.outputs[i])
      throw Error(Errc::Mismatch, "response for agent " + std::to_string(i + 1) +
                                      " does not match the scenario");
    for (int p : rs[i].parents)
      if (p < 0 || p >= sc.n) throw Error(Errc::Mismatch, "response parent out of range");
  }
}
}  // namespace detail

// Deterministic box R_Lambda(a|x) = prod_i delta(a_i, f_i(x_{I_i}, Lambda_i)).
inline CorrelationTensor global_strategy_column(const Scenario& sc,
                                                const std::vector<LocalResponse>& rs,
                                                const std::vector<int>& lam) {
  detail::check_responses(sc, rs);
  if (static_cast<int>(lam.size()) != sc.m) throw Error(Errc::Mismatch, "joint source value size");
  std::vector<double> t(sc.d, 0.0);
  std::vector<int> x(sc.n), a(sc.n);
  for (std::size_t xi = 0; xi < sc.n_x; ++xi) {
    sc.x_radix.decode(xi, x.data());
    for (int i = 0; i < sc.n; ++i) a[i] = rs[i].eval(x.data(), lam.data());
    t[sc.index(sc.a_radix.encode(a), xi)] = 1.0;
  }
  return CorrelationTensor(sc, std::move(t));
}

// Columns stored compactly: for each column and each x, the output index.
struct StrategyMatrix {
  Scenario scenario;
  std::vector<int> source_cards;
  std::vector<std::vector<std::uint32_t>> cols;

  std::size_t rows() const { return scenario.d; }
  std::size_t n_cols() const { return cols.size(); }
  CorrelationTensor column(std::size_t c) const {
    std::vector<double> t(scenario.d, 0.0);
    for (std::size_t xi = 0; xi < scenario.n_x; ++xi) t[scenario.index(cols[c][xi], xi)] = 1.0;
    return CorrelationTensor(scenario, std::move(t));
  }
  // P = M w
  std::vector<double> apply(const std::vector<double>& w) const {
    std::vector<double> p(scenario.d, 0.0);
    for (std::size_t c = 0; c < cols.size(); ++c)
      if (w[c] != 0)
        for (std::size_t xi = 0; xi < scenario.n_x; ++xi)
          p[scenario.index(cols[c][xi], xi)] += w[c];
    return p;
  }
};

inline StrategyMatrix build_strategy_matrix(const Scenario& sc, const CausalClass& cls,
                                            const std::vector<int>& source_cards,
                                            const std::vector<LocalResponse>& rs) {
  check_class(sc, cls);
  detail::check_responses(sc, rs);
  if (static_cast<int>(source_cards.size()) != sc.m)
    throw Error(Errc::Mismatch, "need one cardinality per source");
  Radix lam_r{source_cards};
  double ncol = 1;
  for (int c : source_cards) ncol *= c;
  if (ncol >= kOverflowGuard) throw Error(Errc::Overflow, "column count exceeds 2^32");
  if (ncol * double(sc.n_x) > 1e8) throw Error(Errc::TooLarge, "strategy matrix too large");
  // Response domains must agree with the declared cardinalities.
  for (int i = 0; i < sc.n; ++i) {
    std::size_t k = rs[i].parents.size();
    for (std::size_t s = 0; s < rs[i].sources.size(); ++s)
      if (rs[i].domain.base[k + s] != source_cards[rs[i].sources[s]])
        throw Error(Errc::Mismatch, "response domain disagrees with source cardinality");
  }
  StrategyMatrix M;
  M.scenario = sc;
  M.source_cards = source_cards;
  M.cols.resize(static_cast<std::size_t>(ncol));
  std::vector<int> lam(sc.m), x(sc.n), a(sc.n);
  for (std::size_t c = 0; c < M.cols.size(); ++c) {
    lam_r.decode(c, lam.data());
    auto& col = M.cols[c];
    col.resize(sc.n_x);
    for (std::size_t xi = 0; xi < sc.n_x; ++xi) {
      sc.x_radix.decode(xi, x.data());
      for (int i = 0; i < sc.n; ++i) a[i] = rs[i].eval(x.data(), lam.data());
      col[xi] = static_cast<std::uint32_t>(sc.a_radix.encode(a));
    }
  }
  return M;
}

// ---------------------------------------------------------------------------
// Source-indexed strategy model used by the solvers.  Each value of a source
// picks one deterministic function x_{I_i} -> a_i for every agent holding the
// source; an agent fed by several sources outputs the sum of its components
// mod |a_i|.  Agents without a source receive a private one.

struct SourceAlphabet {
  int source = -1;             // scenario source id, or -1 for a private source
  std::vector<int> agents;     // holders
  // tuples[v][p][cell]: output of holder p at its parent-input cell
  std::vector<std::vector<std::vector<int>>> tuples;
  double full_card = 1;        // size of the unrestricted alphabet
  bool capped = false;
};

class StrategyModel {
 public:
  // cap: max values per source.  card_override > 0 limits every source
  // further; per_source (indexed by scenario source) limits individually.
  StrategyModel(const Scenario& sc, const CausalClass& cls, int cap = 16,
                std::uint64_t seed = 1, int card_override = 0,
                const std::vector<int>& per_source = {})
      : sc_(sc), cls_(cls) {
    check_class(sc, cls);
    if (cap < 1) throw Error(Errc::Data, "cardinality cap must be positive");
    cell_radix_.resize(sc.n);
    xcell_.assign(sc.n, std::vector<int>(sc.n_x));
    std::vector<int> x(sc.n);
    for (int i = 0; i < sc.n; ++i) {
      for (int p : cls.parents[i]) cell_radix_[i].base.push_back(sc.inputs[p]);
      for (std::size_t xi = 0; xi < sc.n_x; ++xi) {
        sc.x_radix.decode(xi, x.data());
        std::size_t c = 0, mul = 1;
        for (int p : cls.parents[i]) {
          c += std::size_t(x[p]) * mul;
          mul *= std::size_t(sc.inputs[p]);
        }
        xcell_[i][xi] = static_cast<int>(c);
      }
    }
    std::mt19937_64 rng(seed);
    if (!per_source.empty() && static_cast<int>(per_source.size()) != sc.m)
      throw Error(Errc::Mismatch, "need one cardinality per source");
    for (int j = 0; j < sc.m; ++j) {
      int lim = card_override;
      if (!per_source.empty()) {
        if (per_source[j] < 1) throw Error(Errc::Data, "source cardinality must be positive");
        lim = lim > 0 ? std::min(lim, per_source[j]) : per_source[j];
      }
      add_alphabet(j, sc.holders[j], cap, lim, rng);
    }
    for (int i = 0; i < sc.n; ++i)
      if (sc.sharing[i].empty()) add_alphabet(-1, {i}, cap, card_override, rng);
    agent_src_.assign(sc.n, {});
    for (std::size_t k = 0; k < alph_.size(); ++k)
      for (std::size_t p = 0; p < alph_[k].agents.size(); ++p)
        agent_src_[alph_[k].agents[p]].push_back({int(k), int(p)});
    double ncol = 1;
    for (auto& al : alph_) ncol *= double(al.tuples.size());
    if (ncol > double(1u << 22)) throw Error(Errc::TooLarge, "joint source alphabet too large");
    n_cols_ = static_cast<std::size_t>(ncol);
    for (auto& al : alph_) cards_.push_back(static_cast<int>(al.tuples.size()));
    joint_.base = cards_;
  }

  const Scenario& scenario() const { return sc_; }
  const CausalClass& causal_class() const { return cls_; }
  const std::vector<SourceAlphabet>& alphabets() const { return alph_; }
  const std::vector<int>& cards() const { return cards_; }
  std::size_t n_blocks() const { return alph_.size(); }
  std::size_t n_cols() const { return n_cols_; }
  const Radix& joint() const { return joint_; }
  bool capped() const {
    for (auto& a : alph_)
      if (a.capped) return true;
    return false;
  }

  // Output index for every x, given one value per block.
  void column(const int* lam, std::uint32_t* out) const {
    std::vector<int> a(sc_.n);
    for (std::size_t xi = 0; xi < sc_.n_x; ++xi) {
      for (int i = 0; i < sc_.n; ++i) {
        int v = 0;
        const int cell = xcell_[i][xi];
        for (auto [k, p] : agent_src_[i]) v += alph_[k].tuples[lam[k]][p][cell];
        a[i] = v % sc_.outputs[i];
      }
      out[xi] = static_cast<std::uint32_t>(sc_.a_radix.encode(a));
    }
  }

  // Full strategy matrix in joint-index order (block 0 fastest).
  StrategyMatrix matrix() const {
    StrategyMatrix M;
    M.scenario = sc_;
    M.source_cards = cards_;
    M.cols.assign(n_cols_, std::vector<std::uint32_t>(sc_.n_x));
    std::vector<int> lam(alph_.size());
    for (std::size_t c = 0; c < n_cols_; ++c) {
      joint_.decode(c, lam.data());
      column(lam.data(), M.cols[c].data());
    }
    return M;
  }

  // P = R (x)_k mu_k
  std::vector<double> reconstruct(const StrategyMatrix& M,
                                  const std::vector<std::vector<double>>& mu) const {
    std::vector<double> w(n_cols_);
    std::vector<int> lam(alph_.size());
    for (std::size_t c = 0; c < n_cols_; ++c) {
      joint_.decode(c, lam.data());
      double p = 1;
      for (std::size_t k = 0; k < alph_.size(); ++k) p *= mu[k][lam[k]];
      w[c] = p;
    }
    return M.apply(w);
  }

 private:
  void add_alphabet(int source, const std::vector<int>& agents, int cap, int card_override,
                    std::mt19937_64& rng) {
    SourceAlphabet al;
    al.source = source;
    al.agents = agents;
    std::vector<double> nfun;
    for (int i : agents) {
      double f = std::pow(double(sc_.outputs[i]), double(cell_radix_[i].size()));
      nfun.push_back(f);
      al.full_card *= f;
    }
    int limit = cap;
    if (card_override > 0) limit = std::min(limit, card_override);
    if (al.full_card <= limit) {
      const std::size_t total = static_cast<std::size_t>(al.full_card);
      for (std::size_t v = 0; v < total; ++v) {
        std::size_t rest = v;
        std::vector<std::vector<int>> tup;
        for (std::size_t p = 0; p < agents.size(); ++p) {
          std::size_t r = rest % static_cast<std::size_t>(nfun[p]);
          rest /= static_cast<std::size_t>(nfun[p]);
          tup.push_back(function_outputs(agents[p], r));
        }
        al.tuples.push_back(std::move(tup));
      }
    } else {
      al.capped = true;
      std::set<std::vector<std::vector<int>>> seen;
      // constant tuples first: they span uniform local noise
      double nconst = 1;
      for (int i : agents) nconst *= sc_.outputs[i];
      for (std::size_t v = 0; v < static_cast<std::size_t>(nconst) &&
                              static_cast<int>(al.tuples.size()) < limit;
           ++v) {
        std::size_t rest = v;
        std::vector<std::vector<int>> tup;
        for (int i : agents) {
          int c = static_cast<int>(rest % std::size_t(sc_.outputs[i]));
          rest /= std::size_t(sc_.outputs[i]);
          tup.emplace_back(cell_radix_[i].size(), c);
        }
        seen.insert(tup);
        al.tuples.push_back(std::move(tup));
      }
      int guard = 0;
      while (static_cast<int>(al.tuples.size()) < limit && guard++ < 100000) {
        std::vector<std::vector<int>> tup;
        for (int i : agents) {
          std::uniform_int_distribution<int> u(0, sc_.outputs[i] - 1);
          std::vector<int> f(cell_radix_[i].size());
          for (auto& o : f) o = u(rng);
          tup.push_back(std::move(f));
        }
        if (seen.insert(tup).second) al.tuples.push_back(std::move(tup));
      }
    }
    alph_.push_back(std::move(al));
  }

  // r-th function (cell 0 most significant digit).
  std::vector<int> function_outputs(int agent, std::size_t r) const {
    const std::size_t cells = cell_radix_[agent].size();
    std::vector<int> f(cells);
    const std::size_t b = std::size_t(sc_.outputs[agent]);
    for (std::size_t c = cells; c-- > 0;) {
      f[c] = static_cast<int>(r % b);
      r /= b;
    }
    return f;
  }

  Scenario sc_;
  CausalClass cls_;
  std::vector<Radix> cell_radix_;
  std::vector<std::vector<int>> xcell_;
  std::vector<SourceAlphabet> alph_;
  std::vector<std::vector<std::pair<int, int>>> agent_src_;
  std::vector<int> cards_;
  Radix joint_;
  std::size_t n_cols_ = 0;
};

}  // namespace netcausal
