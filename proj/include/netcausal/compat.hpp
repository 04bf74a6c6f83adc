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

// Compatibility of a correlation tensor with a causal class.
//
// Verdicts are three-valued: Compatible always carries weights that
// reconstruct P; Incompatible always carries a certificate (exact LP, a
// violated functional / causal-marginal constraint, or the oracle); everything
// else is Unknown.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "netcausal/functionals.hpp"
#include "netcausal/lp.hpp"
#include "netcausal/scenario.hpp"
#include "netcausal/strategy.hpp"

namespace netcausal {

struct SolverConfig {
  std::vector<int> source_cards;  // empty: default cardinality, capped
  int cap = 16;
  int restarts = 8;
  int max_iters = 2000;
  double tol_feas = 1e-7;
  double ns_tol = kNsTol;
  std::uint64_t seed = 1;
  double c = 1.0;
  int threads = 1;
  bool use_oracle = true;
  int oracle_grid = 16;
  std::optional<IndependentSet> independent;  // default: greedy non-sharing set
  std::vector<double> objective;              // optional linear objective on P_rec

  void validate() const {
    if (!(tol_feas > 0)) throw Error(Errc::Data, "tol_feas must be positive");
    if (!(c >= 1.0 && c <= 2.0)) throw Error(Errc::OutOfRange, "c must lie in [1,2]");
    if (restarts < 1 || max_iters < 1) throw Error(Errc::Data, "restarts/max_iters must be positive");
    for (int k : source_cards)
      if (k > cap) throw Error(Errc::Overflow, "source cardinality exceeds the cap");
  }
};

enum class Status { Compatible, Incompatible, Unknown };
enum class Certificate { None, Oracle, Inequality, Lp };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Compatible: return "Compatible";
    case Status::Incompatible: return "Incompatible";
    default: return "Unknown";
  }
}
inline const char* certificate_name(Certificate c) {
  switch (c) {
    case Certificate::Oracle: return "oracle";
    case Certificate::Inequality: return "inequality";
    case Certificate::Lp: return "lp";
    default: return "none";
  }
}
inline int exit_code(Status s) {
  return s == Status::Compatible ? 0 : s == Status::Incompatible ? 1 : 2;
}

struct Verdict {
  Status status = Status::Unknown;
  std::vector<std::vector<double>> weights;  // per block (SourceWeights)
  double residual = std::numeric_limits<double>::infinity();
  std::vector<int> cardinality_used;
  bool capped = false;
  Certificate certificate = Certificate::None;
  std::string detail;
  std::string binding;  // which functional constraint is tightest
  int restarts_run = 0;
};

namespace detail {

inline Eigen::MatrixXd dense(const StrategyMatrix& M) {
  const Scenario& sc = M.scenario;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(Eigen::Index(sc.d), Eigen::Index(M.n_cols()));
  for (std::size_t c = 0; c < M.n_cols(); ++c)
    for (std::size_t xi = 0; xi < sc.n_x; ++xi) A(Eigen::Index(sc.index(M.cols[c][xi], xi)), Eigen::Index(c)) = 1.0;
  return A;
}

inline Eigen::VectorXd as_vec(const CorrelationTensor& P) {
  return Eigen::Map<const Eigen::VectorXd>(P.table().data(), Eigen::Index(P.table().size()));
}

template <class Rng>
inline std::vector<double> dirichlet1(std::size_t k, Rng& rng) {
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<double> w(k);
  double s = 0;
  for (auto& v : w) s += (v = g(rng));
  for (auto& v : w) v /= s;
  return w;
}

// Precomputed columns of a StrategyModel for repeated block assembly.
struct ColumnCache {
  std::size_t n_cols = 0, n_x = 0, blocks = 0;
  std::vector<std::uint32_t> out;  // n_cols * n_x
  std::vector<int> lam;            // n_cols * blocks

  explicit ColumnCache(const StrategyModel& m) {
    n_cols = m.n_cols();
    n_x = m.scenario().n_x;
    blocks = m.n_blocks();
    out.resize(n_cols * n_x);
    lam.resize(n_cols * blocks);
    for (std::size_t c = 0; c < n_cols; ++c) {
      m.joint().decode(c, &lam[c * blocks]);
      m.column(&lam[c * blocks], &out[c * n_x]);
    }
  }
};

inline Eigen::MatrixXd block_matrix(const Scenario& sc, const ColumnCache& cc, std::size_t k, int card,
                                    const std::vector<std::vector<double>>& mu) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(Eigen::Index(sc.d), card);
  for (std::size_t c = 0; c < cc.n_cols; ++c) {
    const int* l = &cc.lam[c * cc.blocks];
    double w = 1;
    for (std::size_t b = 0; b < cc.blocks && w != 0; ++b)
      if (b != k) w *= mu[b][l[b]];
    if (w == 0) continue;
    const std::uint32_t* o = &cc.out[c * cc.n_x];
    for (std::size_t xi = 0; xi < cc.n_x; ++xi) A(Eigen::Index(sc.index(o[xi], xi)), l[k]) += w;
  }
  return A;
}

inline std::vector<double> reconstruct(const Scenario& sc, const ColumnCache& cc,
                                       const std::vector<std::vector<double>>& mu) {
  std::vector<double> r(sc.d, 0.0);
  for (std::size_t c = 0; c < cc.n_cols; ++c) {
    const int* l = &cc.lam[c * cc.blocks];
    double w = 1;
    for (std::size_t b = 0; b < cc.blocks && w != 0; ++b) w *= mu[b][l[b]];
    if (w == 0) continue;
    const std::uint32_t* o = &cc.out[c * cc.n_x];
    for (std::size_t xi = 0; xi < cc.n_x; ++xi) r[sc.index(o[xi], xi)] += w;
  }
  return r;
}

inline double linf(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline StrategyModel make_model(const Scenario& sc, const CausalClass& cls, const SolverConfig& cfg) {
  try {
    return StrategyModel(sc, cls, cfg.cap, cfg.seed, 0, cfg.source_cards);
  } catch (const Error& e) {
    if (e.code() == Errc::TooLarge) throw Error(Errc::Overflow, e.what());
    throw;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Convex case: P = M w, w in the simplex.

inline Verdict lp_membership(const CorrelationTensor& P, const StrategyMatrix& M, double tol = 1e-9) {
  if (!(P.scenario() == M.scenario) || M.rows() != P.table().size())
    throw Error(Errc::DimensionMismatch, "strategy matrix does not match the tensor");
  Verdict v;
  v.cardinality_used = M.source_cards;
  v.certificate = Certificate::Lp;
  if (M.n_cols() == 0) {
    v.status = Status::Incompatible;
    v.detail = "empty strategy matrix";
    return v;
  }
  auto fit = linf_fit(detail::dense(M), detail::as_vec(P));
  if (!fit.ok) {
    v.status = Status::Unknown;
    v.certificate = Certificate::None;
    v.detail = "LP did not converge";
    return v;
  }
  v.residual = fit.residual;
  if (fit.residual <= tol) {
    v.status = Status::Compatible;
    v.weights = {std::vector<double>(fit.w.data(), fit.w.data() + fit.w.size())};
    v.certificate = Certificate::None;
  } else {
    v.status = Status::Incompatible;
    v.detail = "min L-inf residual " + std::to_string(fit.residual);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Certificates.

// For every agent subset S, P(a_S|x) may depend only on the inputs that are
// parents of some output in S.  For the local class this is no-signaling.
struct MarginalViolation {
  double value = 0;
  unsigned subset = 0;
  int input = -1;
};

inline MarginalViolation causal_marginal_violation(const CorrelationTensor& P, const CausalClass& cls) {
  const Scenario& sc = P.scenario();
  MarginalViolation mv;
  const unsigned all = (1u << sc.n) - 1;
  for (unsigned S = 1; S < all; ++S) {
    unsigned par = 0;
    for (int i = 0; i < sc.n; ++i)
      if (S >> i & 1u)
        for (int p : cls.parents[i]) par |= 1u << p;
    for (int j = 0; j < sc.n; ++j) {
      if (par >> j & 1u) continue;
      const double v = detail::dependence(P, S, 1u << j);
      if (v > mv.value) mv = {v, S, j};
    }
  }
  return mv;
}

// max over deterministic class strategies of sum_x c_x E(x), tripartite binary.
// The range is symmetric, so this bounds |value|.
inline double class_linear_bound(const CausalClass& cls, const int* coeff) {
  static std::map<std::pair<std::vector<std::vector<int>>, std::vector<int>>, double> memo;
  auto key = std::make_pair(cls.parents, std::vector<int>(coeff, coeff + 8));
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  // optimize over the agent with the most parents last
  int last = 0;
  for (int i = 1; i < 3; ++i)
    if (cls.parents[i].size() > cls.parents[last].size()) last = i;
  int o[2], t = 0;
  for (int i = 0; i < 3; ++i)
    if (i != last) o[t++] = i;
  auto cell = [&](int i, int x) {
    int c = 0, mul = 1;
    for (int p : cls.parents[i]) {
      c += ((x >> p) & 1) * mul;
      mul *= 2;
    }
    return c;
  };
  const int n0 = 1 << (1 << cls.parents[o[0]].size());
  const int n1 = 1 << (1 << cls.parents[o[1]].size());
  const int nc = 1 << cls.parents[last].size();
  double best = 0;
  for (int f0 = 0; f0 < n0; ++f0)
    for (int f1 = 0; f1 < n1; ++f1) {
      double acc[8] = {0};
      for (int x = 0; x < 8; ++x) {
        const int s = ((f0 >> cell(o[0], x)) ^ (f1 >> cell(o[1], x))) & 1;
        acc[cell(last, x)] += s ? -coeff[x] : coeff[x];
      }
      double v = 0;
      for (int c = 0; c < nc; ++c) v += std::abs(acc[c]);
      best = std::max(best, v);
    }
  memo.emplace(key, best);
  return best;
}

struct CertificateResult {
  bool refuted = false;
  std::string detail;
  std::string binding;
  double residual = 0;
};

inline CertificateResult inequality_certificates(const CorrelationTensor& P, const CausalClass& cls,
                                                 const SolverConfig& cfg) {
  const Scenario& sc = P.scenario();
  CertificateResult r;
  auto mv = causal_marginal_violation(P, cls);
  if (mv.value > cfg.ns_tol) {
    std::string s;
    for (int i = 0; i < sc.n; ++i)
      if (mv.subset >> i & 1u) s += (s.empty() ? "" : ",") + std::to_string(i + 1);
    r.refuted = true;
    r.residual = mv.value;
    r.detail = (cls.is_local() ? "non-signaling" : "causal-marginal") + std::string(" violation: P(a_{") +
               s + "}|x) depends on x_" + std::to_string(mv.input + 1) + " by " + std::to_string(mv.value);
    return r;
  }
  if (!sc.binary()) return r;
  if (cls.is_local()) {
    const IndependentSet ind = cfg.independent ? *cfg.independent : default_independent_set(sc);
    auto b = eval_Rk(P, ind);
    // |I|,|J| <= 1 hold for every normalized P; R_k <= c is the live one.
    const double sI = std::abs(b.I), sJ = std::abs(b.J), sR = b.R / cfg.c;
    r.binding = sR >= std::max(sI, sJ) ? "R_k<=c" : (sI >= sJ ? "|I|<=1" : "|J|<=1");
    if (b.R > cfg.c + kFuncTol) {
      r.refuted = true;
      r.residual = b.R - cfg.c;
      r.detail = "R_" + std::to_string(b.k) + " = " + std::to_string(b.R) + " > c = " + std::to_string(cfg.c);
      return r;
    }
  }
  if (sc.n == 3) {
    struct F {
      const char* name;
      const int* c;
    } fs[] = {{"Svetlichny", svetlichny_coeffs()}, {"CCA", cca_coeffs()}};
    for (auto& f : fs) {
      const double val = eval_tripartite_linear(P, f.c);
      const double bnd = class_linear_bound(cls, f.c);
      if (std::abs(val) > bnd + kFuncTol) {
        r.refuted = true;
        r.residual = std::abs(val) - bnd;
        r.detail = std::string(f.name) + " = " + std::to_string(val) + " exceeds class bound " +
                   std::to_string(bnd);
        return r;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Independent brute-force oracle.
//
// One block: exact Caratheodory enumeration (no LP) -- P is in the hull iff
// it is a convex combination of some affinely independent subset of columns.
// Several blocks: the outer blocks are gridded at step 1/grid, the largest
// block is solved exactly per grid point.  Compatible needs a residual <= tol.
// Incompatible is only issued for one uncapped block, where the columns are
// every deterministic strategy.

inline Verdict brute_force_oracle(const CorrelationTensor& P, const CausalClass& cls, int grid,
                                  const SolverConfig& cfg = {}) {
  const Scenario& sc = P.scenario();
  if (sc.d > 256) throw Error(Errc::TooLarge, "oracle needs d <= 256");
  if (grid < 1 || grid > 64) throw Error(Errc::TooLarge, "oracle grid must be in [1,64]");
  StrategyModel model = detail::make_model(sc, cls, cfg);
  if (model.n_cols() > 16) throw Error(Errc::TooLarge, "oracle needs prod |lambda_j| <= 16");
  Verdict v;
  v.cardinality_used = model.cards();
  v.capped = model.capped();
  v.certificate = Certificate::Oracle;
  detail::ColumnCache cc(model);
  const auto& p = P.table();
  const double tol = cfg.tol_feas;

  if (model.n_blocks() == 1) {
    // distinct columns as dense vectors
    std::vector<Eigen::VectorXd> V;
    std::vector<std::size_t> idx;
    for (std::size_t c = 0; c < cc.n_cols; ++c) {
      Eigen::VectorXd col = Eigen::VectorXd::Zero(Eigen::Index(sc.d));
      for (std::size_t xi = 0; xi < sc.n_x; ++xi) col(Eigen::Index(sc.index(cc.out[c * sc.n_x + xi], xi))) = 1;
      bool dup = false;
      for (auto& u : V) dup = dup || (u - col).cwiseAbs().maxCoeff() == 0;
      if (!dup) {
        V.push_back(col);
        idx.push_back(c);
      }
    }
    const int K = static_cast<int>(V.size());
    Eigen::MatrixXd Dm(Eigen::Index(sc.d), std::max(K - 1, 1));
    Dm.setZero();
    for (int c = 1; c < K; ++c) Dm.col(c - 1) = V[c] - V[0];
    const int r = K > 1 ? int(Dm.fullPivHouseholderQr().rank()) : 0;
    const Eigen::VectorXd pv = detail::as_vec(P);
    std::vector<int> comb(r + 1);
    std::iota(comb.begin(), comb.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
      Eigen::MatrixXd A(Eigen::Index(sc.d) + 1, r + 1);
      for (int t = 0; t <= r; ++t) {
        A.block(0, t, Eigen::Index(sc.d), 1) = V[comb[t]];
        A(Eigen::Index(sc.d), t) = 1.0;
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
      if (qr.rank() == r + 1) {
        Eigen::VectorXd b(Eigen::Index(sc.d) + 1);
        b << pv, 1.0;
        Eigen::VectorXd w = qr.solve(b);
        const double res = (A.topRows(Eigen::Index(sc.d)) * w - pv).cwiseAbs().maxCoeff();
        const double neg = std::max(0.0, -w.minCoeff());
        const double score = std::max(res, neg);
        if (score < best) {
          best = score;
          if (res <= tol && neg <= 1e-12) {
            std::vector<double> wt(model.cards()[0], 0.0);
            for (int t = 0; t <= r; ++t) wt[model.joint().decode(idx[comb[t]])[0]] = std::max(0.0, w(t));
            const double s = std::accumulate(wt.begin(), wt.end(), 0.0);
            for (auto& x : wt) x /= s;
            v.weights = {wt};
            v.residual = detail::linf(detail::reconstruct(sc, cc, v.weights), p);
            v.status = Status::Compatible;
            v.certificate = Certificate::None;
            return v;
          }
        }
      }
      int i = r;
      while (i >= 0 && comb[i] == K - (r + 1) + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (int t = i + 1; t <= r; ++t) comb[t] = comb[t - 1] + 1;
    }
    v.residual = best;
    if (model.capped()) {
      // the capped alphabet is not every deterministic strategy
      v.status = Status::Unknown;
      v.certificate = Certificate::None;
      v.detail = "outside the hull of the capped alphabet only";
    } else {
      v.status = Status::Incompatible;
      v.detail = "no affinely independent column subset contains P";
    }
    return v;
  }

  // several blocks
  const auto& cards = model.cards();
  std::size_t inner = 0;
  for (std::size_t k = 1; k < cards.size(); ++k)
    if (cards[k] > cards[inner]) inner = k;
  std::vector<std::size_t> outer;
  for (std::size_t k = 0; k < cards.size(); ++k)
    if (k != inner) outer.push_back(k);
  // compositions of grid into cards[k] parts
  auto comps = [&](int parts) {
    std::vector<std::vector<double>> out;
    std::vector<int> c(parts, 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == parts - 1) {
        c[pos] = left;
        std::vector<double> w(parts);
        for (int t = 0; t < parts; ++t) w[t] = double(c[t]) / grid;
        out.push_back(w);
        return;
      }
      for (int a = 0; a <= left; ++a) {
        c[pos] = a;
        rec(pos + 1, left - a);
      }
    };
    rec(0, grid);
    return out;
  };
  std::vector<std::vector<std::vector<double>>> pts;
  double total = 1, slack = 0;
  for (auto k : outer) {
    pts.push_back(comps(cards[k]));
    total *= double(pts.back().size());
    slack += double(cards[k]) / (2.0 * grid);
  }
  if (total > 2e5) throw Error(Errc::TooLarge, "oracle grid too fine for these cardinalities");
  std::vector<std::vector<double>> mu(cards.size());
  std::vector<std::size_t> ctr(outer.size(), 0);
  const Eigen::VectorXd pv = detail::as_vec(P);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    for (std::size_t t = 0; t < outer.size(); ++t) mu[outer[t]] = pts[t][ctr[t]];
    mu[inner].assign(cards[inner], 0.0);
    auto A = detail::block_matrix(sc, cc, inner, cards[inner], mu);
    auto fit = linf_fit(A, pv);
    if (fit.ok && fit.residual < best) {
      best = fit.residual;
      if (fit.residual <= tol) {
        mu[inner].assign(fit.w.data(), fit.w.data() + fit.w.size());
        v.weights = mu;
        v.residual = detail::linf(detail::reconstruct(sc, cc, mu), p);
        v.status = Status::Compatible;
        v.certificate = Certificate::None;
        return v;
      }
    }
    std::size_t t = 0;
    while (t < outer.size() && ++ctr[t] == pts[t].size()) ctr[t++] = 0;
    if (t == outer.size()) break;
  }
  v.residual = best;
  // Several blocks: the sum-mod response family is not exhaustive, so a grid
  // minimum above the slack rules out this model only.
  v.status = Status::Unknown;
  v.certificate = Certificate::None;
  if (best > slack + tol) {
    v.detail = "grid minimum " + std::to_string(best) + " exceeds slack " + std::to_string(slack) +
               " for the restricted model only";
  } else {
    v.detail = "grid minimum " + std::to_string(best) + " within slack " + std::to_string(slack);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Alternating block LP over the product weights mu = (x)_k mu_k.

namespace detail {

struct RestartResult {
  double residual = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> mu;
};

// Euclidean projection onto the probability simplex.
inline Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  Eigen::VectorXd u = v;
  std::sort(u.data(), u.data() + u.size(), std::greater<double>());
  double cs = 0, th = 0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    cs += u(i);
    const double t = (cs - 1.0) / double(i + 1);
    if (u(i) - t > 0) th = t;
  }
  return (v.array() - th).cwiseMax(0.0);
}

// min ||A w - p||_2 over the simplex, accelerated projected gradient.
inline Eigen::VectorXd simplex_lsq(const Eigen::MatrixXd& A, const Eigen::VectorXd& p, Eigen::VectorXd w,
                                   int iters) {
  const Eigen::MatrixXd G = A.transpose() * A;
  const Eigen::VectorXd h = A.transpose() * p;
  const double L = G.operatorNorm();
  if (!(L > 0)) return w;
  Eigen::VectorXd y = w, prev = w;
  double tk = 1;
  for (int i = 0; i < iters; ++i) {
    Eigen::VectorXd nw = project_simplex(y - (G * y - h) / L);
    const double tn = 0.5 * (1 + std::sqrt(1 + 4 * tk * tk));
    y = nw + ((tk - 1) / tn) * (nw - prev);
    prev = nw;
    tk = tn;
  }
  return prev;
}

// Alternating simplex least squares over the blocks (round-robin), then a
// few rounds of exact L-inf block LPs to polish.
inline RestartResult run_restart(const Scenario& sc, const StrategyModel& model, const ColumnCache& cc,
                                 const std::vector<double>& p, const SolverConfig& cfg, int r) {
  std::mt19937_64 rng(cfg.seed * 0x9E3779B97F4A7C15ull + std::uint64_t(r) + 1);
  const auto& cards = model.cards();
  RestartResult out;
  std::vector<std::vector<double>> mu(cards.size());
  for (std::size_t k = 0; k < cards.size(); ++k)
    mu[k] = r == 0 ? std::vector<double>(cards[k], 1.0 / cards[k]) : dirichlet1(cards[k], rng);
  const Eigen::VectorXd pv = Eigen::Map<const Eigen::VectorXd>(p.data(), Eigen::Index(p.size()));
  double cur = linf(reconstruct(sc, cc, mu), p);
  auto lp_round = [&] {
    for (std::size_t k = 0; k < cards.size() && cur > cfg.tol_feas; ++k) {
      auto A = block_matrix(sc, cc, k, cards[k], mu);
      Eigen::VectorXd w0 = Eigen::Map<const Eigen::VectorXd>(mu[k].data(), cards[k]);
      auto fit = linf_fit(A, pv, &w0);
      if (!fit.ok) continue;
      auto keep = mu[k];
      mu[k].assign(fit.w.data(), fit.w.data() + fit.w.size());
      const double nr = linf(reconstruct(sc, cc, mu), p);
      if (nr <= cur)
        cur = nr;
      else
        mu[k] = keep;
    }
  };
  if (cards.size() == 1) {
    lp_round();  // single LP is exact
  } else {
    std::vector<double> hist;
    for (int it = 0; it < cfg.max_iters && cur > cfg.tol_feas; ++it) {
      for (std::size_t k = 0; k < cards.size(); ++k) {
        auto A = block_matrix(sc, cc, k, cards[k], mu);
        Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(mu[k].data(), cards[k]);
        w = simplex_lsq(A, pv, w, 50);
        mu[k].assign(w.data(), w.data() + w.size());
      }
      cur = linf(reconstruct(sc, cc, mu), p);
      hist.push_back(cur);
      // give up when 50 sweeps gained less than 1%
      if (hist.size() > 50 && cur > 0.99 * hist[hist.size() - 51]) break;
    }
    for (int j = 0; j < 5 && cur > cfg.tol_feas; ++j) lp_round();
  }
  out.residual = cur;
  out.mu = std::move(mu);
  return out;
}

}  // namespace detail

inline Verdict network_feasibility(const CorrelationTensor& P, const CausalClass& cls,
                                   const SolverConfig& cfg = {}) {
  cfg.validate();
  const Scenario& sc = P.scenario();
  check_class(sc, cls);
  Verdict v;
  auto cert = inequality_certificates(P, cls, cfg);
  v.binding = cert.binding;
  StrategyModel model = detail::make_model(sc, cls, cfg);
  v.cardinality_used = model.cards();
  v.capped = model.capped();
  if (cert.refuted) {
    v.status = Status::Incompatible;
    v.certificate = Certificate::Inequality;
    v.residual = cert.residual;
    v.detail = cert.detail;
    return v;
  }
  detail::ColumnCache cc(model);
  const auto& p = P.table();
  std::vector<detail::RestartResult> res(cfg.restarts);
  const int th = std::max(1, cfg.threads);
  std::optional<int> winner;
  double best_obj = std::numeric_limits<double>::infinity();
  for (int base = 0; base < cfg.restarts; base += th) {
    const int hi = std::min(cfg.restarts, base + th);
    if (th == 1) {
      res[base] = detail::run_restart(sc, model, cc, p, cfg, base);
    } else {
      std::vector<std::thread> pool;
      for (int r = base; r < hi; ++r)
        pool.emplace_back([&, r] { res[r] = detail::run_restart(sc, model, cc, p, cfg, r); });
      for (auto& t : pool) t.join();
    }
    // first Compatible wins (or best objective); otherwise keep min residual
    for (int r = base; r < hi; ++r) {
      v.restarts_run = r + 1;
      if (res[r].residual <= cfg.tol_feas) {
        if (cfg.objective.empty()) {
          if (!winner) winner = r;
        } else {
          auto rec = detail::reconstruct(sc, cc, res[r].mu);
          double o = 0;
          for (std::size_t i = 0; i < rec.size() && i < cfg.objective.size(); ++i) o += cfg.objective[i] * rec[i];
          if (o < best_obj) best_obj = o, winner = r;
        }
      }
      if (res[r].residual < v.residual) v.residual = res[r].residual;
    }
    if (winner && cfg.objective.empty()) break;
  }
  if (winner) {
    v.status = Status::Compatible;
    v.weights = res[*winner].mu;
    v.residual = detail::linf(detail::reconstruct(sc, cc, v.weights), p);
    if (!(v.residual <= cfg.tol_feas)) throw Error(Errc::Data, "internal: unsound Compatible");
    return v;
  }
  if (model.n_blocks() == 1 && !model.capped()) {
    v.status = Status::Incompatible;
    v.certificate = Certificate::Lp;
    v.detail = "exact LP over all deterministic strategies, residual " + std::to_string(v.residual);
    return v;
  }
  if (cfg.use_oracle && sc.d <= 256 && model.n_cols() <= 16) {
    auto o = brute_force_oracle(P, cls, std::min(64, std::max(1, cfg.oracle_grid)), cfg);
    if (o.status != Status::Unknown) {
      o.binding = v.binding;
      o.restarts_run = v.restarts_run;
      return o;
    }
  }
  v.status = Status::Unknown;
  v.detail = "best residual " + std::to_string(v.residual) + " after " + std::to_string(v.restarts_run) +
             " restarts";
  return v;
}

// ---------------------------------------------------------------------------
// Radius of the compatible set along the ray towards the uniform box.

struct RayResult {
  double t_star = 0;   // largest t certified Compatible
  double t_hi = 1;     // smallest t not certified Compatible
  bool hi_certified = false;  // whether t_hi was certified Incompatible
  int unknown = 0;
  int evaluations = 0;
};

inline RayResult star_ray_membership(const CorrelationTensor& P, const CausalClass& cls,
                                     const SolverConfig& cfg = {}, int iters = 14) {
  const CorrelationTensor U = uniform_tensor(P.scenario());
  RayResult rr;
  auto test = [&](double t) {
    ++rr.evaluations;
    return network_feasibility(mix(P, U, t), cls, cfg).status;
  };
  Status s1 = test(1.0);
  if (s1 == Status::Compatible) {
    rr.t_star = rr.t_hi = 1.0;
    return rr;
  }
  rr.hi_certified = s1 == Status::Incompatible;
  rr.unknown += s1 == Status::Unknown;
  double lo = 0, hi = 1;
  for (int i = 0; i < iters; ++i) {
    const double t = 0.5 * (lo + hi);
    const Status s = test(t);
    if (s == Status::Compatible) {
      lo = t;
    } else {
      hi = t;
      rr.hi_certified = s == Status::Incompatible;
      rr.unknown += s == Status::Unknown;
    }
  }
  rr.t_star = lo;
  rr.t_hi = hi;
  return rr;
}

}  // namespace netcausal
