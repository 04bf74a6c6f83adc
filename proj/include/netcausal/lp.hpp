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

// Small dense two-phase simplex.  Sizes here are a few hundred rows at most,
// so a full tableau with rank-1 pivots is simpler and fast enough.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace netcausal {

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded, IterLimit };
  Status status = Status::IterLimit;
  Eigen::VectorXd x;
  double obj = std::numeric_limits<double>::infinity();
  int iters = 0;
};

namespace detail {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Tableau {
  RowMat T;                // m constraint rows + 1 objective row; last column is rhs
  std::vector<int> basis;  // basic column per row
  int m = 0, ncols = 0;

  void pivot(int r, int c) {
    const double p = T(r, c);
    T.row(r) /= p;
    for (int i = 0; i <= m; ++i) {
      if (i == r) continue;
      const double f = T(i, c);
      if (f != 0.0) T.row(i) -= f * T.row(r);
    }
    basis[r] = c;
  }

  // Objective row holds reduced costs for `cost`.
  void load_cost(const std::vector<double>& cost) {
    T.row(m).setZero();
    for (int j = 0; j < ncols; ++j) T(m, j) = cost[j];
    for (int i = 0; i < m; ++i) {
      const double cb = cost[basis[i]];
      if (cb != 0.0) T.row(m) -= cb * T.row(i);
    }
  }

  // Returns Optimal / Unbounded / IterLimit.
  LpResult::Status run(const std::vector<char>& allowed, int max_iter, int& iters) {
    const double eps_rc = 1e-10, eps_piv = 1e-11;
    int degenerate = 0;
    while (iters < max_iter) {
      const bool bland = degenerate > 50;
      int enter = -1;
      double best = -eps_rc;
      for (int j = 0; j < ncols; ++j) {
        if (!allowed[j]) continue;
        const double rc = T(m, j);
        if (rc < best) {
          enter = j;
          best = rc;
          if (bland) break;
        }
      }
      if (enter < 0) return LpResult::Status::Optimal;
      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double a = T(i, enter);
        if (a > eps_piv) {
          const double q = T(i, ncols) / a;
          if (q < ratio - 1e-13 || (q <= ratio + 1e-13 && leave >= 0 && basis[i] < basis[leave])) {
            ratio = q;
            leave = i;
          }
        }
      }
      if (leave < 0) return LpResult::Status::Unbounded;
      degenerate = ratio < 1e-13 ? degenerate + 1 : 0;
      pivot(leave, enter);
      ++iters;
    }
    return LpResult::Status::IterLimit;
  }
};

}  // namespace detail

// minimize c^T x  s.t.  Aub x <= bub,  Aeq x = beq,  x >= 0.
inline LpResult solve_lp(const Eigen::MatrixXd& Aub, const Eigen::VectorXd& bub,
                         const Eigen::MatrixXd& Aeq, const Eigen::VectorXd& beq,
                         const Eigen::VectorXd& c, int max_iter = 100000) {
  const int n = static_cast<int>(c.size());
  const int m1 = static_cast<int>(Aub.rows()), m2 = static_cast<int>(Aeq.rows());
  const int m = m1 + m2;
  std::vector<int> need_art;
  need_art.reserve(m);
  for (int i = 0; i < m1; ++i)
    if (bub(i) < 0) need_art.push_back(i);
  for (int i = 0; i < m2; ++i) need_art.push_back(m1 + i);
  const int na = static_cast<int>(need_art.size());
  detail::Tableau tb;
  tb.m = m;
  tb.ncols = n + m1 + na;
  tb.T = detail::RowMat::Zero(m + 1, tb.ncols + 1);
  tb.basis.assign(m, -1);
  for (int i = 0; i < m1; ++i) {
    const double sgn = bub(i) < 0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) tb.T(i, j) = sgn * Aub(i, j);
    tb.T(i, n + i) = sgn;
    tb.T(i, tb.ncols) = sgn * bub(i);
    if (sgn > 0) tb.basis[i] = n + i;
  }
  for (int i = 0; i < m2; ++i) {
    const double sgn = beq(i) < 0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) tb.T(m1 + i, j) = sgn * Aeq(i, j);
    tb.T(m1 + i, tb.ncols) = sgn * beq(i);
  }
  for (int k = 0; k < na; ++k) {
    tb.T(need_art[k], n + m1 + k) = 1.0;
    tb.basis[need_art[k]] = n + m1 + k;
  }
  LpResult res;
  std::vector<char> allowed(tb.ncols, 1);
  if (na > 0) {
    std::vector<double> c1(tb.ncols, 0.0);
    for (int k = 0; k < na; ++k) c1[n + m1 + k] = 1.0;
    tb.load_cost(c1);
    auto st = tb.run(allowed, max_iter, res.iters);
    if (st == LpResult::Status::IterLimit) {
      res.status = st;
      return res;
    }
    double infeas = 0;
    for (int i = 0; i < m; ++i)
      if (tb.basis[i] >= n + m1) infeas += tb.T(i, tb.ncols);
    double scale = 1.0;
    for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(tb.T(i, tb.ncols)));
    if (infeas > 1e-9 * scale) {
      res.status = LpResult::Status::Infeasible;
      return res;
    }
    // drive zero artificials out of the basis where possible
    for (int i = 0; i < m; ++i) {
      if (tb.basis[i] < n + m1) continue;
      int best = -1;
      double bv = 1e-9;
      for (int j = 0; j < n + m1; ++j)
        if (std::abs(tb.T(i, j)) > bv) {
          bv = std::abs(tb.T(i, j));
          best = j;
        }
      if (best >= 0) tb.pivot(i, best);
    }
    for (int k = 0; k < na; ++k) allowed[n + m1 + k] = 0;
  }
  std::vector<double> c2(tb.ncols, 0.0);
  for (int j = 0; j < n; ++j) c2[j] = c(j);
  tb.load_cost(c2);
  res.status = tb.run(allowed, max_iter, res.iters);
  res.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i)
    if (tb.basis[i] < n) res.x(tb.basis[i]) = std::max(0.0, tb.T(i, tb.ncols));
  res.obj = c.dot(res.x);
  return res;
}

struct LinfFit {
  Eigen::VectorXd w;  // simplex weights
  double residual = std::numeric_limits<double>::infinity();
  bool ok = false;
};

// min_w ||A w - p||_inf over the probability simplex.  Large row counts use
// constraint generation over the most violated rows.
inline LinfFit linf_fit(const Eigen::MatrixXd& A, const Eigen::VectorXd& p,
                        const Eigen::VectorXd* w0 = nullptr) {
  const int d = static_cast<int>(A.rows()), K = static_cast<int>(A.cols());
  std::vector<int> active;
  Eigen::VectorXd w = w0 ? *w0 : Eigen::VectorXd::Constant(K, 1.0 / K);
  const int full_limit = 160;
  if (d <= full_limit) {
    active.resize(d);
    for (int i = 0; i < d; ++i) active[i] = i;
  } else {
    Eigen::VectorXd r = (A * w - p).cwiseAbs();
    std::vector<int> idx(d);
    for (int i = 0; i < d; ++i) idx[i] = i;
    std::partial_sort(idx.begin(), idx.begin() + full_limit, idx.end(),
                      [&](int a, int b) { return r(a) > r(b); });
    active.assign(idx.begin(), idx.begin() + full_limit);
    std::sort(active.begin(), active.end());
  }
  LinfFit fit;
  for (int round = 0; round < 200; ++round) {
    const int na = static_cast<int>(active.size());
    Eigen::MatrixXd Aub = Eigen::MatrixXd::Zero(2 * na, K + 1);
    Eigen::VectorXd bub(2 * na);
    for (int t = 0; t < na; ++t) {
      const int i = active[t];
      Aub.block(t, 0, 1, K) = A.row(i);
      Aub(t, K) = -1.0;
      bub(t) = p(i);
      Aub.block(na + t, 0, 1, K) = -A.row(i);
      Aub(na + t, K) = -1.0;
      bub(na + t) = -p(i);
    }
    Eigen::MatrixXd Aeq = Eigen::MatrixXd::Zero(1, K + 1);
    Aeq.block(0, 0, 1, K).setOnes();
    Eigen::VectorXd beq = Eigen::VectorXd::Ones(1);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(K + 1);
    c(K) = 1.0;
    LpResult lp = solve_lp(Aub, bub, Aeq, beq, c);
    if (lp.status != LpResult::Status::Optimal) return fit;
    w = lp.x.head(K);
    const double s = w.sum();
    if (s > 0) w /= s;
    Eigen::VectorXd r = (A * w - p).cwiseAbs();
    const double full = r.maxCoeff();
    fit.w = w;
    fit.residual = full;
    fit.ok = true;
    if (na == d || full <= lp.x(K) + 1e-12) return fit;
    std::vector<char> in(d, 0);
    for (int i : active) in[i] = 1;
    std::vector<int> cand;
    for (int i = 0; i < d; ++i)
      if (!in[i] && r(i) > lp.x(K) + 1e-12) cand.push_back(i);
    std::sort(cand.begin(), cand.end(), [&](int a, int b) { return r(a) > r(b); });
    if (cand.size() > 64) cand.resize(64);
    active.insert(active.end(), cand.begin(), cand.end());
    std::sort(active.begin(), active.end());
  }
  return fit;
}

// min_w ||A w - p||_1 over the probability simplex.
inline LinfFit l1_fit(const Eigen::MatrixXd& A, const Eigen::VectorXd& p) {
  const int d = static_cast<int>(A.rows()), K = static_cast<int>(A.cols());
  Eigen::MatrixXd Aub = Eigen::MatrixXd::Zero(2 * d, K + d);
  Eigen::VectorXd bub(2 * d);
  for (int i = 0; i < d; ++i) {
    Aub.block(i, 0, 1, K) = A.row(i);
    Aub(i, K + i) = -1.0;
    bub(i) = p(i);
    Aub.block(d + i, 0, 1, K) = -A.row(i);
    Aub(d + i, K + i) = -1.0;
    bub(d + i) = -p(i);
  }
  Eigen::MatrixXd Aeq = Eigen::MatrixXd::Zero(1, K + d);
  Aeq.block(0, 0, 1, K).setOnes();
  Eigen::VectorXd beq = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(K + d);
  c.tail(d).setOnes();
  LinfFit fit;
  LpResult lp = solve_lp(Aub, bub, Aeq, beq, c);
  if (lp.status != LpResult::Status::Optimal) return fit;
  fit.w = lp.x.head(K).cwiseMax(0.0);
  fit.w /= fit.w.sum();
  fit.residual = (A * fit.w - p).cwiseAbs().maxCoeff();
  fit.ok = true;
  return fit;
}

}  // namespace netcausal
