// Copyright 2026 The DRGL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lp_oracle.h"

#include <cmath>
#include <limits>
#include <vector>

namespace drgl::oracle {
namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-10;

class Tableau {
 public:
  // rows x (cols + 1); the last column is the right-hand side.
  Eigen::MatrixXd t;
  std::vector<Eigen::Index> basis;

  void pivot(Eigen::Index row, Eigen::Index col) {
    t.row(row) /= t(row, col);
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      if (r != row && t(r, col) != 0.0) t.row(r) -= t(r, col) * t.row(row);
    }
    basis[row] = col;
  }

  // Minimizes cost over columns [0, allowed); returns false if unbounded.
  bool optimize(const Eigen::VectorXd& cost, Eigen::Index allowed) {
    const Eigen::Index rhs = t.cols() - 1;
    for (int guard = 0; guard < 1000000; ++guard) {
      Eigen::VectorXd cb(static_cast<Eigen::Index>(basis.size()));
      for (std::size_t r = 0; r < basis.size(); ++r) cb(r) = cost(basis[r]);
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        const double reduced = cost(j) - cb.dot(t.col(j));
        if (reduced < -kCostEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < t.rows(); ++r) {
        if (t(r, enter) > kPivotEps) {
          const double ratio = t(r, rhs) / t(r, enter);
          if (ratio < best - 1e-13 ||
              (std::abs(ratio - best) <= 1e-13 && basis[r] < basis[leave])) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return false;
  }
};

}  // namespace

OracleResult tableau_solve(const DenseLp& lp) {
  const Eigen::Index n = lp.c.size();
  const Eigen::Index me = lp.a_eq.rows();
  const Eigen::Index mu = lp.a_ub.rows();
  const Eigen::Index m = me + mu;
  // Columns: x (n), slacks (mu), artificials (m), rhs.
  const Eigen::Index total = n + mu + m;
  Tableau tab;
  tab.t = Eigen::MatrixXd::Zero(m, total + 1);
  tab.basis.assign(static_cast<std::size_t>(m), 0);
  for (Eigen::Index r = 0; r < m; ++r) {
    const bool eq = r < me;
    Eigen::VectorXd row = Eigen::VectorXd::Zero(total + 1);
    if (eq) {
      row.head(n) = lp.a_eq.row(r).transpose();
      row(total) = lp.b_eq(r);
    } else {
      row.head(n) = lp.a_ub.row(r - me).transpose();
      row(n + (r - me)) = 1.0;
      row(total) = lp.b_ub(r - me);
    }
    if (row(total) < 0) row = -row;
    row(n + mu + r) = 1.0;
    tab.t.row(r) = row.transpose();
    tab.basis[r] = n + mu + r;
  }

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total);
  phase1.tail(m).setOnes();
  OracleResult out;
  if (!tab.optimize(phase1, total)) return out;
  double infeasibility = 0.0;
  for (Eigen::Index r = 0; r < m; ++r)
    if (tab.basis[r] >= n + mu) infeasibility += tab.t(r, total);
  if (infeasibility > 1e-9) return out;

  // Drive remaining artificials out where a real column allows it.
  for (Eigen::Index r = 0; r < m; ++r) {
    if (tab.basis[r] < n + mu) continue;
    for (Eigen::Index j = 0; j < n + mu; ++j) {
      if (std::abs(tab.t(r, j)) > 1e-9) {
        tab.pivot(r, j);
        break;
      }
    }
  }

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(total);
  phase2.head(n) = lp.c;
  if (!tab.optimize(phase2, n + mu)) return out;
  out.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index r = 0; r < m; ++r)
    if (tab.basis[r] < n) out.x(tab.basis[r]) = tab.t(r, total);
  out.objective = lp.c.dot(out.x);
  out.optimal = true;
  return out;
}

LfdOracleResult lfd_oracle(const Eigen::MatrixXd& costs, const Eigen::MatrixXd& phat,
                           const Eigen::VectorXd& radii) {
  const Eigen::Index s = costs.rows();
  const Eigen::Index classes = phat.rows();
  // Variable layout: p_m(i) | t_i | gamma_m(i, j).
  auto p_index = [&](Eigen::Index m, Eigen::Index i) { return m * s + i; };
  auto t_index = [&](Eigen::Index i) { return classes * s + i; };
  auto g_index = [&](Eigen::Index m, Eigen::Index i, Eigen::Index j) {
    return classes * s + s + m * s * s + i * s + j;
  };
  const Eigen::Index n = classes * s + s + classes * s * s;

  DenseLp lp;
  lp.c = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < s; ++i) lp.c(t_index(i)) = 1.0;

  lp.a_eq = Eigen::MatrixXd::Zero(2 * classes * s, n);
  lp.b_eq = Eigen::VectorXd::Zero(2 * classes * s);
  Eigen::Index row = 0;
  for (Eigen::Index m = 0; m < classes; ++m) {
    for (Eigen::Index j = 0; j < s; ++j, ++row) {
      for (Eigen::Index i = 0; i < s; ++i) lp.a_eq(row, g_index(m, i, j)) = 1.0;
      lp.b_eq(row) = phat(m, j);
    }
    for (Eigen::Index i = 0; i < s; ++i, ++row) {
      for (Eigen::Index j = 0; j < s; ++j) lp.a_eq(row, g_index(m, i, j)) = 1.0;
      lp.a_eq(row, p_index(m, i)) = -1.0;
    }
  }

  lp.a_ub = Eigen::MatrixXd::Zero(classes * s + classes, n);
  lp.b_ub = Eigen::VectorXd::Zero(classes * s + classes);
  row = 0;
  for (Eigen::Index m = 0; m < classes; ++m) {
    for (Eigen::Index i = 0; i < s; ++i, ++row) {
      lp.a_ub(row, p_index(m, i)) = 1.0;
      lp.a_ub(row, t_index(i)) = -1.0;
    }
  }
  for (Eigen::Index m = 0; m < classes; ++m, ++row) {
    for (Eigen::Index i = 0; i < s; ++i)
      for (Eigen::Index j = 0; j < s; ++j) lp.a_ub(row, g_index(m, i, j)) = costs(i, j);
    lp.b_ub(row) = radii(m);
  }

  const OracleResult res = tableau_solve(lp);
  LfdOracleResult out;
  out.optimal = res.optimal;
  if (!res.optimal) return out;
  out.margin = res.objective;
  out.lfd = Eigen::MatrixXd::Zero(classes, s);
  for (Eigen::Index m = 0; m < classes; ++m)
    for (Eigen::Index i = 0; i < s; ++i) out.lfd(m, i) = res.x(p_index(m, i));
  return out;
}

}  // namespace drgl::oracle
