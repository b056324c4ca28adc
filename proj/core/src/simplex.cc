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

#include "drgl/simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/LU>

#include "drgl/error.h"

namespace drgl {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

using Eigen::Index;

constexpr double kPivotTolerance = 1e-9;

class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram& lp, const SimplexOptions& options)
      : options_(options), rows_(lp.a.rows()), cols_(lp.a.cols()) {
    Setup(lp);
  }

  LpSolution Run(const LinearProgram& lp) {
    if (num_artificial_ > 0) {
      cost_.setZero();
      cost_.tail(num_artificial_).setOnes();
      const LpStatus phase1 = Iterate(1);
      if (phase1 == LpStatus::kIterationLimit) return Finish(lp, phase1);
      double infeasibility = 0.0;
      for (Index r = 0; r < rows_; ++r)
        if (basis_[r] >= cols_) infeasibility += xb_[r];
      if (infeasibility > feasibility_tolerance_)
        return Finish(lp, LpStatus::kInfeasible);
      DriveOutArtificials();
    }
    cost_.setZero();
    cost_.head(cols_) = lp.c;
    for (Index j = cols_; j < total_; ++j) allowed_[j] = false;
    return Finish(lp, Iterate(2));
  }

 private:
  void Setup(const LinearProgram& lp) {
    if (lp.b.size() != rows_ || lp.c.size() != cols_)
      throw InvalidArgument("solve_lp: inconsistent dimensions");
    if (!lp.a.allFinite() || !lp.b.allFinite() || !lp.c.allFinite())
      throw InvalidArgument("solve_lp: non-finite problem data");

    // Singleton columns can start basic in their row when the row sign can
    // be chosen so that coefficient and right-hand side agree.
    std::vector<Index> crash(rows_, -1);
    sign_ = Eigen::VectorXd::Ones(rows_);
    for (Index j = 0; j < cols_; ++j) {
      Index row = -1;
      int nonzeros = 0;
      for (Index r = 0; r < rows_ && nonzeros < 2; ++r)
        if (lp.a(r, j) != 0.0) {
          row = r;
          ++nonzeros;
        }
      if (nonzeros != 1 || crash[row] >= 0) continue;
      const double coef = lp.a(row, j);
      const double rhs = lp.b[row];
      if (rhs != 0.0 && (rhs > 0) != (coef > 0)) continue;
      crash[row] = j;
      sign_[row] = coef > 0 ? 1.0 : -1.0;
    }
    for (Index r = 0; r < rows_; ++r)
      if (crash[r] < 0 && lp.b[r] < 0) sign_[r] = -1.0;

    num_artificial_ = 0;
    for (Index r = 0; r < rows_; ++r)
      if (crash[r] < 0) ++num_artificial_;
    total_ = cols_ + num_artificial_;

    a_ = Eigen::MatrixXd::Zero(rows_, total_);
    a_.leftCols(cols_) = sign_.asDiagonal() * lp.a;
    b_ = sign_.cwiseProduct(lp.b);
    basis_.assign(rows_, -1);
    Index next = cols_;
    for (Index r = 0; r < rows_; ++r) {
      if (crash[r] >= 0) {
        basis_[r] = crash[r];
      } else {
        a_(r, next) = 1.0;
        basis_[r] = next++;
      }
    }
    is_basic_.assign(total_, false);
    for (Index j : basis_) is_basic_[j] = true;
    allowed_.assign(total_, true);
    cost_ = Eigen::VectorXd::Zero(total_);
    feasibility_tolerance_ =
        options_.tolerance * std::max(1.0, b_.cwiseAbs().maxCoeff() * 10.0);
    Refactor();
  }

  void Refactor() {
    Eigen::MatrixXd basis_matrix(rows_, rows_);
    for (Index r = 0; r < rows_; ++r) basis_matrix.col(r) = a_.col(basis_[r]);
    binv_ = basis_matrix.partialPivLu().inverse();
    xb_ = binv_ * b_;
    for (Index r = 0; r < rows_; ++r)
      if (xb_[r] < 0.0 && xb_[r] > -feasibility_tolerance_) xb_[r] = 0.0;
    since_refactor_ = 0;
  }

  Eigen::VectorXd BasicCosts() const {
    Eigen::VectorXd cb(rows_);
    for (Index r = 0; r < rows_; ++r) cb[r] = cost_[basis_[r]];
    return cb;
  }

  void Pivot(Index leave_row, Index enter, const Eigen::VectorXd& u) {
    const double theta = xb_[leave_row] / u[leave_row];
    xb_ -= theta * u;
    xb_[leave_row] = theta;
    for (Index r = 0; r < rows_; ++r)
      if (xb_[r] < 0.0 && xb_[r] > -feasibility_tolerance_) xb_[r] = 0.0;

    const Eigen::RowVectorXd pivot_row = binv_.row(leave_row) / u[leave_row];
    for (Index r = 0; r < rows_; ++r)
      if (r != leave_row && u[r] != 0.0) binv_.row(r) -= u[r] * pivot_row;
    binv_.row(leave_row) = pivot_row;

    is_basic_[basis_[leave_row]] = false;
    is_basic_[enter] = true;
    basis_[leave_row] = enter;
    if (++since_refactor_ >= options_.refactor_interval) Refactor();
  }

  LpStatus Iterate(int phase) {
    while (true) {
      if (iterations_ >= options_.max_iterations) return LpStatus::kIterationLimit;
      const Eigen::VectorXd y = binv_.transpose() * BasicCosts();

      // Bland: the lowest-index improving column enters.
      Index enter = -1;
      for (Index j = 0; j < total_; ++j) {
        if (is_basic_[j] || !allowed_[j]) continue;
        const double reduced = cost_[j] - y.dot(a_.col(j));
        if (reduced < -options_.tolerance) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;

      const Eigen::VectorXd u = binv_ * a_.col(enter);
      Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Index r = 0; r < rows_; ++r) {
        if (u[r] <= kPivotTolerance) continue;
        const double ratio = xb_[r] / u[r];
        if (leave < 0 || ratio < best - 1e-12) {
          best = ratio;
          leave = r;
        } else if (ratio <= best + 1e-12 && basis_[r] < basis_[leave]) {
          best = std::min(best, ratio);
          leave = r;
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;

      if (options_.record_trace) {
        std::ostringstream line;
        line.precision(17);
        line << "phase " << phase << " iter " << iterations_ << " enter " << enter
             << " leave " << basis_[leave] << " step " << best << " objective "
             << BasicCosts().dot(xb_);
        trace_.push_back(line.str());
      }
      Pivot(leave, enter, u);
      ++iterations_;
    }
  }

  // After phase 1, artificials still basic sit at zero. Swap each for any
  // structural column with a nonzero entry in its row; rows with none are
  // redundant and keep their artificial, which can no longer move.
  void DriveOutArtificials() {
    for (Index r = 0; r < rows_; ++r) {
      if (basis_[r] < cols_) continue;
      for (Index j = 0; j < cols_; ++j) {
        if (is_basic_[j]) continue;
        const double alpha = binv_.row(r).dot(a_.col(j));
        if (std::abs(alpha) > kPivotTolerance) {
          Pivot(r, j, binv_ * a_.col(j));
          break;
        }
      }
    }
  }

  LpSolution Finish(const LinearProgram& lp, LpStatus status) {
    LpSolution out;
    out.status = status;
    out.iterations = iterations_;
    out.trace = std::move(trace_);
    out.basis = basis_;
    out.x = Eigen::VectorXd::Zero(cols_);
    for (Index r = 0; r < rows_; ++r)
      if (basis_[r] < cols_) out.x[basis_[r]] = xb_[r];
    out.objective = lp.c.dot(out.x);
    out.duals = sign_.cwiseProduct(binv_.transpose() * BasicCosts());
    return out;
  }

  const SimplexOptions options_;
  const Index rows_;
  const Index cols_;
  Index total_ = 0;
  Index num_artificial_ = 0;
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  Eigen::VectorXd sign_;
  Eigen::VectorXd cost_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  std::vector<Index> basis_;
  std::vector<bool> is_basic_;
  std::vector<bool> allowed_;
  double feasibility_tolerance_ = 0.0;
  int since_refactor_ = 0;
  int iterations_ = 0;
  std::vector<std::string> trace_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  if (options.tolerance <= 0.0 || options.max_iterations < 0 ||
      options.refactor_interval < 1)
    throw InvalidArgument("solve_lp: invalid options");
  RevisedSimplex solver(lp, options);
  return solver.Run(lp);
}

}  // namespace drgl
