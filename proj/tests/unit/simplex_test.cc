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

#include <gtest/gtest.h>

#include "drgl/random.h"
#include "lp_oracle.h"

namespace drgl {
namespace {

LinearProgram textbook() {
  // max 3x + 5y  s.t.  x <= 4, 2y <= 12, 3x + 2y <= 18.
  LinearProgram lp;
  lp.a.resize(3, 5);
  lp.a << 1, 0, 1, 0, 0,
          0, 2, 0, 1, 0,
          3, 2, 0, 0, 1;
  lp.b.resize(3);
  lp.b << 4, 12, 18;
  lp.c.resize(5);
  lp.c << -3, -5, 0, 0, 0;
  return lp;
}

TEST(Simplex, TextbookOptimum) {
  const LpSolution sol = solve_lp(textbook());
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, -36.0, 1e-12);
  EXPECT_NEAR(sol.x(0), 2.0, 1e-12);
  EXPECT_NEAR(sol.x(1), 6.0, 1e-12);
}

TEST(Simplex, DualsCertifyOptimality) {
  const LinearProgram lp = textbook();
  const LpSolution sol = solve_lp(lp);
  EXPECT_NEAR(lp.b.dot(sol.duals), sol.objective, 1e-10);
  const Eigen::VectorXd reduced = lp.c - lp.a.transpose() * sol.duals;
  EXPECT_GE(reduced.minCoeff(), -1e-10);
  // Shadow prices of the two binding rows.
  EXPECT_NEAR(sol.duals(1), -1.5, 1e-12);
  EXPECT_NEAR(sol.duals(2), -1.0, 1e-12);
}

TEST(Simplex, BealeCyclingExample) {
  LinearProgram lp;
  lp.a.resize(3, 7);
  lp.a << 1, 0, 0, 0.25, -8, -1, 9,
          0, 1, 0, 0.5, -12, -0.5, 3,
          0, 0, 1, 0, 0, 1, 0;
  lp.b = Eigen::Vector3d(0, 0, 1);
  lp.c.resize(7);
  lp.c << 0, 0, 0, -0.75, 20, -0.5, 6;
  const LpSolution sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, -1.25, 1e-12);
}

TEST(Simplex, Infeasible) {
  LinearProgram lp;
  lp.a = Eigen::MatrixXd::Ones(1, 2);
  lp.b = Eigen::VectorXd::Constant(1, -1.0);
  lp.c = Eigen::VectorXd::Ones(2);
  EXPECT_EQ(solve_lp(lp).status, LpStatus::kInfeasible);
}

TEST(Simplex, Unbounded) {
  LinearProgram lp;
  lp.a.resize(1, 2);
  lp.a << 1, -1;
  lp.b = Eigen::VectorXd::Zero(1);
  lp.c.resize(2);
  lp.c << -1, 0;
  EXPECT_EQ(solve_lp(lp).status, LpStatus::kUnbounded);
}

TEST(Simplex, RedundantRowsAndNegativeRhs) {
  LinearProgram lp;
  lp.a.resize(3, 3);
  lp.a << 1, 1, 1,
          2, 2, 2,
          -1, 1, 0;
  lp.b = Eigen::Vector3d(1, 2, -0.5);
  lp.c = Eigen::Vector3d(1, 2, 3);
  const LpSolution sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 1.25, 1e-12);  // x = (0.75, 0.25, 0)
  EXPECT_LE((lp.a * sol.x - lp.b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Simplex, IterationLimitIsReported) {
  SimplexOptions opts;
  opts.max_iterations = 1;
  EXPECT_EQ(solve_lp(textbook(), opts).status, LpStatus::kIterationLimit);
}

TEST(Simplex, TraceIsRecordedOnRequest) {
  SimplexOptions opts;
  opts.record_trace = true;
  const LpSolution sol = solve_lp(textbook(), opts);
  EXPECT_FALSE(sol.trace.empty());
  EXPECT_TRUE(solve_lp(textbook()).trace.empty());
}

TEST(Simplex, AgreesWithTableauOracleOnRandomPrograms) {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 2 + static_cast<int>(rng.below(5));
    const int n = m + 2 + static_cast<int>(rng.below(6));
    LinearProgram lp;
    lp.a.resize(m, n);
    for (Eigen::Index k = 0; k < lp.a.size(); ++k)
      lp.a.data()[k] = rng.uniform() < 0.3 ? 0.0 : rng.normal();
    // A feasible point keeps most instances feasible.
    Eigen::VectorXd x0(n);
    for (int j = 0; j < n; ++j) x0(j) = rng.uniform();
    lp.b = lp.a * x0;
    lp.c.resize(n);
    for (int j = 0; j < n; ++j) lp.c(j) = rng.uniform() + 0.1;
    const LpSolution sol = solve_lp(lp);
    oracle::DenseLp ref;
    ref.a_eq = lp.a;
    ref.b_eq = lp.b;
    ref.a_ub.resize(0, n);
    ref.b_ub.resize(0);
    ref.c = lp.c;
    const auto expected = oracle::tableau_solve(ref);
    ASSERT_TRUE(expected.optimal);
    ASSERT_EQ(sol.status, LpStatus::kOptimal) << trial;
    EXPECT_NEAR(sol.objective, expected.objective, 1e-8) << trial;
    EXPECT_NEAR(lp.b.dot(sol.duals), sol.objective, 1e-8) << trial;
  }
}

}  // namespace
}  // namespace drgl
