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

#ifndef DRGL_SIMPLEX_H_
#define DRGL_SIMPLEX_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace drgl {

// Standard-form linear program:  minimize c'x  subject to  A x = b, x >= 0.
struct LinearProgram {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(LpStatus status);

struct SimplexOptions {
  // Reduced-cost and feasibility tolerance.
  double tolerance = 1e-9;
  int max_iterations = 200000;
  // The explicit basis inverse is rebuilt from scratch this often.
  int refactor_interval = 50;
  bool record_trace = false;
};

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  Eigen::VectorXd x;
  // Row duals y of the final basis: y = B^{-T} c_B, so that at optimality
  // A'y <= c and the objective equals b'y.
  Eigen::VectorXd duals;
  double objective = 0.0;
  // basis[r] is the column basic in row r; values >= a.cols() denote
  // artificial columns left on redundant rows.
  std::vector<Eigen::Index> basis;
  int iterations = 0;
  std::vector<std::string> trace;
};

// Two-phase dense revised simplex with Bland's smallest-index rule for both
// the entering column and ratio-test ties, which rules out cycling on the
// heavily degenerate transport programs solved here. Unit singleton columns
// seed the starting basis; artificials are added only for rows without one.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace drgl

#endif  // DRGL_SIMPLEX_H_
