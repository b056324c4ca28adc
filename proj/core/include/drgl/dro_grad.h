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

#ifndef DRGL_DRO_GRAD_H_
#define DRGL_DRO_GRAD_H_

#include <vector>

#include <Eigen/Dense>

#include "drgl/lfd.h"

namespace drgl {

// Below this pairwise distance the euclidean cost is treated as
// non-differentiable and contributes a zero subgradient.
inline constexpr double kCoincidentDistance = 1e-9;

// Envelope sensitivity of total_margin to the costs seen by each class:
// d(total_margin)/dC_m(i, j) = lambda_m * gamma_m(i, j), holding radii
// fixed. One s x s matrix per class, all entries non-negative.
std::vector<Eigen::MatrixXd> grad_margin_wrt_costs(const LfdSolution& solution);

// Sum of the per-class matrices: the sensitivity to a cost matrix shared by
// all classes.
Eigen::MatrixXd total_cost_gradient(const LfdSolution& solution);

// Extra cost sensitivity when every radius is rho * offdiagonal_median(C):
// -(sum_m lambda_m) * rho * d(median)/dC.
Eigen::MatrixXd radius_cost_gradient(const LfdSolution& solution,
                                     const Eigen::MatrixXd& costs, double rho);

// Chains a cost-space gradient (s x s) through C(i, j) = c(xi_i, xi_j).
Eigen::MatrixXd chain_cost_gradient(const Eigen::MatrixXd& cost_grad,
                                    const Eigen::MatrixXd& support,
                                    CostKind kind);

// d(total_margin)/d(xi) for the support embeddings (s x h), radii fixed.
Eigen::MatrixXd grad_margin_wrt_embeddings(const LfdSolution& solution,
                                           const Eigen::MatrixXd& support,
                                           CostKind kind);

}  // namespace drgl

#endif  // DRGL_DRO_GRAD_H_
