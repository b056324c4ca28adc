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

#include "drgl/dro_grad.h"

#include <cmath>

namespace drgl {

using Eigen::Index;

std::vector<Eigen::MatrixXd> grad_margin_wrt_costs(const LfdSolution& solution) {
  std::vector<Eigen::MatrixXd> grads;
  grads.reserve(solution.transport.size());
  for (std::size_t m = 0; m < solution.transport.size(); ++m)
    grads.push_back(solution.budget_duals[static_cast<Index>(m)] *
                    solution.transport[m]);
  return grads;
}

Eigen::MatrixXd total_cost_gradient(const LfdSolution& solution) {
  const Index s = solution.lfd.cols();
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(s, s);
  for (const auto& g : grad_margin_wrt_costs(solution)) total += g;
  return total;
}

Eigen::MatrixXd radius_cost_gradient(const LfdSolution& solution,
                                     const Eigen::MatrixXd& costs, double rho) {
  Eigen::MatrixXd weights;
  offdiagonal_median(costs, &weights);
  return -(solution.budget_duals.sum() * rho) * weights;
}

Eigen::MatrixXd chain_cost_gradient(const Eigen::MatrixXd& cost_grad,
                                    const Eigen::MatrixXd& support,
                                    CostKind kind) {
  const Index s = support.rows();
  if (cost_grad.rows() != s || cost_grad.cols() != s)
    throw InvalidArgument("chain_cost_gradient: shape mismatch");
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(s, support.cols());
  for (Index i = 0; i < s; ++i)
    for (Index j = 0; j < s; ++j) {
      const double g = cost_grad(i, j);
      if (i == j || g == 0.0) continue;
      const Eigen::RowVectorXd diff = support.row(i) - support.row(j);
      Eigen::RowVectorXd dc_dxi;
      if (kind == CostKind::kSquaredEuclidean) {
        dc_dxi = 2.0 * diff;
      } else {
        const double dist = diff.norm();
        if (dist < kCoincidentDistance) continue;
        dc_dxi = diff / dist;
      }
      grad.row(i) += g * dc_dxi;
      grad.row(j) -= g * dc_dxi;
    }
  return grad;
}

Eigen::MatrixXd grad_margin_wrt_embeddings(const LfdSolution& solution,
                                           const Eigen::MatrixXd& support,
                                           CostKind kind) {
  return chain_cost_gradient(total_cost_gradient(solution), support, kind);
}

}  // namespace drgl
