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

#ifndef DRGL_TESTS_ORACLE_INSTANCES_H_
#define DRGL_TESTS_ORACLE_INSTANCES_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "drgl/lfd.h"
#include "drgl/random.h"

namespace drgl::oracle {

struct LfdInstance {
  Eigen::MatrixXd support;  // s x h
  std::vector<std::int32_t> labels;
  EmpiricalDistribution phat;
  Eigen::MatrixXd costs;
};

// s points with Gaussian coordinates; the first M labels cover every class
// and the rest are uniform.
inline LfdInstance random_lfd_instance(Rng& rng, int s, int classes, int dim,
                                       CostKind kind = CostKind::kEuclidean) {
  LfdInstance inst;
  inst.support.resize(s, dim);
  for (Eigen::Index k = 0; k < inst.support.size(); ++k)
    inst.support.data()[k] = rng.normal();
  for (int i = 0; i < s; ++i)
    inst.labels.push_back(i < classes ? i : static_cast<std::int32_t>(rng.below(classes)));
  rng.shuffle(inst.labels);
  inst.phat = empirical_distributions(inst.labels, classes);
  inst.costs = pairwise_costs(inst.support, kind);
  return inst;
}

// Radii drawn uniformly in [0, scale * max cost].
inline Eigen::VectorXd random_radii(Rng& rng, const Eigen::MatrixXd& costs, int classes,
                                    double scale) {
  Eigen::VectorXd r(classes);
  for (int m = 0; m < classes; ++m) r(m) = rng.uniform() * scale * costs.maxCoeff();
  return r;
}

}  // namespace drgl::oracle

#endif  // DRGL_TESTS_ORACLE_INSTANCES_H_
