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

#ifndef DRGL_PROJECTION_H_
#define DRGL_PROJECTION_H_

#include <Eigen/Dense>

namespace drgl {

struct Projection2d {
  Eigen::MatrixXd coords;  // n x 2
  // Set when the covariance has rank < 2 and the first two (centered)
  // coordinates were used instead.
  bool degenerate = false;
};

// Projects centered embeddings onto their top two principal axes. Each
// axis is signed so that its first non-negligible loading is positive.
Projection2d project_2d(const Eigen::MatrixXd& embeddings);

}  // namespace drgl

#endif  // DRGL_PROJECTION_H_
