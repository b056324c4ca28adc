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

#include "drgl/projection.h"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace drgl {

using Eigen::Index;

Projection2d project_2d(const Eigen::MatrixXd& embeddings) {
  const Index n = embeddings.rows();
  const Index h = embeddings.cols();
  Projection2d out;
  out.coords = Eigen::MatrixXd::Zero(n, 2);
  if (n == 0) {
    out.degenerate = true;
    return out;
  }
  const Eigen::MatrixXd centered =
      embeddings.rowwise() - embeddings.colwise().mean();
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(std::max<Index>(n - 1, 1));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::VectorXd& values = eig.eigenvalues();  // ascending
  const double top = h > 0 ? values[h - 1] : 0.0;
  const bool rank2 = h >= 2 && values[h - 2] > 1e-12 * std::max(1.0, top);
  if (!rank2) {
    out.degenerate = true;
    for (Index c = 0; c < std::min<Index>(h, 2); ++c) out.coords.col(c) = centered.col(c);
    return out;
  }
  for (int axis = 0; axis < 2; ++axis) {
    Eigen::VectorXd v = eig.eigenvectors().col(h - 1 - axis);
    for (Index k = 0; k < h; ++k)
      if (std::abs(v[k]) > 1e-12) {
        if (v[k] < 0) v = -v;
        break;
      }
    out.coords.col(axis) = centered * v;
  }
  return out;
}

}  // namespace drgl
