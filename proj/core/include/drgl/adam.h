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

#ifndef DRGL_ADAM_H_
#define DRGL_ADAM_H_

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "drgl/error.h"

namespace drgl {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam over a fixed list of parameter matrices. step() descends along the
// given gradients; moments are created lazily on the first step.
class Adam {
 public:
  Adam(double learning_rate, AdamConfig config = {})
      : learning_rate_(learning_rate), config_(config) {
    if (!(learning_rate >= 0.0))
      throw InvalidArgument("adam: learning rate must be non-negative");
  }

  void step(const std::vector<Eigen::MatrixXd*>& params,
            const std::vector<const Eigen::MatrixXd*>& grads) {
    if (params.size() != grads.size())
      throw InvalidArgument("adam: params/grads size mismatch");
    if (first_.empty()) {
      for (const auto* p : params) {
        first_.push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
        second_.push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
      }
    }
    ++steps_;
    const double c1 = 1.0 - std::pow(config_.beta1, steps_);
    const double c2 = 1.0 - std::pow(config_.beta2, steps_);
    for (std::size_t k = 0; k < params.size(); ++k) {
      const Eigen::MatrixXd& g = *grads[k];
      first_[k] = config_.beta1 * first_[k] + (1.0 - config_.beta1) * g;
      second_[k] = config_.beta2 * second_[k] +
                   (1.0 - config_.beta2) * g.cwiseProduct(g);
      *params[k] -= (learning_rate_ *
                     ((first_[k] / c1).array() /
                      ((second_[k] / c2).array().sqrt() + config_.epsilon)))
                        .matrix();
    }
  }

  int steps() const { return steps_; }

 private:
  double learning_rate_;
  AdamConfig config_;
  int steps_ = 0;
  std::vector<Eigen::MatrixXd> first_;
  std::vector<Eigen::MatrixXd> second_;
};

}  // namespace drgl

#endif  // DRGL_ADAM_H_
