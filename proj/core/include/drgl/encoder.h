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

#ifndef DRGL_ENCODER_H_
#define DRGL_ENCODER_H_

#include <cstdint>
#include <filesystem>

#include <Eigen/Dense>

#include "drgl/graph.h"

namespace drgl {

// Weights of the two-layer graph-convolutional encoder
//
//   xi = A * ReLU(Dropout(A * X * W1)) * W2
//
// where A is the renormalized adjacency. Weights are kept in double
// precision in memory; checkpoints store them as 32-bit floats.
struct EncoderParams {
  Eigen::MatrixXd w1;  // d x h1
  Eigen::MatrixXd w2;  // h1 x h
  double dropout_rate = 0.5;

  Eigen::Index input_dim() const { return w1.rows(); }
  Eigen::Index hidden_dim() const { return w1.cols(); }
  Eigen::Index output_dim() const { return w2.cols(); }
};

struct EncoderGradients {
  Eigen::MatrixXd w1;
  Eigen::MatrixXd w2;
};

// Activations recorded by one forward pass. It points at the adjacency and
// feature matrix passed to forward(), which must outlive it, and may be
// consumed by exactly one backward().
struct Tape {
  const NormalizedAdjacency* adjacency = nullptr;
  const Eigen::MatrixXd* features = nullptr;
  Eigen::MatrixXd mask;    // 0 or 1/(1-p) per hidden unit; empty at inference
  Eigen::MatrixXd hidden;  // ReLU(Dropout(A X W1))
  std::uint64_t params_digest = 0;
  bool consumed = false;
};

struct ForwardResult {
  Eigen::MatrixXd embeddings;  // n x h, row i is node i
  Tape tape;
};

// Glorot-uniform initialization, deterministic in seed.
EncoderParams init_encoder(Eigen::Index input_dim, Eigen::Index hidden_dim,
                           Eigen::Index output_dim, std::uint64_t seed,
                           double dropout_rate = 0.5);

void validate(const EncoderParams& params);

// Dropout is applied only when `training` is set; its mask is drawn from
// `seed`.
ForwardResult forward(const EncoderParams& params,
                      const NormalizedAdjacency& adjacency,
                      const Eigen::MatrixXd& features, bool training,
                      std::uint64_t seed);

// Gradients of <grad_xi, xi> with respect to W1 and W2 under the dropout
// mask recorded in `tape`. Throws InvalidArgument on a consumed tape, or one
// recorded for different parameters.
EncoderGradients backward(const EncoderParams& params, Tape& tape,
                          const Eigen::MatrixXd& grad_xi);

// Checkpoint layout (little-endian):
//   char[8]  magic "DRGLENC1"
//   u32      input_dim, hidden_dim, output_dim
//   f32      dropout_rate
//   f32[]    W1 row-major (input_dim * hidden_dim)
//   f32[]    W2 row-major (hidden_dim * output_dim)
void save_checkpoint(const std::filesystem::path& path,
                     const EncoderParams& params);
EncoderParams load_checkpoint(const std::filesystem::path& path);

}  // namespace drgl

#endif  // DRGL_ENCODER_H_
