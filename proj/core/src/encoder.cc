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

#include "drgl/encoder.h"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

#include "drgl/random.h"

namespace drgl {

namespace {

constexpr std::array<char, 8> kMagic = {'D', 'R', 'G', 'L', 'E', 'N', 'C', '1'};

std::uint64_t fnv1a(const Eigen::MatrixXd& m, std::uint64_t h) {
  const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
  const auto len = static_cast<std::size_t>(m.size()) * sizeof(double);
  for (std::size_t k = 0; k < len; ++k) {
    h ^= bytes[k];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t digest(const EncoderParams& p) {
  return fnv1a(p.w2, fnv1a(p.w1, 0xcbf29ce484222325ULL));
}

Eigen::MatrixXd glorot(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Eigen::MatrixXd w(rows, cols);
  // Fill row-major so the draw order is independent of Eigen's storage.
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      w(r, c) = (2.0 * rng.uniform() - 1.0) * limit;
  return w;
}

template <typename T>
void write_pod(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw Error("checkpoint: truncated file");
  return value;
}

void write_block(std::ofstream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      write_pod(out, static_cast<float>(m(r, c)));
}

Eigen::MatrixXd read_block(std::ifstream& in, Eigen::Index rows,
                           Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = static_cast<double>(read_pod<float>(in));
  return m;
}

}  // namespace

EncoderParams init_encoder(Eigen::Index input_dim, Eigen::Index hidden_dim,
                           Eigen::Index output_dim, std::uint64_t seed,
                           double dropout_rate) {
  if (input_dim < 1 || hidden_dim < 1 || output_dim < 1)
    throw InvalidArgument("init_encoder: dimensions must be positive");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0))
    throw InvalidArgument("init_encoder: dropout_rate must lie in [0, 1)");
  Rng rng(seed);
  EncoderParams p;
  p.w1 = glorot(input_dim, hidden_dim, rng);
  p.w2 = glorot(hidden_dim, output_dim, rng);
  p.dropout_rate = dropout_rate;
  return p;
}

void validate(const EncoderParams& params) {
  if (params.w1.size() == 0 || params.w2.size() == 0)
    throw InvalidArgument("encoder: empty weight matrix");
  if (params.w1.cols() != params.w2.rows())
    throw InvalidArgument("encoder: W1 columns must equal W2 rows");
  if (!params.w1.allFinite() || !params.w2.allFinite())
    throw NumericalError("encoder: non-finite weights");
  if (!(params.dropout_rate >= 0.0 && params.dropout_rate < 1.0))
    throw InvalidArgument("encoder: dropout_rate must lie in [0, 1)");
}

ForwardResult forward(const EncoderParams& params,
                      const NormalizedAdjacency& adjacency,
                      const Eigen::MatrixXd& features, bool training,
                      std::uint64_t seed) {
  validate(params);
  const auto n = features.rows();
  if (adjacency.size() != n || adjacency.matrix.cols() != n)
    throw InvalidArgument("forward: adjacency is not n x n");
  if (features.cols() != params.input_dim())
    throw InvalidArgument("forward: feature dimension does not match W1");

  ForwardResult out;
  Tape& tape = out.tape;
  tape.adjacency = &adjacency;
  tape.features = &features;
  tape.params_digest = digest(params);

  const Eigen::MatrixXd projected = features * params.w1;
  const Eigen::MatrixXd z = adjacency.matrix * projected;

  Eigen::MatrixXd& hidden = tape.hidden;
  if (training && params.dropout_rate > 0.0) {
    Rng rng(seed);
    const double keep = 1.0 - params.dropout_rate;
    Eigen::MatrixXd& mask = tape.mask;
    mask.resize(z.rows(), z.cols());
    for (Eigen::Index r = 0; r < mask.rows(); ++r)
      for (Eigen::Index c = 0; c < mask.cols(); ++c)
        mask(r, c) = rng.bernoulli(keep) ? 1.0 / keep : 0.0;
    hidden = z.cwiseProduct(mask).cwiseMax(0.0);
  } else {
    hidden = z.cwiseMax(0.0);
  }
  out.embeddings = adjacency.matrix * (hidden * params.w2);
  return out;
}

EncoderGradients backward(const EncoderParams& params, Tape& tape,
                          const Eigen::MatrixXd& grad_xi) {
  if (tape.consumed)
    throw InvalidArgument("backward: tape already consumed");
  if (tape.adjacency == nullptr || tape.params_digest != digest(params))
    throw InvalidArgument("backward: tape was recorded for different parameters");
  const auto& adjacency = *tape.adjacency;
  const auto& features = *tape.features;
  const auto& hidden = tape.hidden;
  const auto& mask = tape.mask;
  if (grad_xi.rows() != hidden.rows() || grad_xi.cols() != params.output_dim())
    throw InvalidArgument("backward: grad_xi has the wrong shape");
  tape.consumed = true;

  // A is symmetric, so A^T G = A G.
  const Eigen::MatrixXd propagated = adjacency.matrix * grad_xi;
  EncoderGradients g;
  g.w2 = hidden.transpose() * propagated;

  Eigen::MatrixXd d_hidden = propagated * params.w2.transpose();
  // hidden = max(mask * z, 0), so d/dz = mask * [hidden > 0].
  d_hidden = d_hidden.cwiseProduct((hidden.array() > 0.0).cast<double>().matrix());
  if (mask.size() != 0) d_hidden = d_hidden.cwiseProduct(mask);

  g.w1 = features.transpose() * (adjacency.matrix * d_hidden);
  return g;
}

void save_checkpoint(const std::filesystem::path& path,
                     const EncoderParams& params) {
  validate(params);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("checkpoint: cannot open " + path.string());
  out.write(kMagic.data(), kMagic.size());
  write_pod(out, static_cast<std::uint32_t>(params.input_dim()));
  write_pod(out, static_cast<std::uint32_t>(params.hidden_dim()));
  write_pod(out, static_cast<std::uint32_t>(params.output_dim()));
  write_pod(out, static_cast<float>(params.dropout_rate));
  write_block(out, params.w1);
  write_block(out, params.w2);
}

EncoderParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("checkpoint: cannot open " + path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw Error("checkpoint: bad magic");
  const auto d = read_pod<std::uint32_t>(in);
  const auto h1 = read_pod<std::uint32_t>(in);
  const auto h = read_pod<std::uint32_t>(in);
  EncoderParams p;
  p.dropout_rate = read_pod<float>(in);
  p.w1 = read_block(in, d, h1);
  p.w2 = read_block(in, h1, h);
  validate(p);
  return p;
}

}  // namespace drgl
