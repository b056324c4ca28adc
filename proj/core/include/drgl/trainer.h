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

#ifndef DRGL_TRAINER_H_
#define DRGL_TRAINER_H_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "drgl/adam.h"
#include "drgl/encoder.h"
#include "drgl/graph.h"
#include "drgl/lfd.h"

namespace drgl {

struct TrainConfig {
  double learning_rate = 1e-4;
  int epochs = 200;
  // 0 selects max(2M, 16).
  int miniset_size = 0;
  AdamConfig adam;
  DroConfig dro;
  std::uint64_t seed = 0;
  // +1 ascends on the total margin J (minimizes the worst-case risk M - J);
  // -1 descends on J as a literal reading of the update rule would.
  int objective_sign = 1;
  // With median-fraction radii, also differentiate the radius through the
  // median of the costs.
  bool differentiate_radius = true;
  // Reuse the first epoch's mini-set partition for every epoch.
  bool fixed_partition = false;
};

void validate(const TrainConfig& config, int num_classes);

int effective_miniset_size(const TrainConfig& config, int num_classes);

struct EpochRecord {
  int epoch = 0;  // 1-based
  double mean_margin = 0.0;
  double mean_risk = 0.0;
  double embedding_grad_norm = 0.0;
  double param_grad_norm = 0.0;
  int minisets = 0;
  int replicated = 0;
  double wall_seconds = 0.0;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  std::vector<std::string> repairs;
};

// One JSON object per epoch. Wall-clock time is left out so that reports
// of identical runs compare byte-for-byte; see timing_to_json().
nlohmann::json to_json(const EpochRecord& record);
nlohmann::json timing_to_json(const EpochRecord& record);

struct MiniSetPartition {
  std::vector<MiniSet> sets;
  std::vector<std::string> repairs;
  int replicated = 0;
};

// Shuffles the observed nodes and cuts them into consecutive mini-sets of
// `size`. A short trailing set lacking a class is merged into its
// predecessor. Any set still missing class m receives a member of m moved
// from the set holding most of them (if it can spare one) or, failing
// that, a replica of the lowest-index node of class m; each repair is
// logged.
MiniSetPartition make_minisets(const LabelSet& labels, int size,
                               std::uint64_t seed);

struct TrainResult {
  EncoderParams params;
  TrainReport report;
};

// DRGL training: per epoch, one dropout forward pass; per mini-set, the
// LFD program on the support embeddings and its envelope gradient; one
// encoder backward and one Adam step. Throws LfdSolveError on solver
// failure and NumericalError on a non-finite gradient.
TrainResult train(const Graph& graph, const LabelSet& labels,
                  EncoderParams params, const TrainConfig& config);

// Supervised warm start: encoder plus a linear softmax layer trained with
// cross-entropy on the observed nodes (the layer is discarded afterwards).
struct PretrainConfig {
  int epochs = 200;
  double learning_rate = 1e-2;
  double weight_decay = 5e-4;  // L2 on W1
  std::uint64_t seed = 0;
};

EncoderParams pretrain_supervised(const Graph& graph, const LabelSet& labels,
                                  EncoderParams params,
                                  const PretrainConfig& config);

}  // namespace drgl

#endif  // DRGL_TRAINER_H_
