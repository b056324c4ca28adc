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

#ifndef DRGL_EXPERIMENT_H_
#define DRGL_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "drgl/classify.h"
#include "drgl/encoder.h"
#include "drgl/graph.h"
#include "drgl/noise.h"
#include "drgl/synthetic.h"
#include "drgl/trainer.h"

namespace drgl {

enum class Mode { kVanilla, kDrgl };
enum class ClassifierKind { kSoftmax, kKnn, kKde, kLabelPropagation };

const char* to_string(Mode mode);
const char* to_string(ClassifierKind kind);

// Either a portable graph directory or a generated stochastic block model.
struct DatasetSource {
  std::string path;
  std::optional<SbmSpec> synthetic;
};

struct EncoderShape {
  int hidden = 16;
  int embedding = 16;
  double dropout = 0.5;
};

struct ExperimentConfig {
  DatasetSource dataset;
  int shots = 5;  // K observed nodes per class
  // Noise seeds are derived from each repetition's seed; noise.seed is
  // ignored.
  NoiseSpec noise;
  TrainConfig train;
  PretrainConfig pretrain;
  EncoderShape encoder;
  ClassifierKind classifier = ClassifierKind::kSoftmax;
  HeadConfig head;
  int knn_k = 5;
  std::optional<double> kde_bandwidth;  // Silverman when unset
  int lp_iterations = 50;
  int repetitions = 3;
  std::uint64_t base_seed = 0;
  Mode mode = Mode::kDrgl;

  // Grid for `sweep`; empty lists fall back to the single values above.
  std::vector<Mode> sweep_modes;
  std::vector<ClassifierKind> sweep_classifiers;
  std::vector<NoiseSpec> sweep_noise;
};

// Parses the JSON document; throws ConfigError naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

struct Dataset {
  Graph graph;
  LabelSet labels;
};

Dataset load_dataset(const DatasetSource& source);

// Keeps K observed nodes per class, drawn uniformly from the observed pool.
// Throws InvalidArgument when a class has fewer than K candidates.
LabelSet sample_few_shot(const LabelSet& labels, int shots, std::uint64_t seed);

// One cell of a result table and its individual repetitions.
struct ResultRow {
  std::string model;       // "GCN", "GCN_DRGL" or "LP"
  std::string classifier;  // "Softmax", "k-NN", "KDE" or "" for LP
  std::string setting;     // noise setting label
  std::vector<double> runs;
  double mean = 0.0;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  std::vector<std::string> settings;  // column order for markdown
};

std::string noise_label(const NoiseSpec& noise);

enum class TableFormat { kCsv, kMarkdown, kJson };

// Deterministic serialization. Markdown pivots settings into columns.
std::string emit_table(const ResultTable& table, TableFormat format);

// Artifacts of one trained-and-evaluated repetition.
struct RunArtifacts {
  Dataset noisy;          // corrupted graph and few-shot labels
  EncoderParams params;   // final encoder (vanilla or DRGL)
  TrainReport report;     // empty for vanilla
  Eigen::MatrixXd embeddings;
  PredictionSet predictions;  // every node
  double accuracy = 0.0;      // on the test split
};

struct ExperimentResult {
  ResultTable table;
  std::vector<nlohmann::json> report_lines;  // one per DRGL epoch
  std::vector<nlohmann::json> timing_lines;
  nlohmann::json metadata;
};

// Runs modes x classifiers x noise settings over cfg.repetitions seeds
// (base_seed + r). Vanilla and DRGL share the few-shot sample, the
// corruption, the initialization and the supervised warm start of a
// repetition; DRGL continues from the warm start.
ExperimentResult run_grid(const ExperimentConfig& config,
                          const std::vector<Mode>& modes,
                          const std::vector<ClassifierKind>& classifiers,
                          const std::vector<NoiseSpec>& noise);

// The single (mode, classifier, noise) cell described by the config.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Every sweep_* list (or the single value when a list is empty).
ExperimentResult run_sweep(const ExperimentConfig& config);

// Trains and evaluates one repetition for `mode` with cfg.classifier,
// keeping all intermediate artifacts.
RunArtifacts run_single(const Dataset& dataset, const ExperimentConfig& config,
                        Mode mode, const NoiseSpec& noise, int repetition);

// node,x,y,true_label,predicted,probability,entropy,observed
struct VizExport {
  std::string csv;
  bool degenerate = false;
};

VizExport export_embeddings_2d(const Eigen::MatrixXd& embeddings,
                               const PredictionSet& predictions,
                               const LabelSet& labels);

// node,predicted,p_0..p_{M-1},entropy
std::string predictions_csv(const PredictionSet& predictions);

}  // namespace drgl

#endif  // DRGL_EXPERIMENT_H_
